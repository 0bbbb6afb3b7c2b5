"""End-structure oracle schemas."""

from dataclasses import dataclass

from bisim_lab.modules.lts_core.models import Lts, Partition, RefinementTrace
from bisim_lab.modules.lts_core.service import is_refinement


@dataclass(frozen=True)
class OracleRun:
    """A refinement run started from the oracle-updated initial partition."""

    base_lts: Lts
    updated_partition: Partition
    trace: RefinementTrace
    oracle_classes: int

    def __post_init__(self):
        assert is_refinement(self.updated_partition, self.base_lts.initial_partition)
