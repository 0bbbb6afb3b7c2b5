"""Parallel simulation schemas."""

from dataclasses import dataclass
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field

from bisim_lab.modules.lts_core.models import Partition
from bisim_lab.modules.refinement.schemas import BoundCheck


@dataclass(frozen=True)
class RoundTrace:
    """Partitions after each parallel round, starting with the round-0 partition."""

    partitions: Tuple[Partition, ...]

    @property
    def rounds(self) -> int:
        """Refinements performed (the PIRC of this sequence)."""
        return len(self.partitions) - 1

    @property
    def partition_count(self) -> int:
        return len(self.partitions)

    @property
    def block_counts(self) -> List[int]:
        return [pi.block_count for pi in self.partitions]

    @property
    def final(self) -> Partition:
        return self.partitions[-1]


@dataclass(frozen=True)
class PointerJumpResult:
    """Distance of every state to the target set, and the jumping rounds used."""

    distances: Tuple[int, ...]
    rounds: int


class ParallelReport(BaseModel):
    """Round counts written by the parallel command."""

    family: Optional[str] = None
    param: Optional[int] = None
    n: int
    m: int
    rounds: int
    partition_count: int
    block_counts: List[int]
    bound_checks: List[BoundCheck] = Field(default_factory=list)
    partitions: Optional[List[List[List[str]]]] = None
