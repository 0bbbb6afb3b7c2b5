"""
Oracle Service - end-structure oracle runs and the projection maps that
carry bisplitter traces down to smaller bisplitters.

The oracle's own work is free: it never appears in any IRC figure.
"""

from typing import List, Optional, Sequence

import numpy as np
import structlog

from bisim_lab.modules.families.service import MAX_LAYERED_K, layered_state_count, stake_id
from bisim_lab.modules.lts_core.models import Lts, Partition, RefinementTrace
from bisim_lab.modules.lts_core.service import bisimilarity_oracle, trace_from_partitions
from bisim_lab.modules.oracle_es.schemas import OracleRun
from bisim_lab.modules.refinement.schemas import Strategy
from bisim_lab.modules.refinement.service import run_to_stable
from bisim_lab.modules.roberts.service import end_structures
from bisim_lab.shared.exceptions import InputError

logger = structlog.get_logger()


def _end_structure_classes(lts: Lts, oracle: Partition) -> List[int]:
    """Oracle classes that contain at least one end-structure state."""
    classes = set()
    for structure in end_structures(lts):
        for s in structure.states:
            classes.add(int(oracle.block_of[s]))
    return sorted(classes)


def end_structure_partition(lts: Lts, oracle: Optional[Partition] = None) -> Partition:
    """Bisimulation classes of end-structure states; everything else grouped by initial block."""
    oracle = oracle if oracle is not None else bisimilarity_oracle(lts)
    es_classes = set(_end_structure_classes(lts, oracle))
    initial = lts.initial_partition.block_of
    labels = [
        ("class", int(oracle.block_of[s])) if int(oracle.block_of[s]) in es_classes
        else ("rest", int(initial[s]))
        for s in range(lts.state_count)
    ]
    return Partition.from_labels(labels)


def run_with_oracle(lts: Lts, strategy: Strategy = Strategy.SINGLE_SPLITTER) -> OracleRun:
    """Refine to stability from the end-structure partition instead of the initial one."""
    oracle = bisimilarity_oracle(lts)
    updated = end_structure_partition(lts, oracle)
    trace = run_to_stable(lts, strategy, start=updated)
    run = OracleRun(
        base_lts=lts,
        updated_partition=updated,
        trace=trace,
        oracle_classes=len(_end_structure_classes(lts, oracle)),
    )
    logger.info(
        "Oracle run complete",
        n=lts.state_count,
        updated_blocks=updated.block_count,
        oracle_classes=run.oracle_classes,
        steps=trace.steps,
        total_irc=trace.total_irc,
    )
    return run


# Projections

def project_prefix11(pi: Partition, k: int) -> Partition:
    """Restrict a partition of B^k to the states 11.sigma and drop the prefix."""
    if k <= 2:
        raise InputError("prefix-11 projection needs k > 2")
    if pi.state_count != 1 << k:
        raise InputError(f"partition covers {pi.state_count} states, B^{k} has {1 << k}")
    offset = 3 << (k - 2)
    return Partition.from_array_labels(pi.block_of[offset:])


def layered_k(state_count: int) -> int:
    """The k with |C_k| = state_count."""
    for k in range(2, MAX_LAYERED_K + 1):
        if layered_state_count(k) == state_count:
            return k
    raise InputError(f"{state_count} states is not the size of any layered bisplitter")


def project_level(pi: Partition, level: int, k: Optional[int] = None) -> Partition:
    """Partition of B^k induced on the stake states [sigma, level]."""
    k = k if k is not None else layered_k(pi.state_count)
    if pi.state_count != layered_state_count(k):
        raise InputError(f"partition covers {pi.state_count} states, C_{k} has {layered_state_count(k)}")
    if not 1 <= level <= 1 << k:
        raise InputError(f"level {level} outside 1..{1 << k}")
    ids = np.asarray([stake_id(sigma, level, k) for sigma in range(1 << k)])
    return Partition.from_array_labels(pi.block_of[ids])


def dedupe_partitions(sequence: Sequence[Partition]) -> List[Partition]:
    """Drop repeated partitions; in a refinement sequence repeats are adjacent."""
    out: List[Partition] = []
    for pi in sequence:
        if not out or out[-1] != pi:
            out.append(pi)
    return out


def project_trace_prefix11(trace: RefinementTrace, k: int) -> RefinementTrace:
    """Projected, deduplicated and re-costed trace over B^(k-2)."""
    projected = dedupe_partitions([project_prefix11(pi, k) for pi in trace.partitions])
    return trace_from_partitions(projected, strategy=trace.strategy)


def project_trace_level(trace: RefinementTrace, level: int, k: Optional[int] = None) -> RefinementTrace:
    """Projected, deduplicated and re-costed trace over B^k at one stake level."""
    projected = dedupe_partitions([project_level(pi, level, k) for pi in trace.partitions])
    return trace_from_partitions(projected, strategy=trace.strategy)
