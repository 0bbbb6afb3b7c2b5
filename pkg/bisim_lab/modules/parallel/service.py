"""
Parallel Service - round-based refinement, valid-refinement enumeration and
pointer jumping.

A round is a barrier: every block is split against the partition of the
previous round only, so a round's result never depends on processing order.
"""

import math
from typing import Iterable, List, Optional

import numpy as np
import structlog

from bisim_lab.config import get_settings
from bisim_lab.modules.families.models import FamilyTag
from bisim_lab.modules.lts_core.models import Lts, Partition, RefinementTrace
from bisim_lab.modules.lts_core.service import iter_valid_refinements, trace_from_partitions
from bisim_lab.modules.parallel.schemas import PointerJumpResult, RoundTrace
from bisim_lab.modules.refinement.schemas import BoundCheck
from bisim_lab.modules.refinement.service import signature_refinement
from bisim_lab.shared import metrics
from bisim_lab.shared.exceptions import BoundExceededError, InputError, UnsupportedInputError

logger = structlog.get_logger()


def parallel_round(lts: Lts, pi: Partition) -> Partition:
    """The finest valid refinement of pi (pi itself when stable)."""
    if pi.state_count != lts.state_count:
        raise InputError(f"partition covers {pi.state_count} states, LTS has {lts.state_count}")
    nxt = signature_refinement(lts, pi)
    return pi if nxt is None else nxt


def pirc_run(lts: Lts, start: Optional[Partition] = None) -> RoundTrace:
    """Iterate parallel rounds to stability."""
    partitions = [start if start is not None else lts.initial_partition]
    while True:
        nxt = parallel_round(lts, partitions[-1])
        if nxt is partitions[-1]:
            break
        partitions.append(nxt)
    trace = RoundTrace(partitions=tuple(partitions))
    metrics.record_rounds(trace.rounds)
    logger.info("Parallel run complete", n=lts.state_count, rounds=trace.rounds, final_blocks=trace.final.block_count)
    return trace


def round_trace_as_refinement(trace: RoundTrace) -> RefinementTrace:
    """The round sequence as a costed refinement trace."""
    return trace_from_partitions(trace.partitions, strategy="parallel-rounds")


def round_bound_checks(tag: Optional[FamilyTag], trace: RoundTrace) -> List[BoundCheck]:
    """Round counts the lowerbound families are known to need."""
    if tag is None:
        return []
    if tag.name == "fanin":
        return [BoundCheck.compare("fanin-rounds", "==", 1, trace.rounds)]
    if tag.name == "bisplitter":
        return [BoundCheck.compare("bisplitter-rounds", "==", tag.param - 1, trace.rounds)]
    if tag.name == "seqsplit":
        return [
            BoundCheck.compare("sequential-rounds", "==", tag.param - 2, trace.rounds),
            BoundCheck.compare("sequential-partitions", "==", tag.param - 1, trace.partition_count),
        ]
    return []


def enumerate_valid_refinements(lts: Lts, pi: Partition, limit: Optional[int] = None) -> List[Partition]:
    """All valid refinements of pi, or the first ``limit`` of them."""
    bound = get_settings().max_enumerate
    if limit is None and lts.state_count > bound:
        raise BoundExceededError("enumerate_valid_refinements", lts.state_count, bound)
    out: List[Partition] = []
    for candidate in iter_valid_refinements(lts, pi):
        if limit is not None and len(out) >= limit:
            break
        out.append(candidate)
    return out


def pointer_jump_distances(lts: Lts, target: Iterable[int]) -> PointerJumpResult:
    """Distances to ``target`` along a functional chain, by synchronous pointer jumping."""
    n = lts.state_count
    in_target = np.zeros(n, dtype=bool)
    for t in target:
        if not 0 <= t < n:
            raise InputError(f"target state {t} out of range 0..{n - 1}")
        in_target[t] = True
    if not in_target.any():
        raise InputError("target set is empty")

    nxt = np.arange(n)
    for s in range(n):
        if in_target[s]:
            continue
        successors = {t for per_action in lts.succ for t in per_action[s]}
        if len(successors) != 1:
            raise UnsupportedInputError(
                f"pointer jumping needs exactly one successor outside the target; state {s} has {len(successors)}"
            )
        nxt[s] = successors.pop()

    weight = (~in_target).astype(np.int64)
    limit = max(1, math.ceil(math.log2(n))) + 1 if n > 1 else 1
    rounds = 0
    while not in_target[nxt].all():
        if rounds >= limit:
            raise UnsupportedInputError("input is not a chain into the target (a cycle avoids it)")
        # all reads see the previous round
        weight = weight + weight[nxt]
        nxt = nxt[nxt]
        rounds += 1

    logger.debug("Pointer jumping complete", n=n, rounds=rounds)
    return PointerJumpResult(distances=tuple(int(x) for x in weight), rounds=rounds)
