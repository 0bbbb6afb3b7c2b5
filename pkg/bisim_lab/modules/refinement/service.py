"""
Refinement Service - engines emitting costed, checkable refinement traces.

Block ids follow one rule everywhere: when a block splits, its largest part
keeps the id (ties go to the part holding the smallest state) and the other
parts get fresh ids appended in order of their smallest state.
"""

import heapq
import math
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np
import structlog
from scipy import stats

from bisim_lab.config import get_settings
from bisim_lab.modules.families.models import FamilyTag
from bisim_lab.modules.families.service import generate, recognize_family
from bisim_lab.modules.lts_core.models import Lts, Partition, RefinementTrace, Splitter
from bisim_lab.modules.lts_core.service import (
    is_stable,
    refinement_cost,
    refinement_violation,
    signature,
    trace_from_partitions,
)
from bisim_lab.modules.refinement.schemas import (
    BoundCheck,
    CostReport,
    Strategy,
    SweepRow,
    TraceVerdict,
)
from bisim_lab.shared import metrics
from bisim_lab.shared.exceptions import InputError

logger = structlog.get_logger()


def _split_blocks(
    block_of: List[int],
    members: List[List[int]],
    parts_by_block: Sequence[Tuple[int, List[List[int]]]],
) -> List[int]:
    """Apply splits in place; returns the ids of every block whose contents changed."""
    touched: List[int] = []
    for block_id, parts in parts_by_block:
        parts = sorted(parts, key=min)
        keep = max(range(len(parts)), key=lambda i: (len(parts[i]), -min(parts[i])))
        members[block_id] = sorted(parts[keep])
        touched.append(block_id)
        for index, part in enumerate(parts):
            if index == keep:
                continue
            fresh = len(members)
            members.append(sorted(part))
            for s in part:
                block_of[s] = fresh
            touched.append(fresh)
    return touched


def _signature_parts(lts: Lts, pi: Partition) -> List[Tuple[int, List[List[int]]]]:
    """Blocks of pi with more than one one-step signature, grouped by signature."""
    out = []
    for block_id, states in enumerate(pi.members):
        groups: Dict[tuple, List[int]] = {}
        for s in states:
            groups.setdefault(signature(lts, pi, s), []).append(s)
        if len(groups) > 1:
            out.append((block_id, list(groups.values())))
    return out


def _splitter_parts(
    lts: Lts,
    block_of: Sequence[int],
    members: Sequence[Sequence[int]],
    splitter: int,
    action: int,
) -> List[Tuple[int, List[List[int]]]]:
    """Blocks cut by reachability of ``splitter`` under ``action``: (block, [inside, outside])."""
    pred = lts.pred[action]
    reaching: Set[int] = set()
    for t in members[splitter]:
        reaching.update(pred[t])
    hits: Dict[int, List[int]] = {}
    for s in reaching:
        hits.setdefault(block_of[s], []).append(s)
    out = []
    for block_id in sorted(hits):
        inside = hits[block_id]
        if len(inside) < len(members[block_id]):
            inside_set = set(inside)
            outside = [s for s in members[block_id] if s not in inside_set]
            out.append((block_id, [inside, outside]))
    return out


def signature_refinement(lts: Lts, pi: Partition) -> Optional[Partition]:
    """Split every block by one-step signature; None when nothing splits."""
    parts = _signature_parts(lts, pi)
    if not parts:
        return None
    block_of = [int(x) for x in pi.block_of]
    members = [list(b) for b in pi.members]
    _split_blocks(block_of, members, parts)
    return Partition(block_of)


def _single_splitter_step(lts: Lts, pi: Partition) -> Optional[Tuple[Partition, Splitter]]:
    block_of = [int(x) for x in pi.block_of]
    members = [list(b) for b in pi.members]
    for splitter in range(pi.block_count):
        for action in range(len(lts.actions)):
            parts = _splitter_parts(lts, block_of, members, splitter, action)
            if parts:
                _split_blocks(block_of, members, parts)
                return Partition(block_of), Splitter(splitter, lts.actions[action])
    return None


def refine_step(lts: Lts, pi: Partition, strategy: Strategy) -> Optional[Partition]:
    """One refinement step under ``strategy``; None when pi is already stable."""
    if pi.state_count != lts.state_count:
        raise InputError(f"partition covers {pi.state_count} states, LTS has {lts.state_count}")
    if Strategy(strategy) is Strategy.FULL_SIGNATURE:
        return signature_refinement(lts, pi)
    result = _single_splitter_step(lts, pi)
    return result[0] if result else None


class RefinementEngine:
    """Runs one strategy to a stable partition, recording every step."""

    def __init__(self, lts: Lts, strategy: Strategy = Strategy.SINGLE_SPLITTER):
        self.lts = lts
        self.strategy = Strategy(strategy)
        self.check_invariants = get_settings().check_invariants

    def run(self, start: Optional[Partition] = None) -> RefinementTrace:
        start = start if start is not None else self.lts.initial_partition
        if start.state_count != self.lts.state_count:
            raise InputError(
                f"start partition covers {start.state_count} states, LTS has {self.lts.state_count}"
            )
        if self.strategy is Strategy.FULL_SIGNATURE:
            partitions, splitters = self._run_signature(start)
        else:
            partitions, splitters = self._run_single_splitter(start)

        if self.check_invariants:
            for pi in partitions:
                pi.check_consistency()

        trace = trace_from_partitions(partitions, splitters, strategy=self.strategy.value)
        metrics.record_run(self.strategy.value, trace.steps, trace.total_irc)
        logger.info(
            "Refinement run complete",
            strategy=self.strategy.value,
            n=self.lts.state_count,
            m=self.lts.transition_count,
            steps=trace.steps,
            total_irc=trace.total_irc,
            final_blocks=trace.final.block_count,
        )
        return trace

    def _run_signature(self, start: Partition):
        partitions = [start]
        while True:
            nxt = signature_refinement(self.lts, partitions[-1])
            if nxt is None:
                return partitions, [None] * (len(partitions) - 1)
            partitions.append(nxt)

    def _run_single_splitter(self, start: Partition):
        lts = self.lts
        action_count = len(lts.actions)
        block_of = [int(x) for x in start.block_of]
        members = [list(b) for b in start.members]

        # (splitter, action) pairs outside this set are known to be stable
        dirty = [(b, a) for b in range(len(members)) for a in range(action_count)]
        heapq.heapify(dirty)
        pending = set(dirty)

        partitions = [start]
        splitters: List[Splitter] = []
        while dirty:
            pair = heapq.heappop(dirty)
            pending.discard(pair)
            splitter, action = pair
            parts = _splitter_parts(lts, block_of, members, splitter, action)
            if not parts:
                continue
            for block_id in _split_blocks(block_of, members, parts):
                for a in range(action_count):
                    if (block_id, a) not in pending:
                        pending.add((block_id, a))
                        heapq.heappush(dirty, (block_id, a))
            partitions.append(Partition(np.asarray(block_of, dtype=np.int32)))
            splitters.append(Splitter(splitter, lts.actions[action]))
        return partitions, splitters


def run_to_stable(
    lts: Lts,
    strategy: Strategy = Strategy.SINGLE_SPLITTER,
    start: Optional[Partition] = None,
) -> RefinementTrace:
    """Refine from the initial partition (or ``start``) until stable."""
    return RefinementEngine(lts, strategy).run(start)


# Costs and bounds

def bisplitter_cost(k: int) -> int:
    """Exact IRC of every valid sequence for B_k: (k-1) * 2^(k-1)."""
    return (k - 1) << (k - 1) if k >= 1 else 0


def oracle_bisplitter_bound(k: int) -> int:
    """Lower bound for oracle runs on B_k: IRC(B_{k-2}) = (k-3) * 2^(k-3)."""
    return bisplitter_cost(k - 2) if k >= 3 else 0


def layered_bound(k: int) -> int:
    """Lower bound 2^k * IRC(B_k) for C_k."""
    return (1 << k) * bisplitter_cost(k)


def family_bound_checks(tag: Optional[FamilyTag], trace: RefinementTrace, oracle: bool = False) -> List[BoundCheck]:
    if tag is None:
        return []
    checks: List[BoundCheck] = []
    if tag.name == "bisplitter":
        k = tag.param
        if oracle:
            if k >= 4:
                checks.append(BoundCheck.compare(
                    "bisplitter-oracle-lower-bound", ">=", oracle_bisplitter_bound(k), trace.total_irc
                ))
        else:
            checks.append(BoundCheck.compare("bisplitter-exact-cost", "==", bisplitter_cost(k), trace.total_irc))
    elif tag.name == "layered":
        k = tag.param
        if oracle:
            if k >= 5:
                checks.append(BoundCheck.compare(
                    "layered-oracle-lower-bound", ">=", layered_bound(k - 2), trace.total_irc
                ))
        elif k >= 3:
            checks.append(BoundCheck.compare("layered-lower-bound", ">=", layered_bound(k), trace.total_irc))
    elif tag.name == "seqsplit":
        checks.append(BoundCheck.compare("sequential-refinements", "==", tag.param - 2, trace.steps))
    return checks


def _require_matching(lts: Lts, trace: RefinementTrace) -> None:
    for pi in trace.partitions:
        if pi.state_count != lts.state_count:
            raise InputError(
                f"trace partition covers {pi.state_count} states, LTS has {lts.state_count}"
            )


def trace_costs(lts: Lts, trace: RefinementTrace, oracle: bool = False) -> CostReport:
    """Measured cost figures for a trace plus bound checks for recognized families."""
    _require_matching(lts, trace)
    tag = recognize_family(lts)
    return CostReport(
        family=tag.name if tag else None,
        param=tag.param if tag else None,
        strategy=trace.strategy,
        oracle=oracle,
        n=lts.state_count,
        m=lts.transition_count,
        steps=trace.steps,
        total_irc=trace.total_irc,
        final_blocks=trace.final.block_count,
        step_costs=list(trace.step_costs),
        bound_checks=family_bound_checks(tag, trace, oracle),
    )


def verify_trace(lts: Lts, trace: RefinementTrace, expect_start: Optional[Partition] = None) -> TraceVerdict:
    """Every step valid, costs as recorded, last partition stable; first failure reported."""
    for pi in trace.partitions:
        if pi.state_count != lts.state_count:
            return TraceVerdict(ok=False, reason="trace does not cover the LTS states")

    expected = expect_start if expect_start is not None else lts.initial_partition
    if trace.initial != expected:
        return TraceVerdict(ok=False, step=0, reason="trace does not start at the expected partition")

    for index, (before, after) in enumerate(zip(trace.partitions, trace.partitions[1:]), start=1):
        violation = refinement_violation(lts, before, after)
        if violation is not None:
            return TraceVerdict(ok=False, step=index, pair=violation.pair, reason=violation.reason)
        if trace.step_costs[index - 1] != refinement_cost(before, after):
            return TraceVerdict(ok=False, step=index, reason="recorded cost differs from the refinement cost")

    if not is_stable(lts, trace.final):
        return TraceVerdict(ok=False, step=trace.steps, reason="final partition is not stable")
    return TraceVerdict(ok=True)


# Cost curves

def cost_sweep(
    family: str,
    params: Sequence[int],
    strategy: Strategy = Strategy.SINGLE_SPLITTER,
) -> List[SweepRow]:
    """Run ``family`` at each parameter and collect the measured cost curve."""
    rows = []
    for param in params:
        if family == "seqsplit":
            lts = generate(family, n=param)
        else:
            lts = generate(family, k=param)
        trace = run_to_stable(lts, strategy)
        bound = None
        if family == "bisplitter":
            bound = bisplitter_cost(param)
        elif family == "layered" and param >= 3:
            bound = layered_bound(param)
        elif family == "seqsplit":
            bound = param - 2
        rows.append(SweepRow(
            param=param,
            n=lts.state_count,
            m=lts.transition_count,
            steps=trace.steps,
            total_irc=trace.total_irc,
            bound=bound,
        ))
    logger.info("Cost sweep complete", family=family, points=len(rows), strategy=Strategy(strategy).value)
    return rows


def fit_cost_slope(points: Sequence[Tuple[int, int]]) -> float:
    """Least-squares slope of log(total_irc) against log(n log n)."""
    usable = [(n, cost) for n, cost in points if n > 1 and cost > 0]
    if len(usable) < 2:
        raise InputError("slope fit needs at least two points with n > 1 and positive cost")
    x = [math.log(n * math.log2(n)) for n, _ in usable]
    y = [math.log(cost) for _, cost in usable]
    return float(stats.linregress(x, y).slope)
