"""
Runtime invariants of the lowerbound families, checked on engine traces.

Each checker returns human-readable violations; an empty list means the
trace satisfies every law that applies to its family.
"""

from typing import List, Optional

import structlog

from bisim_lab.modules.families.models import FamilyTag
from bisim_lab.modules.families.service import prefix_of_block, recognize_family, stake_id
from bisim_lab.modules.lts_core.models import Lts, Partition, RefinementTrace
from bisim_lab.modules.lts_core.service import is_refinement
from bisim_lab.modules.oracle_es.service import project_level

logger = structlog.get_logger()


def bisplitter_violations(trace: RefinementTrace, k: int) -> List[str]:
    """Only prefix blocks, and every split is B_s -> {B_s0, B_s1}."""
    found: List[str] = []
    for index, pi in enumerate(trace.partitions):
        for states in pi.members:
            if prefix_of_block(states, k) is None:
                found.append(f"partition {index}: block {list(states)[:8]} is not a prefix block")
                return found

    for index, (before, after) in enumerate(zip(trace.partitions, trace.partitions[1:]), start=1):
        before_blocks = {frozenset(b) for b in before.members}
        for states in after.members:
            if frozenset(states) in before_blocks:
                continue
            child = prefix_of_block(states, k)
            parent = child.sub(1, child.length - 1)
            lo = parent.value << (k - parent.length)
            parent_states = frozenset(range(lo, lo + (1 << (k - parent.length))))
            if parent_states not in before_blocks:
                found.append(f"step {index}: block {child} does not come from a binary split of {parent}")
                return found
    return found


def sequential_canonical(n: int) -> List[Partition]:
    """The unique valid sequence of D_n: entry i is {1..n-1-i}, {n-i}, ..., {n}."""
    out = []
    for i in range(1, n):
        head = n - i
        out.append(Partition([0] * head + list(range(1, i + 1))))
    return out


def sequential_violations(trace: RefinementTrace, n: int) -> List[str]:
    expected = sequential_canonical(n)
    if list(trace.partitions) != expected:
        for index, (got, want) in enumerate(zip(trace.partitions, expected)):
            if got != want:
                return [f"partition {index} differs from the canonical sequence"]
        return [f"trace has {len(trace.partitions)} partitions, canonical sequence has {len(expected)}"]
    return []


def layered_violations(trace: RefinementTrace, k: int, final_only: bool = False) -> List[str]:
    """Downward separation on every partition; stake singletons at the end."""
    found: List[str] = []
    levels = 1 << k
    partitions = trace.partitions if not final_only else (trace.final,)
    for index, pi in enumerate(partitions):
        previous = project_level(pi, 1, k)
        for level in range(2, levels + 1):
            current = project_level(pi, level, k)
            if not is_refinement(current, previous):
                found.append(f"partition {index}: level {level} merges stakes separated at level {level - 1}")
                return found
            previous = current

    final = trace.final
    sizes = final.sizes
    for sigma in range(1 << k):
        for level in range(1, levels + 1):
            state = stake_id(sigma, level, k)
            if sizes[final.block_of[state]] != 1:
                found.append(f"final partition: stake state {state} is not a singleton")
                return found
    return found


def check_family_invariants(lts: Lts, trace: RefinementTrace, tag: Optional[FamilyTag] = None) -> List[str]:
    """Every family law that applies to this LTS; runs from other start partitions skip start-dependent laws."""
    tag = tag if tag is not None else recognize_family(lts)
    if tag is None:
        return []
    from_initial = trace.initial == lts.initial_partition
    if tag.name == "bisplitter" and from_initial:
        found = bisplitter_violations(trace, tag.param)
    elif tag.name == "layered" and tag.param >= 3 and from_initial:
        found = layered_violations(trace, tag.param)
    elif tag.name == "seqsplit" and from_initial:
        found = sequential_violations(trace, tag.param)
    else:
        found = []
    logger.info("Family invariants checked", family=str(tag), violations=len(found))
    return found
