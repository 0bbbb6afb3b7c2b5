"""
LTS Core Service - stability, validity, cost and brute-force oracles.

Everything here is a pure function of its inputs. The bisimilarity oracle
never calls the refinement engines.
"""

from collections import deque
from itertools import product
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Set, Tuple

import numpy as np
import structlog

from bisim_lab.config import get_settings
from bisim_lab.modules.lts_core.models import Lts, Partition, RefinementTrace, Splitter
from bisim_lab.shared.exceptions import BoundExceededError, InputError

logger = structlog.get_logger()

ORACLE_METHODS = ("auto", "pairwise", "fixpoint")


class Violation(NamedTuple):
    """Why a refinement step is not valid; pair is None for whole-partition failures."""

    pair: Optional[Tuple[int, int]]
    reason: str


def _require_cover(lts: Lts, pi: Partition, what: str = "partition") -> None:
    if pi.state_count != lts.state_count:
        raise InputError(f"{what} covers {pi.state_count} states, LTS has {lts.state_count}")


def signature(lts: Lts, pi: Partition, state: int) -> Tuple[Tuple[int, ...], ...]:
    """Per action, the sorted set of pi-blocks reached from ``state`` in one step."""
    block_of = pi.block_of
    return tuple(
        tuple(sorted({int(block_of[t]) for t in per_action[state]}))
        for per_action in lts.succ
    )


# Predicates

def is_stable_under(lts: Lts, pi: Partition, splitter: Iterable[int]) -> bool:
    """True iff no block of pi is split by reachability of ``splitter`` under any action."""
    _require_cover(lts, pi)
    n = lts.state_count
    mask = np.zeros(n, dtype=bool)
    for s in splitter:
        if not 0 <= s < n:
            raise InputError(f"splitter state {s} out of range 0..{n - 1}")
        mask[s] = True
    if not mask.any():
        return True

    sizes = pi.sizes
    for a in range(len(lts.actions)):
        sel = (lts.act == a) & mask[lts.dst]
        reaches = np.zeros(n, dtype=bool)
        reaches[lts.src[sel]] = True
        hits = np.bincount(pi.block_of, weights=reaches.astype(np.float64), minlength=pi.block_count)
        if ((hits > 0) & (hits < sizes)).any():
            return False
    return True


def is_stable(lts: Lts, pi: Partition) -> bool:
    """True iff pi is stable under every one of its own blocks."""
    _require_cover(lts, pi)
    if lts.transition_count == 0:
        return True
    n = lts.state_count
    b = pi.block_count
    block_of = pi.block_of.astype(np.int64)

    # distinct (action, target block, source) triples
    reached = np.unique((lts.act * b + block_of[lts.dst]) * n + lts.src)
    source = reached % n
    group = reached // n

    # per (action, target block, source block): how many sources reach it
    keys, counts = np.unique(group * b + block_of[source], return_counts=True)
    return bool((counts == pi.sizes[keys % b]).all())


def is_refinement(fine: Partition, coarse: Partition) -> bool:
    """True iff every block of ``fine`` lies inside one block of ``coarse``."""
    if fine.state_count != coarse.state_count:
        raise InputError(
            f"partitions cover different state counts ({fine.state_count} vs {coarse.state_count})"
        )
    pairs = np.unique(fine.block_of.astype(np.int64) * coarse.block_count + coarse.block_of)
    return int(pairs.size) == fine.block_count


def _changed_blocks(pi: Partition, pi_next: Partition) -> np.ndarray:
    """Ids of pi-blocks that pi_next splits (pi_next must refine pi)."""
    lo = np.full(pi.block_count, np.iinfo(np.int32).max, dtype=np.int64)
    hi = np.full(pi.block_count, -1, dtype=np.int64)
    np.minimum.at(lo, pi.block_of, pi_next.block_of)
    np.maximum.at(hi, pi.block_of, pi_next.block_of)
    return np.flatnonzero(lo != hi)


def _has_witness(lts: Lts, pi: Partition, s: int, t: int) -> bool:
    """Some s -a-> s' such that every t -a-> t' has t' in another pi-block than s'."""
    block_of = pi.block_of
    for per_action in lts.succ:
        t_blocks = {int(block_of[x]) for x in per_action[t]}
        for s_next in per_action[s]:
            if int(block_of[s_next]) not in t_blocks:
                return True
    return False


def refinement_violation(
    lts: Lts,
    pi: Partition,
    pi_next: Partition,
    literal: bool = False,
) -> Optional[Violation]:
    """First reason pi -> pi_next is not a valid refinement, or None if it is."""
    _require_cover(lts, pi)
    _require_cover(lts, pi_next, "refined partition")

    if not is_refinement(pi_next, pi):
        for states in pi_next.members:
            coarse = pi.block_of[list(states)]
            if (coarse != coarse[0]).any():
                other = states[int(np.flatnonzero(coarse != coarse[0])[0])]
                return Violation((states[0], other), "not a refinement: states merged across blocks")
        return Violation(None, "not a refinement")
    if pi_next == pi:
        return Violation(None, "not a strict refinement")

    for block_id in _changed_blocks(pi, pi_next):
        states = pi.members[int(block_id)]
        if literal:
            for i, s in enumerate(states):
                for t in states[i + 1:]:
                    if pi_next.same_block(s, t):
                        continue
                    if not (_has_witness(lts, pi, s, t) or _has_witness(lts, pi, t, s)):
                        return Violation((s, t), "separated without a witness")
        else:
            # a witness exists iff the per-action reached block sets differ
            representative: Dict[Tuple[Tuple[int, ...], ...], int] = {}
            for s in states:
                sig = signature(lts, pi, s)
                rep = representative.setdefault(sig, s)
                if not pi_next.same_block(rep, s):
                    return Violation((rep, s), "separated without a witness")
    return None


def is_valid_refinement(lts: Lts, pi: Partition, pi_next: Partition, literal: bool = False) -> bool:
    """Strict refinement in which every separated pair has a one-step witness."""
    return refinement_violation(lts, pi, pi_next, literal=literal) is None


# Partition algebra

def common_refinement(p1: Partition, p2: Partition) -> Partition:
    """Nonempty pairwise intersections of the blocks of p1 and p2."""
    if p1.state_count != p2.state_count:
        raise InputError(
            f"partitions cover different state counts ({p1.state_count} vs {p2.state_count})"
        )
    return Partition.from_array_labels(
        p1.block_of.astype(np.int64) * p2.block_count + p2.block_of
    )


def refinement_cost(pi: Partition, pi_next: Partition) -> int:
    """Sum over blocks B of pi of |B| minus the largest pi_next-block inside B."""
    if not is_refinement(pi_next, pi):
        raise InputError("refinement cost is only defined when the second partition refines the first")
    keys, counts = np.unique(
        pi.block_of.astype(np.int64) * pi_next.block_count + pi_next.block_of,
        return_counts=True,
    )
    largest = np.zeros(pi.block_count, dtype=np.int64)
    np.maximum.at(largest, keys // pi_next.block_count, counts)
    return int(pi.state_count - largest.sum())


def trace_from_partitions(
    partitions: Sequence[Partition],
    splitters: Optional[Sequence[Optional[Splitter]]] = None,
    strategy: Optional[str] = None,
) -> RefinementTrace:
    """Wrap a partition sequence as a trace, charging each step its refinement cost."""
    partitions = tuple(partitions)
    costs = tuple(
        refinement_cost(before, after)
        for before, after in zip(partitions, partitions[1:])
    )
    return RefinementTrace(
        partitions=partitions,
        step_costs=costs,
        splitters=tuple(splitters) if splitters else (),
        strategy=strategy,
    )


# Bisimilarity oracle

def bisimilarity_oracle(lts: Lts, method: str = "auto") -> Partition:
    """Partition induced by the greatest bisimulation respecting the initial partition."""
    if method not in ORACLE_METHODS:
        raise InputError(f"unknown oracle method {method!r}; expected one of {', '.join(ORACLE_METHODS)}")
    if method == "auto":
        limit = get_settings().oracle_pairwise_max_states
        method = "pairwise" if lts.state_count <= limit else "fixpoint"
    result = _pairwise_oracle(lts) if method == "pairwise" else _fixpoint_oracle(lts)
    logger.debug("Oracle computed", method=method, n=lts.state_count, classes=result.block_count)
    return result


def _pairwise_oracle(lts: Lts) -> Partition:
    """Relation fixpoint: drop pairs lacking matching transitions, recheck predecessor pairs."""
    n = lts.state_count
    block_of = lts.initial_partition.block_of
    related = block_of[:, None] == block_of[None, :]
    succ, pred = lts.succ, lts.pred

    def matches(s: int, t: int) -> bool:
        for per_action in succ:
            s_next, t_next = per_action[s], per_action[t]
            for x in s_next:
                if not any(related[x, y] for y in t_next):
                    return False
            for y in t_next:
                if not any(related[x, y] for x in s_next):
                    return False
        return True

    queue = deque((s, t) for s in range(n) for t in range(s + 1, n) if related[s, t])
    queued = set(queue)
    while queue:
        s, t = queue.popleft()
        queued.discard((s, t))
        if not related[s, t] or matches(s, t):
            continue
        related[s, t] = related[t, s] = False
        for per_action in pred:
            for p in per_action[s]:
                for q in per_action[t]:
                    pair = (p, q) if p < q else (q, p)
                    if p != q and related[pair] and pair not in queued:
                        queued.add(pair)
                        queue.append(pair)

    # each row's first related state names the class
    return Partition.from_array_labels(np.argmax(related, axis=1)) if n else Partition.unit(0)


def _fixpoint_oracle(lts: Lts) -> Partition:
    """Naive whole-partition signature iteration, for inputs too large for pairwise."""
    labels = list(lts.initial_partition.canonical)
    count = len(set(labels))
    while True:
        table: Dict[tuple, int] = {}
        fresh = []
        for s in range(lts.state_count):
            key = (labels[s],) + tuple(
                tuple(sorted({labels[t] for t in per_action[s]})) for per_action in lts.succ
            )
            fresh.append(table.setdefault(key, len(table)))
        labels = fresh
        if len(table) == count:
            return Partition.from_labels(labels)
        count = len(table)


# Exhaustive search

def set_partitions(items: Sequence) -> Iterator[List[List]]:
    """All set partitions of ``items``; groups keep input order."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for smaller in set_partitions(rest):
        yield [[first]] + smaller
        for index in range(len(smaller)):
            yield smaller[:index] + [[first] + smaller[index]] + smaller[index + 1:]


def signature_atoms(lts: Lts, pi: Partition) -> List[List[List[int]]]:
    """Per pi-block, its states grouped by one-step signature (atoms ordered by least state)."""
    atoms: List[List[List[int]]] = []
    for states in pi.members:
        groups: Dict[tuple, List[int]] = {}
        for s in states:
            groups.setdefault(signature(lts, pi, s), []).append(s)
        atoms.append(list(groups.values()))
    return atoms


def iter_valid_refinements(lts: Lts, pi: Partition) -> Iterator[Partition]:
    """
    Every valid refinement of pi.

    A valid refinement never separates two states of equal signature, so it
    is exactly a choice of set partition of the signature atoms inside each
    block, minus the choice that splits nothing.
    """
    _require_cover(lts, pi)
    atoms = signature_atoms(lts, pi)
    splittable = [i for i, block_atoms in enumerate(atoms) if len(block_atoms) > 1]
    if not splittable:
        return

    choices = [list(set_partitions(atoms[i])) for i in splittable]
    for combination in product(*choices):
        if all(len(groups) == 1 for groups in combination):
            continue
        labels = np.asarray(pi.block_of, dtype=np.int64) * (lts.state_count + 1)
        for groups in combination:
            for index, group in enumerate(groups):
                for atom in group:
                    labels[atom] += index
        yield Partition.from_array_labels(labels)


def _check_brute_bound(lts: Lts, what: str) -> None:
    bound = get_settings().max_brute
    if lts.state_count > bound:
        raise BoundExceededError(what, lts.state_count, bound)


def min_irc_bruteforce(lts: Lts) -> int:
    """Minimum total IRC over all valid refinement sequences from the initial partition."""
    _check_brute_bound(lts, "min_irc_bruteforce")
    memo: Dict[Partition, int] = {}

    def best(pi: Partition) -> int:
        if pi in memo:
            return memo[pi]
        costs = [
            refinement_cost(pi, nxt) + best(nxt)
            for nxt in iter_valid_refinements(lts, pi)
        ]
        memo[pi] = min(costs) if costs else 0
        return memo[pi]

    result = best(lts.initial_partition)
    logger.info("Brute-force IRC computed", n=lts.state_count, explored=len(memo), min_irc=result)
    return result


def valid_sequence_endpoints(lts: Lts) -> Set[Partition]:
    """Final partitions of all valid refinement sequences from the initial partition."""
    _check_brute_bound(lts, "valid_sequence_endpoints")
    memo: Dict[Partition, Set[Partition]] = {}

    def ends(pi: Partition) -> Set[Partition]:
        if pi not in memo:
            found: Set[Partition] = set()
            for nxt in iter_valid_refinements(lts, pi):
                found |= ends(nxt)
            memo[pi] = found or {pi}
        return memo[pi]

    return ends(lts.initial_partition)
