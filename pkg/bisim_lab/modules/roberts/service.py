"""
Roberts Service - linear-time bisimilarity for deterministic one-action LTSs.

Each state reads an infinite word of initial-block symbols along its unique
path. Cycle states get the least repeating prefix of their cycle word, named
by its least rotation and a phase. Tree states extend their successor's
class by one symbol, folding the symbol into the rotation when it equals
the rotation's last symbol.
"""

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, TypeVar

import structlog

from bisim_lab.modules.lts_core.models import Lts, Partition
from bisim_lab.modules.roberts.schemas import ClassKey, EndStructure
from bisim_lab.shared import metrics
from bisim_lab.shared.exceptions import InputError, UnsupportedInputError

logger = structlog.get_logger()

W = TypeVar("W", str, tuple, list)


class ComparisonCounter:
    """Counts symbol comparisons for the linear-time contract."""

    def __init__(self):
        self.count = 0


# End structures

def _strongly_connected(adjacency: Sequence[Sequence[int]]) -> List[int]:
    """Component id per vertex, iterative Tarjan."""
    n = len(adjacency)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    component = [-1] * n
    stack: List[int] = []
    counter = 0
    components = 0

    for root in range(n):
        if index[root] != -1:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        work = [(root, 0)]
        while work:
            v, i = work[-1]
            if i < len(adjacency[v]):
                work[-1] = (v, i + 1)
                w = adjacency[v][i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    component[w] = components
                    if w == v:
                        break
                components += 1
    return component


def end_structures(lts: Lts) -> List[EndStructure]:
    """Bottom strongly connected components, ordered by least state."""
    n = lts.state_count
    adjacency = [
        sorted({t for per_action in lts.succ for t in per_action[s]})
        for s in range(n)
    ]
    component = _strongly_connected(adjacency)

    leaves = [False] * (max(component) + 1 if n else 0)
    members: Dict[int, List[int]] = {}
    for s in range(n):
        members.setdefault(component[s], []).append(s)
    for c in members:
        leaves[c] = True
    for s in range(n):
        for t in adjacency[s]:
            if component[t] != component[s]:
                leaves[component[s]] = False

    bottoms = sorted((members[c] for c in members if leaves[c]), key=lambda states: states[0])
    functional = len(lts.actions) == 1 and lts.deterministic
    if not functional:
        return [EndStructure(states=tuple(states)) for states in bottoms]

    succ = lts.succ[0]
    pred = lts.pred[0]
    result = []
    for states in bottoms:
        cycle = [states[0]]
        while succ[cycle[-1]][0] != cycle[0]:
            cycle.append(succ[cycle[-1]][0])
        in_cycle = set(cycle)
        trees: Dict[int, Tuple[int, ...]] = {}
        for root in cycle:
            order: List[int] = []
            queue = deque(p for p in pred[root] if p not in in_cycle)
            while queue:
                s = queue.popleft()
                order.append(s)
                queue.extend(pred[s])
            trees[root] = tuple(order)
        result.append(EndStructure(states=tuple(states), cycle=tuple(cycle), trees=trees))
    return result


# Words

def _failure(word: Sequence, counter: ComparisonCounter) -> List[int]:
    """KMP failure function: fail[i] = length of the longest proper border of word[:i+1]."""
    fail = [0] * len(word)
    k = 0
    for i in range(1, len(word)):
        while k > 0:
            counter.count += 1
            if word[i] == word[k]:
                break
            k = fail[k - 1]
        counter.count += 1
        if word[i] == word[k]:
            k += 1
        fail[i] = k
    return fail


def _least_repeating_prefix(word: W, counter: ComparisonCounter) -> Tuple[W, int]:
    if len(word) == 0:
        raise InputError("repeating prefix of an empty word is undefined")
    length = len(word)
    period = length - _failure(word, counter)[-1]
    if length % period:
        return word, 1
    return word[:period], length // period


def least_repeating_prefix(word: W) -> Tuple[W, int]:
    """Shortest v with word = v^exponent, via the failure function."""
    return _least_repeating_prefix(word, ComparisonCounter())


def _least_rotation_offset(v: Sequence, counter: ComparisonCounter) -> int:
    """Booth's algorithm: start index of the lexicographically least rotation."""
    doubled = list(v) + list(v)
    fail = [-1] * len(doubled)
    k = 0
    for j in range(1, len(doubled)):
        sj = doubled[j]
        i = fail[j - k - 1]
        while i != -1:
            counter.count += 1
            if sj == doubled[k + i + 1]:
                break
            counter.count += 1
            if sj < doubled[k + i + 1]:
                k = j - i - 1
            i = fail[i]
        counter.count += 1
        if sj != doubled[k + i + 1]:
            # i == -1 here
            counter.count += 1
            if sj < doubled[k]:
                k = j
            fail[j - k] = -1
        else:
            fail[j - k] = i + 1
    return k


def rotate(word: W, offset: int) -> W:
    if not word:
        return word
    offset %= len(word)
    return word[offset:] + word[:offset]


def canonical_rotation(v: W) -> Tuple[W, int]:
    """Least rotation of v and the offset it starts at."""
    if len(v) == 0:
        return v, 0
    offset = _least_rotation_offset(v, ComparisonCounter()) % len(v)
    return rotate(v, offset), offset


# Class assignment

@dataclass
class RobertsResult:
    """Partition plus the interned class of every state."""

    lts: Lts
    partition: Partition
    class_of: List[int]
    comparisons: int
    end_structures: List[EndStructure]
    _classes: List[tuple] = field(repr=False, default_factory=list)
    _anchors: List[Tuple[int, ...]] = field(repr=False, default_factory=list)
    _keys: Optional[Dict[int, ClassKey]] = field(repr=False, default=None)

    def class_key(self, class_id: int) -> ClassKey:
        prefix: List[int] = []
        entry = self._classes[class_id]
        while entry[0] == "ext":
            prefix.append(entry[1])
            entry = self._classes[entry[2]]
        _, anchor_id, phase = entry
        anchor = self._anchors[anchor_id]
        return ClassKey(prefix=tuple(prefix), rotation=rotate(anchor, phase), anchor=anchor)

    @property
    def keys(self) -> Dict[int, ClassKey]:
        """State -> ClassKey."""
        if self._keys is None:
            by_class: Dict[int, ClassKey] = {}
            self._keys = {}
            for s, cid in enumerate(self.class_of):
                if cid not in by_class:
                    by_class[cid] = self.class_key(cid)
                self._keys[s] = by_class[cid]
        return self._keys


def roberts_partition(lts: Lts) -> RobertsResult:
    """Bisimulation classes of a deterministic one-action LTS by cycle periods and tree labeling."""
    if len(lts.actions) != 1:
        raise UnsupportedInputError("Roberts requires one action")
    if not lts.deterministic:
        raise UnsupportedInputError("Roberts requires a deterministic LTS (one successor per state)")

    symbol = [int(b) for b in lts.initial_partition.block_of]
    counter = ComparisonCounter()
    structures = end_structures(lts)

    anchors: List[Tuple[int, ...]] = []
    anchor_ids: Dict[Tuple[int, ...], int] = {}
    classes: List[tuple] = []
    class_ids: Dict[tuple, int] = {}

    def intern(entry: tuple) -> int:
        if entry not in class_ids:
            class_ids[entry] = len(classes)
            classes.append(entry)
        return class_ids[entry]

    class_of = [-1] * lts.state_count
    queue: deque = deque()
    for structure in structures:
        word = tuple(symbol[s] for s in structure.cycle)
        period, _ = _least_repeating_prefix(word, counter)
        offset = _least_rotation_offset(period, counter) % len(period)
        anchor = rotate(period, offset)
        anchor_id = anchor_ids.setdefault(anchor, len(anchors))
        if anchor_id == len(anchors):
            anchors.append(anchor)
        for position, s in enumerate(structure.cycle):
            class_of[s] = intern(("cycle", anchor_id, (position - offset) % len(period)))
            queue.append(s)

    # backward labeling from the cycles outward
    pred = lts.pred[0]
    while queue:
        parent = queue.popleft()
        parent_class = class_of[parent]
        entry = classes[parent_class]
        for s in pred[parent]:
            if class_of[s] != -1:
                continue
            x = symbol[s]
            counter.count += 1
            if entry[0] == "cycle":
                _, anchor_id, phase = entry
                anchor = anchors[anchor_id]
                last = anchor[(phase - 1) % len(anchor)]
                if x == last:
                    class_of[s] = intern(("cycle", anchor_id, (phase - 1) % len(anchor)))
                    queue.append(s)
                    continue
            class_of[s] = intern(("ext", x, parent_class))
            queue.append(s)

    partition = Partition.from_labels(class_of)
    metrics.record_comparisons(counter.count)
    logger.info(
        "Roberts partition computed",
        n=lts.state_count,
        end_structures=len(structures),
        classes=partition.block_count,
        comparisons=counter.count,
    )
    return RobertsResult(
        lts=lts,
        partition=partition,
        class_of=class_of,
        comparisons=counter.count,
        end_structures=structures,
        _classes=classes,
        _anchors=anchors,
    )
