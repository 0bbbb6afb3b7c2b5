"""
LTS Core Models - Lts, Partition and RefinementTrace.

States are dense integers 0..n-1. External names, when present, live in
``Lts.state_names`` and only matter for serialization and reports.
"""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Set, Tuple

import numpy as np

from bisim_lab.shared.exceptions import InputError


class Partition:
    """Block assignment over states 0..n-1 with dense block ids."""

    def __init__(self, block_of: Iterable[int]):
        arr = np.asarray(list(block_of) if not isinstance(block_of, np.ndarray) else block_of)
        if arr.ndim != 1:
            raise InputError("block assignment must be one-dimensional")
        arr = arr.astype(np.int32, copy=True)
        if arr.size:
            if arr.min() < 0:
                raise InputError("block ids must be non-negative")
            present = np.unique(arr)
            if present.size != int(arr.max()) + 1:
                raise InputError("block ids must be dense 0..b-1 with no empty block")
        arr.setflags(write=False)
        self._block_of = arr
        self._block_count = int(arr.max()) + 1 if arr.size else 0
        self._members: Optional[Tuple[Tuple[int, ...], ...]] = None
        self._canonical: Optional[Tuple[int, ...]] = None

    @classmethod
    def from_labels(cls, labels: Iterable) -> "Partition":
        """Group states by equal label; ids follow first occurrence."""
        seen: Dict[object, int] = {}
        ids = []
        for label in labels:
            if label not in seen:
                seen[label] = len(seen)
            ids.append(seen[label])
        return cls(np.asarray(ids, dtype=np.int32))

    @classmethod
    def from_array_labels(cls, labels: np.ndarray) -> "Partition":
        """Vectorized ``from_labels`` for integer label arrays."""
        labels = np.asarray(labels)
        if labels.size == 0:
            return cls(np.zeros(0, dtype=np.int32))
        _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
        rank = np.empty(first.size, dtype=np.int32)
        rank[np.argsort(first, kind="stable")] = np.arange(first.size, dtype=np.int32)
        return cls(rank[inverse.reshape(-1)])

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], state_count: int) -> "Partition":
        """Build from explicit blocks; block i of the input gets id i."""
        block_of = np.full(state_count, -1, dtype=np.int64)
        for index, block in enumerate(blocks):
            states = list(block)
            if not states:
                raise InputError(f"block {index} is empty")
            for s in states:
                if not 0 <= s < state_count:
                    raise InputError(f"state {s} out of range 0..{state_count - 1}")
                if block_of[s] != -1:
                    raise InputError(f"state {s} appears in two blocks")
                block_of[s] = index
        if (block_of == -1).any():
            missing = int(np.flatnonzero(block_of == -1)[0])
            raise InputError(f"state {missing} is in no block")
        return cls(block_of)

    @classmethod
    def unit(cls, state_count: int) -> "Partition":
        return cls(np.zeros(state_count, dtype=np.int32))

    @classmethod
    def singletons(cls, state_count: int) -> "Partition":
        return cls(np.arange(state_count, dtype=np.int32))

    @property
    def block_of(self) -> np.ndarray:
        """Read-only array state -> block id."""
        return self._block_of

    @property
    def state_count(self) -> int:
        return int(self._block_of.size)

    @property
    def block_count(self) -> int:
        return self._block_count

    @property
    def members(self) -> Tuple[Tuple[int, ...], ...]:
        """Block id -> sorted member states."""
        if self._members is None:
            order = np.argsort(self._block_of, kind="stable")
            bounds = np.cumsum(np.bincount(self._block_of, minlength=self._block_count))
            self._members = tuple(
                tuple(int(s) for s in chunk)
                for chunk in np.split(order, bounds[:-1])
            ) if self._block_count else ()
        return self._members

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self._block_of, minlength=self._block_count)

    @property
    def canonical(self) -> Tuple[int, ...]:
        """Block ids renumbered by first occurrence; equal for equal partitions."""
        if self._canonical is None:
            self._canonical = tuple(
                int(x) for x in Partition.from_array_labels(self._block_of)._block_of
            ) if self.state_count else ()
        return self._canonical

    def block(self, block_id: int) -> Tuple[int, ...]:
        return self.members[block_id]

    def same_block(self, s: int, t: int) -> bool:
        return bool(self._block_of[s] == self._block_of[t])

    def as_sets(self) -> Set[FrozenSet[int]]:
        return {frozenset(b) for b in self.members}

    def check_consistency(self) -> None:
        """Assert members and block_of describe the same partition."""
        seen = 0
        for block_id, states in enumerate(self.members):
            assert states, f"block {block_id} is empty"
            assert all(self._block_of[s] == block_id for s in states)
            assert list(states) == sorted(states)
            seen += len(states)
        assert seen == self.state_count

    def __len__(self) -> int:
        return self._block_count

    def __eq__(self, other) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return self.state_count == other.state_count and self.canonical == other.canonical

    def __hash__(self) -> int:
        return hash(self.canonical)

    def __repr__(self) -> str:
        if self.state_count > 32:
            return f"Partition(n={self.state_count}, blocks={self._block_count})"
        inner = ", ".join("{" + ",".join(map(str, b)) + "}" for b in self.members)
        return f"Partition({inner})"


Transition = Tuple[int, int, int]


class Lts:
    """Labeled transition system with an initial partition."""

    def __init__(
        self,
        state_count: int,
        actions: Sequence[str],
        transitions: Iterable[Transition],
        initial_partition: Partition,
        state_names: Optional[Sequence[str]] = None,
        block_labels: Optional[Sequence[str]] = None,
    ):
        if state_count < 0:
            raise InputError("state count must be non-negative")
        actions = tuple(actions)
        if len(set(actions)) != len(actions):
            raise InputError("action names must be unique")
        for name in actions:
            _check_token(name, "action name")

        triples = sorted(set((int(s), int(a), int(t)) for s, a, t in transitions))
        for s, a, t in triples:
            if not (0 <= s < state_count and 0 <= t < state_count):
                raise InputError(f"transition ({s}, {a}, {t}) has an endpoint outside 0..{state_count - 1}")
            if not 0 <= a < len(actions):
                raise InputError(f"transition ({s}, {a}, {t}) uses unknown action index {a}")

        if initial_partition.state_count != state_count:
            raise InputError(
                f"initial partition covers {initial_partition.state_count} states, expected {state_count}"
            )
        if state_names is not None:
            state_names = tuple(state_names)
            if len(state_names) != state_count:
                raise InputError("state name table must name every state")
            if len(set(state_names)) != state_count:
                raise InputError("state names must be unique")
            for name in state_names:
                _check_token(name, "state name")
        if block_labels is not None:
            block_labels = tuple(block_labels)
            if len(block_labels) != initial_partition.block_count:
                raise InputError("block labels must name every initial block")
            for name in block_labels:
                _check_token(name, "block label")

        self.state_count = state_count
        self.actions: Tuple[str, ...] = actions
        self.transitions: Tuple[Transition, ...] = tuple(triples)
        self.initial_partition = initial_partition
        self.state_names: Optional[Tuple[str, ...]] = state_names
        self.block_labels: Optional[Tuple[str, ...]] = block_labels

        arr = np.asarray(self.transitions, dtype=np.int64).reshape(-1, 3)
        self.src = arr[:, 0]
        self.act = arr[:, 1]
        self.dst = arr[:, 2]

        succ: List[List[List[int]]] = [[[] for _ in range(state_count)] for _ in actions]
        pred: List[List[List[int]]] = [[[] for _ in range(state_count)] for _ in actions]
        for s, a, t in self.transitions:
            succ[a][s].append(t)
            pred[a][t].append(s)
        self.succ: Tuple[Tuple[Tuple[int, ...], ...], ...] = tuple(
            tuple(tuple(x) for x in per_action) for per_action in succ
        )
        self.pred: Tuple[Tuple[Tuple[int, ...], ...], ...] = tuple(
            tuple(tuple(x) for x in per_action) for per_action in pred
        )

    @property
    def transition_count(self) -> int:
        return len(self.transitions)

    @property
    def deterministic(self) -> bool:
        """Exactly one target for every (state, action)."""
        return all(len(targets) == 1 for per_action in self.succ for targets in per_action)

    def action_index(self, name: str) -> int:
        try:
            return self.actions.index(name)
        except ValueError:
            raise InputError(f"unknown action {name!r}")

    def state_name(self, state: int) -> str:
        if self.state_names is not None:
            return self.state_names[state]
        return str(state)

    def state_by_name(self, name: str) -> int:
        if self.state_names is None:
            return int(name)
        try:
            return self.state_names.index(name)
        except ValueError:
            raise InputError(f"unknown state {name!r}")

    def same_structure(self, other: "Lts") -> bool:
        """Equality of states, actions, transitions and initial block ids, ignoring names."""
        return (
            self.state_count == other.state_count
            and self.actions == other.actions
            and self.transitions == other.transitions
            and np.array_equal(self.initial_partition.block_of, other.initial_partition.block_of)
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Lts):
            return NotImplemented
        return (
            self.same_structure(other)
            and self.state_names == other.state_names
            and self.block_labels == other.block_labels
        )


    def __repr__(self) -> str:
        return (
            f"Lts(n={self.state_count}, m={self.transition_count}, "
            f"actions={len(self.actions)}, blocks={self.initial_partition.block_count})"
        )


def _check_token(name: str, what: str) -> None:
    if not name or any(ch.isspace() for ch in name):
        raise InputError(f"{what} {name!r} must be a non-empty token without whitespace")


class Splitter(NamedTuple):
    """Splitter block id (in the partition being refined) and action name."""

    block: int
    action: str


@dataclass(frozen=True)
class RefinementTrace:
    """A refinement sequence (pi_0, ..., pi_t) with per-step IRC charges."""

    partitions: Tuple[Partition, ...]
    step_costs: Tuple[int, ...]
    splitters: Tuple[Optional[Splitter], ...] = field(default=())
    strategy: Optional[str] = None

    def __post_init__(self):
        if not self.partitions:
            raise InputError("a trace holds at least its start partition")
        if len(self.step_costs) != len(self.partitions) - 1:
            raise InputError("one cost per refinement step is required")
        if not self.splitters:
            object.__setattr__(self, "splitters", (None,) * len(self.step_costs))
        elif len(self.splitters) != len(self.step_costs):
            raise InputError("one splitter entry per refinement step is required")

    @property
    def steps(self) -> int:
        return len(self.partitions) - 1

    @property
    def total_irc(self) -> int:
        return int(sum(self.step_costs))

    @property
    def initial(self) -> Partition:
        return self.partitions[0]

    @property
    def final(self) -> Partition:
        return self.partitions[-1]
