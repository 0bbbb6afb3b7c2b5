"""
Families Service - deterministic generators for the adversarial LTS families.

State numbering is fixed so generated files are byte-stable:
  bisplitter   state id = integer value of the bitstring (first bit most significant)
  layered      stakes [s, l] at s * 2^k + l - 1, then each tree gadget in BFS order
  seqsplit     state named i at id i - 1
  fanin        b_0..b_{k-1} first, then a_0..a_{2^k - 1}
"""

from typing import List, Optional, Sequence, Tuple

import structlog

from bisim_lab.modules.families.models import BitString, FamilyTag, TreeAddress
from bisim_lab.modules.lts_core.models import Lts, Partition
from bisim_lab.shared.exceptions import InputError

logger = structlog.get_logger()

MAX_LAYERED_K = 12
MAX_FANIN_K = 24


# Roberts example: a 6-cycle with five trees, one action.
ROBERTS_EXAMPLE_STATES: Tuple[str, ...] = (
    "c1", "c2", "c3", "c4", "c5", "c6",
    "s11", "s12", "s13", "s14",
    "s21", "s22", "s23",
    "s31", "s32",
    "s41", "s42", "s43", "s44",
    "s51", "s52", "s53",
)
ROBERTS_EXAMPLE_EDGES: Tuple[Tuple[str, str], ...] = (
    ("c1", "c2"), ("c2", "c3"), ("c3", "c4"), ("c4", "c5"), ("c5", "c6"), ("c6", "c1"),
    ("s14", "s13"), ("s13", "s12"), ("s12", "s11"), ("s11", "c1"),
    ("s23", "s21"), ("s22", "s21"), ("s21", "c2"),
    ("s32", "c3"), ("s31", "c3"),
    ("s44", "s41"), ("s43", "s41"), ("s42", "s41"), ("s41", "c4"),
    ("s53", "s52"), ("s52", "c5"), ("s51", "c5"),
)
ROBERTS_EXAMPLE_ACCEPTING = frozenset({
    "c1", "c3", "c4", "c6", "s11", "s13", "s14", "s21", "s22", "s23",
    "s31", "s42", "s43", "s44", "s52",
})


def _bits(value: int, k: int) -> str:
    return format(value, f"0{k}b") if k else ""


# Bisplitter B_k

def bisplitter_target(sigma: int, i: int, k: int) -> int:
    """
    Target of sigma under a_i in B_k.

    Stays put when bit i+1 is 0; otherwise keeps bits 1..i-1, flips bit i
    and clears the rest.
    """
    if (sigma >> (k - i - 1)) & 1:
        return ((sigma >> (k - i)) ^ 1) << (k - i)
    return sigma


def gen_bisplitter(k: int) -> Lts:
    """Bisplitter B_k: 2^k bitstring states, actions a1..a{k-1}, first-bit partition."""
    if k < 1:
        raise InputError("k must be ≥ 1")
    n = 1 << k
    actions = [f"a{i}" for i in range(1, k)]
    transitions = [
        (s, i - 1, bisplitter_target(s, i, k))
        for s in range(n)
        for i in range(1, k)
    ]
    initial = Partition([s >> (k - 1) for s in range(n)])
    logger.debug("Generated bisplitter", k=k, n=n, m=len(transitions))
    return Lts(
        state_count=n,
        actions=actions,
        transitions=transitions,
        initial_partition=initial,
        state_names=[_bits(s, k) for s in range(n)],
    )


# Layered bisplitter C_k

def gadget_height(k: int) -> int:
    """Tree gadget height: ceil(log2((k-1)/2)) clamped at 0."""
    return max(0, (k - 2).bit_length() - 1)


def gadget_size(k: int) -> int:
    return (1 << (gadget_height(k) + 1)) - 1


def layered_state_count(k: int) -> int:
    return (1 << k) * ((1 << k) + gadget_size(k))


def lbl(word: str, k: int) -> int:
    """Action index simulated by the leaf edge spelled ``word``: min(bin(word) + 1, k - 1)."""
    if k < 2:
        raise InputError("k must be ≥ 2")
    if len(word) > gadget_height(k) + 1:
        raise InputError(f"word {word!r} is longer than a gadget path for k={k}")
    address = TreeAddress(word=word)
    return min(address.bin + 1, k - 1)


def stake_id(sigma: int, level: int, k: int) -> int:
    return sigma * (1 << k) + level - 1


def tree_id(sigma: int, address: TreeAddress, k: int) -> int:
    return (1 << (2 * k)) + sigma * gadget_size(k) + address.bfs_index


def _gadget_addresses(height: int) -> List[TreeAddress]:
    """All addresses of a complete binary tree, in BFS order."""
    level = [TreeAddress()]
    out: List[TreeAddress] = []
    for _ in range(height + 1):
        out.extend(level)
        level = [node.child(symbol) for node in level for symbol in "ab"]
    return out


def gen_layered_bisplitter(k: int) -> Lts:
    """Layered bisplitter C_k over actions a, b."""
    if k < 2:
        raise InputError("k must be ≥ 2")
    stakes = 1 << k
    height = gadget_height(k)
    addresses = _gadget_addresses(height)
    n = layered_state_count(k)

    transitions = []
    block_of = [0] * n
    names = [""] * n
    for sigma in range(1 << k):
        first_bit = sigma >> (k - 1)
        label = _bits(sigma, k)
        for level in range(1, stakes + 1):
            here = stake_id(sigma, level, k)
            names[here] = f"[{label},{level}]"
            block_of[here] = 2 * (level - 1) + first_bit
            if level < stakes:
                nxt = stake_id(sigma, level + 1, k)
            else:
                nxt = tree_id(sigma, TreeAddress(), k)
            transitions.append((here, 0, nxt))
            transitions.append((here, 1, nxt))
        for address in addresses:
            here = tree_id(sigma, address, k)
            names[here] = f"<{label},{address.word}>"
            block_of[here] = 2 * stakes
            for index, symbol in enumerate("ab"):
                if address.depth < height:
                    nxt = tree_id(sigma, address.child(symbol), k)
                else:
                    target = bisplitter_target(sigma, lbl(address.word + symbol, k), k)
                    nxt = stake_id(target, 1, k)
                transitions.append((here, index, nxt))

    logger.debug("Generated layered bisplitter", k=k, n=n, m=len(transitions), height=height)
    return Lts(
        state_count=n,
        actions=["a", "b"],
        transitions=transitions,
        initial_partition=Partition(block_of),
        state_names=names,
    )


# Sequential splitter D_n and the fan-in family

def gen_sequential_splitter(n: int) -> Lts:
    """Sequential splitter D_n: chain 1 -> 2 -> ... -> n with a self-loop on n."""
    if n <= 2:
        raise InputError("n must be > 2")
    transitions = [(i, 0, i + 1) for i in range(n - 1)] + [(n - 1, 0, n - 1)]
    return Lts(
        state_count=n,
        actions=["a"],
        transitions=transitions,
        initial_partition=Partition([0] * (n - 1) + [1]),
        state_names=[str(i + 1) for i in range(n)],
    )


def gen_fanin_splitter(k: int) -> Lts:
    """Fan-in family: a_i -> b_j iff bit j of i is set; all a's share one initial block."""
    if k < 1:
        raise InputError("k must be ≥ 1")
    count = 1 << k
    transitions = [
        (k + i, 0, j)
        for i in range(count)
        for j in range(k)
        if (i >> j) & 1
    ]
    block_of = [j + 1 for j in range(k)] + [0] * count
    return Lts(
        state_count=k + count,
        actions=["a"],
        transitions=transitions,
        initial_partition=Partition(block_of),
        state_names=[f"b{j}" for j in range(k)] + [f"a{i}" for i in range(count)],
    )


def gen_roberts_example() -> Lts:
    """The one-action example LTS with the accepting block listed first (A < N)."""
    index = {name: i for i, name in enumerate(ROBERTS_EXAMPLE_STATES)}
    transitions = [(index[src], 0, index[dst]) for src, dst in ROBERTS_EXAMPLE_EDGES]
    block_of = [0 if name in ROBERTS_EXAMPLE_ACCEPTING else 1 for name in ROBERTS_EXAMPLE_STATES]
    return Lts(
        state_count=len(ROBERTS_EXAMPLE_STATES),
        actions=["a"],
        transitions=transitions,
        initial_partition=Partition(block_of),
        state_names=ROBERTS_EXAMPLE_STATES,
        block_labels=("A", "N"),
    )


# Dispatch and recognition

def generate(family: str, k: Optional[int] = None, n: Optional[int] = None) -> Lts:
    """Generate a family instance by name; k or n as the family requires."""
    if family == "roberts-example":
        return gen_roberts_example()
    if family == "seqsplit":
        if n is None:
            raise InputError("seqsplit requires --n")
        return gen_sequential_splitter(n)
    generators = {
        "bisplitter": gen_bisplitter,
        "layered": gen_layered_bisplitter,
        "fanin": gen_fanin_splitter,
    }
    if family not in generators:
        raise InputError(
            f"unknown family {family!r}; expected bisplitter, layered, seqsplit, fanin or roberts-example"
        )
    if k is None:
        raise InputError(f"{family} requires --k")
    return generators[family](k)


def recognize_family(lts: Lts) -> Optional[FamilyTag]:
    """Identify a generated family instance by regenerating and comparing structure."""
    n = lts.state_count
    actions = len(lts.actions)
    candidates: List[Tuple[str, Optional[int]]] = []

    if n >= 2 and n & (n - 1) == 0:
        k = n.bit_length() - 1
        if actions == k - 1:
            candidates.append(("bisplitter", k))
    if actions == 2:
        for k in range(2, MAX_LAYERED_K + 1):
            if layered_state_count(k) == n:
                candidates.append(("layered", k))
    if actions == 1:
        if n > 2 and lts.transition_count == n:
            candidates.append(("seqsplit", n))
        for k in range(1, MAX_FANIN_K + 1):
            if k + (1 << k) == n:
                candidates.append(("fanin", k))
        if n == len(ROBERTS_EXAMPLE_STATES):
            candidates.append(("roberts-example", None))

    for name, param in candidates:
        if name == "seqsplit":
            reference = gen_sequential_splitter(param)
        elif name == "roberts-example":
            reference = gen_roberts_example()
        else:
            reference = generate(name, k=param)
        if reference.same_structure(lts):
            return FamilyTag(name=name, param=param)
    return None


def prefix_of_block(states: Sequence[int], k: int) -> Optional[BitString]:
    """The prefix sigma if ``states`` is exactly the prefix block B_sigma of B^k, else None."""
    size = len(states)
    if size == 0 or size & (size - 1):
        return None
    first = min(states)
    if first % size or sorted(states) != list(range(first, first + size)):
        return None
    depth = k - (size.bit_length() - 1)
    return BitString.from_int(first >> (k - depth), depth)
