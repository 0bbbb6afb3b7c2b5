"""
LTSP codec - line-oriented text format for an LTS with initial partition.

    LTSP 1
    states <n>
    actions <name> ...
    transitions <m>
    <src> <action-name> <dst>        (m lines, 0-based state ids)
    partition <b>
    <block id of state 0> ... <block id of state n-1>
    labels <label of block 0> ...    (optional)
    names <name of state 0> ...      (optional)

ASCII, LF line endings, a final newline. serialize() and parse() are exact
inverses on every LTS this package builds.
"""

from pathlib import Path
from typing import List, Optional, Union

import structlog

from bisim_lab.modules.lts_core.models import Lts, Partition
from bisim_lab.shared.exceptions import InputError

logger = structlog.get_logger()

MAGIC = "LTSP 1"


def serialize(lts: Lts) -> str:
    """Render an LTS in LTSP form."""
    lines = [
        MAGIC,
        f"states {lts.state_count}",
        " ".join(["actions", *lts.actions]),
        f"transitions {lts.transition_count}",
    ]
    lines.extend(f"{s} {lts.actions[a]} {t}" for s, a, t in lts.transitions)
    lines.append(f"partition {lts.initial_partition.block_count}")
    lines.append(" ".join(str(int(b)) for b in lts.initial_partition.block_of))
    if lts.block_labels is not None:
        lines.append(" ".join(["labels", *lts.block_labels]))
    if lts.state_names is not None:
        lines.append(" ".join(["names", *lts.state_names]))
    return "\n".join(lines) + "\n"


class _Reader:
    def __init__(self, text: str):
        if "\r" in text:
            raise InputError("LTSP files must use LF line endings")
        if not text.endswith("\n"):
            raise InputError("LTSP file must end with a newline")
        self.lines = text[:-1].split("\n")
        self.pos = 0

    def next(self, what: str) -> List[str]:
        if self.pos >= len(self.lines):
            raise InputError(f"unexpected end of file, expected {what}")
        self.pos += 1
        return self.lines[self.pos - 1].split(" ") if self.lines[self.pos - 1] else []

    def header(self, keyword: str) -> List[str]:
        fields = self.next(f"'{keyword}' line")
        if not fields or fields[0] != keyword:
            raise InputError(f"line {self.pos}: expected '{keyword}'")
        return fields[1:]

    def count(self, keyword: str) -> int:
        fields = self.header(keyword)
        if len(fields) != 1:
            raise InputError(f"line {self.pos}: '{keyword}' takes one number")
        return self.number(fields[0])

    def number(self, token: str) -> int:
        if not (token.isascii() and token.isdecimal()):
            raise InputError(f"line {self.pos}: {token!r} is not a non-negative integer")
        return int(token)

    def done(self) -> bool:
        return self.pos >= len(self.lines)


def parse(text: str) -> Lts:
    """Parse LTSP text; any deviation from the format raises InputError."""
    reader = _Reader(text)
    if reader.next("magic line") != MAGIC.split(" "):
        raise InputError(f"line 1: expected '{MAGIC}'")

    n = reader.count("states")
    actions = reader.header("actions")
    index = {name: i for i, name in enumerate(actions)}
    if len(index) != len(actions):
        raise InputError(f"line {reader.pos}: duplicate action name")
    m = reader.count("transitions")

    transitions = []
    for _ in range(m):
        fields = reader.next("transition line")
        if len(fields) != 3:
            raise InputError(f"line {reader.pos}: expected '<src> <action> <dst>'")
        src, name, dst = fields
        if name not in index:
            raise InputError(f"line {reader.pos}: unknown action {name!r}")
        transitions.append((reader.number(src), index[name], reader.number(dst)))
    if len(set(transitions)) != m:
        raise InputError("duplicate transition lines")

    b = reader.count("partition")
    ids = [reader.number(token) for token in reader.next("block id line")]
    if len(ids) != n:
        raise InputError(f"line {reader.pos}: expected {n} block ids, found {len(ids)}")
    partition = Partition(ids)
    if partition.block_count != b:
        raise InputError(f"line {reader.pos}: declared {b} blocks, found {partition.block_count}")

    labels: Optional[List[str]] = None
    names: Optional[List[str]] = None
    if not reader.done() and reader.lines[reader.pos].startswith("labels"):
        labels = reader.header("labels")
    if not reader.done() and reader.lines[reader.pos].startswith("names"):
        names = reader.header("names")
    if not reader.done():
        raise InputError(f"line {reader.pos + 1}: unexpected trailing content")

    return Lts(
        state_count=n,
        actions=actions,
        transitions=transitions,
        initial_partition=partition,
        state_names=names,
        block_labels=labels,
    )


def read_lts(path: Union[str, Path]) -> Lts:
    path = Path(path)
    try:
        text = path.read_text(encoding="ascii")
    except UnicodeDecodeError:
        raise InputError(f"{path}: LTSP files are ASCII")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}")
    lts = parse(text)
    logger.debug("LTSP read", path=str(path), n=lts.state_count, m=lts.transition_count)
    return lts


def write_lts(lts: Lts, path: Union[str, Path]) -> None:
    Path(path).write_text(serialize(lts), encoding="ascii", newline="\n")
