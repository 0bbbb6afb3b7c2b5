"""
Report writers.

JSON documents are rendered from pydantic models with sorted keys and a
trailing newline, so equal inputs give byte-identical files. CSV output is
integer-only.
"""

import csv
import io
import json
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Union

import structlog
from pydantic import BaseModel

from bisim_lab.config import get_settings
from bisim_lab.modules.lts_core.models import Lts, Partition, RefinementTrace
from bisim_lab.modules.refinement.schemas import SweepRow

logger = structlog.get_logger()

STEP_HEADER = ("step", "splitter", "cost")
SWEEP_HEADER = ("param", "n", "m", "steps", "total_irc", "bound")


def render_json(document: BaseModel) -> str:
    return json.dumps(document.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"


def write_json(document: BaseModel, path: Union[str, Path]) -> None:
    Path(path).write_text(render_json(document), encoding="utf-8", newline="\n")
    logger.debug("Report written", path=str(path), kind=type(document).__name__)


def render_partition(lts: Lts, pi: Partition) -> List[List[str]]:
    """Blocks as lists of state names, ordered by their smallest state."""
    return [[lts.state_name(s) for s in block] for block in sorted(pi.members, key=lambda b: b[0])]


def partition_if_small(lts: Lts, pi: Partition) -> Optional[List[List[str]]]:
    if lts.state_count > get_settings().report_partition_limit:
        return None
    return render_partition(lts, pi)


def _render_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def step_rows(trace: RefinementTrace) -> List[tuple]:
    """(step, splitter, cost) per step; full-signature steps have no single splitter."""
    rows = []
    for index, (splitter, cost) in enumerate(zip(trace.splitters, trace.step_costs), start=1):
        label = "*" if splitter is None else f"{splitter.block}:{splitter.action}"
        rows.append((index, label, cost))
    return rows


def render_step_csv(trace: RefinementTrace) -> str:
    return _render_csv(STEP_HEADER, step_rows(trace))


def render_sweep_csv(rows: Sequence[SweepRow]) -> str:
    return _render_csv(
        SWEEP_HEADER,
        ((r.param, r.n, r.m, r.steps, r.total_irc, "" if r.bound is None else r.bound) for r in rows),
    )


def write_text(text: str, path: Union[str, Path]) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="\n")
