"""
Roberts Module - roberts command
"""

from pathlib import Path
from typing import Optional

import typer

from bisim_lab.modules.roberts.schemas import RobertsReport, RobertsRow
from bisim_lab.modules.roberts.service import roberts_partition
from bisim_lab.shared.handlers import exit_on_error
from bisim_lab.shared.metrics import export_metrics
from bisim_lab.storage.ltsp import read_lts
from bisim_lab.storage.reports import render_json, render_partition, write_json


def roberts(
    path: Path = typer.Argument(..., help="Deterministic one-action LTSP file"),
    report: Optional[Path] = typer.Option(None, "--report", help="JSON report path (stdout if omitted)"),
):
    """Class table (state, prefix, rotation) and bisimulation partition."""
    with exit_on_error():
        lts = read_lts(path)
        result = roberts_partition(lts)
        labels = lts.block_labels
        rows = []
        for state, key in sorted(result.keys.items()):
            prefix, rotation = key.render(labels)
            rows.append(RobertsRow(
                state=lts.state_name(state),
                prefix=prefix,
                rotation=rotation,
                block=int(result.partition.block_of[state]),
            ))
        document = RobertsReport(
            n=lts.state_count,
            end_structures=len(result.end_structures),
            classes=result.partition.block_count,
            comparisons=result.comparisons,
            table=rows,
            partition=render_partition(lts, result.partition),
        )
        if report is None:
            typer.echo(render_json(document), nl=False)
        else:
            write_json(document, report)
        export_metrics()
