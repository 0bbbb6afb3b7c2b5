"""
Parallel Module - parallel command
"""

from pathlib import Path
from typing import Optional

import typer

from bisim_lab.config import get_settings
from bisim_lab.modules.families.service import recognize_family
from bisim_lab.modules.parallel.schemas import ParallelReport
from bisim_lab.modules.parallel.service import pirc_run, round_bound_checks
from bisim_lab.shared.exceptions import VerificationError
from bisim_lab.shared.handlers import exit_on_error
from bisim_lab.shared.metrics import export_metrics
from bisim_lab.storage.ltsp import read_lts
from bisim_lab.storage.reports import render_json, render_partition, write_json


def parallel(
    path: Path = typer.Argument(..., help="Input LTSP file"),
    report: Optional[Path] = typer.Option(None, "--report", help="JSON report path (stdout if omitted)"),
):
    """Simulate parallel rounds to stability and report the round count."""
    with exit_on_error():
        lts = read_lts(path)
        trace = pirc_run(lts)
        tag = recognize_family(lts)
        checks = round_bound_checks(tag, trace)
        partitions = None
        if lts.state_count <= get_settings().report_partition_limit:
            partitions = [render_partition(lts, pi) for pi in trace.partitions]
        document = ParallelReport(
            family=tag.name if tag else None,
            param=tag.param if tag else None,
            n=lts.state_count,
            m=lts.transition_count,
            rounds=trace.rounds,
            partition_count=trace.partition_count,
            block_counts=trace.block_counts,
            bound_checks=checks,
            partitions=partitions,
        )
        if report is None:
            typer.echo(render_json(document), nl=False)
        else:
            write_json(document, report)
        export_metrics()

        failed = [check.name for check in checks if not check.passed]
        if failed:
            raise VerificationError(f"bound check failed: {', '.join(failed)}")
