"""
Refinement Module - run, brute and sweep commands
"""

from pathlib import Path
from typing import Optional

import structlog
import typer

from bisim_lab.config import get_settings
from bisim_lab.modules.lts_core.service import min_irc_bruteforce, valid_sequence_endpoints
from bisim_lab.modules.oracle_es.invariants import check_family_invariants
from bisim_lab.modules.oracle_es.service import run_with_oracle
from bisim_lab.modules.refinement.schemas import OracleMode, RunReport, Strategy
from bisim_lab.modules.refinement.service import (
    cost_sweep,
    fit_cost_slope,
    run_to_stable,
    trace_costs,
    verify_trace,
)
from bisim_lab.shared.exceptions import InputError, VerificationError
from bisim_lab.shared.handlers import exit_on_error
from bisim_lab.shared.metrics import export_metrics
from bisim_lab.storage.ltsp import read_lts
from bisim_lab.storage.reports import (
    partition_if_small,
    render_json,
    render_step_csv,
    render_sweep_csv,
    write_json,
    write_text,
)

logger = structlog.get_logger()


def run(
    path: Path = typer.Argument(..., help="Input LTSP file"),
    strategy: Strategy = typer.Option(Strategy.SINGLE_SPLITTER, "--strategy", "-s"),
    oracle: OracleMode = typer.Option(OracleMode.NONE, "--oracle", help="Start from the end-structure partition with 'es'"),
    report: Optional[Path] = typer.Option(None, "--report", help="JSON report path (stdout if omitted)"),
    csv_path: Optional[Path] = typer.Option(None, "--csv", help="Per-step CSV path"),
    check_invariants: bool = typer.Option(False, "--check-invariants", help="Check family runtime invariants"),
):
    """Refine to stability, verify the trace and report its cost."""
    with exit_on_error():
        lts = read_lts(path)
        updated_blocks = oracle_classes = None
        if oracle is OracleMode.ES:
            result = run_with_oracle(lts, strategy)
            trace, start = result.trace, result.updated_partition
            updated_blocks, oracle_classes = start.block_count, result.oracle_classes
        else:
            trace, start = run_to_stable(lts, strategy), None

        verdict = verify_trace(lts, trace, expect_start=start)
        costs = trace_costs(lts, trace, oracle=oracle is OracleMode.ES)
        violations = []
        if check_invariants or get_settings().check_invariants:
            violations = check_family_invariants(lts, trace)

        document = RunReport(
            **costs.model_dump(),
            verified=verdict.ok,
            verification=verdict.describe(),
            invariant_violations=violations,
            updated_blocks=updated_blocks,
            oracle_classes=oracle_classes,
            final_partition=partition_if_small(lts, trace.final),
        )
        if report is None:
            typer.echo(render_json(document), nl=False)
        else:
            write_json(document, report)
        if csv_path is not None:
            write_text(render_step_csv(trace), csv_path)
        export_metrics()

        if not verdict:
            raise VerificationError(verdict.describe())
        failed = [check.name for check in costs.bound_checks if not check.passed]
        if failed:
            raise VerificationError(f"bound check failed: {', '.join(failed)}")
        if violations:
            raise VerificationError(f"{len(violations)} invariant violation(s); first: {violations[0]}")


def brute(path: Path = typer.Argument(..., help="Input LTSP file")):
    """Minimum IRC over all valid sequences, by exhaustive search."""
    with exit_on_error():
        lts = read_lts(path)
        best = min_irc_bruteforce(lts)
        endpoints = valid_sequence_endpoints(lts)
        engine = run_to_stable(lts)
        typer.echo(f"min_irc {best}")
        typer.echo(f"engine_irc {engine.total_irc}")
        typer.echo(f"endpoints {len(endpoints)}")
        export_metrics()


def sweep(
    family: str = typer.Option(..., "--family", "-f"),
    start: int = typer.Option(..., "--start"),
    stop: int = typer.Option(..., "--stop"),
    strategy: Strategy = typer.Option(Strategy.SINGLE_SPLITTER, "--strategy", "-s"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="CSV path (stdout if omitted)"),
):
    """Cost curve of a family over a parameter range, with the fitted log-log slope."""
    with exit_on_error():
        if start > stop:
            raise InputError("--start must not exceed --stop")
        rows = cost_sweep(family, list(range(start, stop + 1)), strategy)
        text = render_sweep_csv(rows)
        if out is None:
            typer.echo(text, nl=False)
        else:
            write_text(text, out)
        points = [(row.n, row.total_irc) for row in rows]
        if sum(1 for n, cost in points if n > 1 and cost > 0) >= 2:
            typer.echo(f"slope {fit_cost_slope(points):.4f}")
        else:
            logger.info("Too few points for a slope fit", points=len(points))
        export_metrics()
