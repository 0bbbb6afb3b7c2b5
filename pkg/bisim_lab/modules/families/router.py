"""
Families Module - gen command
"""

from pathlib import Path
from typing import Optional

import typer

from bisim_lab.modules.families.service import generate
from bisim_lab.shared.handlers import exit_on_error
from bisim_lab.shared.metrics import export_metrics
from bisim_lab.storage.ltsp import serialize, write_lts


def gen(
    family: str = typer.Argument(..., help="bisplitter, layered, seqsplit, fanin or roberts-example"),
    k: Optional[int] = typer.Option(None, "--k", help="Family parameter k"),
    n: Optional[int] = typer.Option(None, "--n", help="State count for seqsplit"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output LTSP file (stdout if omitted)"),
):
    """Generate a family instance as an LTSP file."""
    with exit_on_error():
        lts = generate(family, k=k, n=n)
        if out is None:
            typer.echo(serialize(lts), nl=False)
        else:
            write_lts(lts, out)
        export_metrics()
