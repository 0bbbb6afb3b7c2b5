"""
Bisim Lab - Command-Line Application Entry Point
"""

import logging
import sys
from typing import Optional

import structlog
import typer

from bisim_lab import __version__
from bisim_lab.config import get_settings

# Import commands
from bisim_lab.modules.families.router import gen
from bisim_lab.modules.parallel.router import parallel
from bisim_lab.modules.refinement.router import brute, run, sweep
from bisim_lab.modules.roberts.router import roberts


def configure_logging(level: str, json_logs: bool) -> None:
    """Structured logging to stderr; stdout stays reserved for command output."""
    logging.basicConfig(format="%(message)s", stream=sys.stderr, level=level, force=True)
    renderer = structlog.processors.JSONRenderer() if json_logs else structlog.dev.ConsoleRenderer()
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            renderer,
        ],
        wrapper_class=structlog.stdlib.BoundLogger,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )


logger = structlog.get_logger()

app = typer.Typer(
    name="bisimlab",
    help="Instrumented partition refinement for bisimulation",
    no_args_is_help=True,
    add_completion=False,
)


def _version(value: bool) -> None:
    if value:
        typer.echo(f"bisimlab {__version__}")
        raise typer.Exit()


@app.callback()
def main(
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Override BISIMLAB_LOG_LEVEL"),
    version: bool = typer.Option(False, "--version", callback=_version, is_eager=True),
):
    """Generate lowerbound families, run refinement engines and report their costs."""
    settings = get_settings()
    configure_logging((log_level or settings.log_level).upper(), settings.log_json)
    logger.debug("Starting bisimlab", version=__version__)


# Register commands
app.command(name="gen")(gen)
app.command(name="run")(run)
app.command(name="brute")(brute)
app.command(name="sweep")(sweep)
app.command(name="roberts")(roberts)
app.command(name="parallel")(parallel)


if __name__ == "__main__":
    app()
