"""Exception-to-exit-code mapping for CLI commands."""

from contextlib import contextmanager
from typing import Iterator

import structlog
import typer

from bisim_lab.shared.exceptions import BisimLabException

logger = structlog.get_logger()


@contextmanager
def exit_on_error() -> Iterator[None]:
    """Turn application exceptions into an error line and the matching exit code."""
    try:
        yield
    except BisimLabException as exc:
        logger.warning("Command failed", error_code=exc.error_code, exit_code=exc.exit_code)
        typer.echo(f"error: {exc.message}", err=True)
        raise typer.Exit(code=exc.exit_code)
