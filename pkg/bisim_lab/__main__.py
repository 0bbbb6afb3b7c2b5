"""Entry point for ``python -m bisim_lab``."""

from bisim_lab.main import app

app(prog_name="bisimlab")
