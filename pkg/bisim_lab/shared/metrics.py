"""
Run counters exported in the Prometheus textfile format.
Counters are informational only; no result depends on them.
"""

from typing import Optional

import structlog
from prometheus_client import CollectorRegistry, Counter, write_to_textfile

from bisim_lab.config import get_settings

logger = structlog.get_logger()

registry = CollectorRegistry()

refinement_runs = Counter(
    "bisimlab_refinement_runs",
    "Refinement runs completed, by strategy",
    ["strategy"],
    registry=registry,
)
refinement_steps = Counter(
    "bisimlab_refinement_steps",
    "Refinement steps emitted, by strategy",
    ["strategy"],
    registry=registry,
)
states_moved = Counter(
    "bisimlab_states_moved",
    "States moved to new blocks (total IRC), by strategy",
    ["strategy"],
    registry=registry,
)
roberts_comparisons = Counter(
    "bisimlab_roberts_symbol_comparisons",
    "Symbol comparisons performed by period and rotation search",
    registry=registry,
)
parallel_rounds = Counter(
    "bisimlab_parallel_rounds",
    "Parallel refinement rounds simulated",
    registry=registry,
)


def record_run(strategy: str, steps: int, total_irc: int) -> None:
    """Count one finished refinement run."""
    if not get_settings().enable_metrics:
        return
    refinement_runs.labels(strategy=strategy).inc()
    refinement_steps.labels(strategy=strategy).inc(steps)
    states_moved.labels(strategy=strategy).inc(total_irc)


def record_comparisons(count: int) -> None:
    if get_settings().enable_metrics:
        roberts_comparisons.inc(count)


def record_rounds(count: int) -> None:
    if get_settings().enable_metrics:
        parallel_rounds.inc(count)


def export_metrics(path: Optional[str] = None) -> Optional[str]:
    """Write all counters to a textfile; returns the path written, if any."""
    settings = get_settings()
    target = path or settings.metrics_textfile
    if not target or not settings.enable_metrics:
        return None
    write_to_textfile(target, registry)
    logger.info("Metrics exported", path=target)
    return target
