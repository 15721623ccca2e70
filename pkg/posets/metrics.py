"""
Prometheus metrics for searches and probes.

The lab runs as short-lived commands, so metrics live in a private registry
and are written to a node-exporter textfile when METRICS_TEXTFILE is set.
"""
import logging

from django.conf import settings
from prometheus_client import CollectorRegistry, Counter, Histogram, write_to_textfile

logger = logging.getLogger(__name__)

REGISTRY = CollectorRegistry()

SEARCH_NODES = Counter(
    "latticelab_search_nodes",
    "Backtracking nodes visited",
    ["search"],
    registry=REGISTRY,
)
SEARCHES = Counter(
    "latticelab_searches",
    "Completed searches by outcome",
    ["search", "outcome"],
    registry=REGISTRY,
)
PROBE_STAGE_SECONDS = Histogram(
    "latticelab_probe_stage_seconds",
    "Wall time per probe stage",
    ["probe"],
    registry=REGISTRY,
)


def record_search(search: str, nodes: int, found: bool) -> None:
    SEARCH_NODES.labels(search=search).inc(nodes)
    SEARCHES.labels(search=search, outcome="found" if found else "absent").inc()


def dump_metrics(path: str | None = None) -> bool:
    """Write the registry to a textfile. Returns False when no path is configured."""
    path = path or getattr(settings, "METRICS_TEXTFILE", None)
    if not path:
        return False
    try:
        write_to_textfile(path, REGISTRY)
        logger.info(f"Metrics written to {path}")
        return True
    except OSError as e:
        logger.warning(f"Could not write metrics to {path}: {e}")
        return False
