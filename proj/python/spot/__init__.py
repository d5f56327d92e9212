"""SPOT proximity tracing: simulator, benchmarks and the command line tool."""

import json as _json

from ._spot import (  # noqa: F401
    Context,
    MalformedInput,
    MissingState,
    ProtocolError,
    UnsupportedSecurityLevel,
    algorithms,
    cli,
)
from . import _spot

__all__ = [
    "Context",
    "MalformedInput",
    "MissingState",
    "ProtocolError",
    "UnsupportedSecurityLevel",
    "algorithms",
    "bench",
    "cli",
    "simulate",
]


def simulate(scenario):
    """Run a scenario (dict or JSON text) and return the report as a dict."""
    text = scenario if isinstance(scenario, str) else _json.dumps(scenario)
    return _json.loads(_spot.simulate_json(text))


def bench(runs=100, algorithms=(), variants=(), level=112):
    """Time the protocol algorithms; returns the report as a dict."""
    return _json.loads(_spot.bench_json(runs, list(algorithms), list(variants), level))
