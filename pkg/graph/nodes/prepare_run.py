"""
Prepare Run Node

Validates the run configuration, builds the field context and fixes the
worker count before any executor runs.
"""

import time

from algebra.gf import parse_field_spec
from config import thread_count
from graph.nodes.common import failed, require
from graph.state import ExperimentState
from observability import log_progress

# Commands that may run without --field (they build their own prime fields).
FIELDLESS_COMMANDS = ("counterexample",)
SWEEP_COMMANDS = ("expand", "conc-family")


def prepare_run(state: ExperimentState) -> ExperimentState:
    """
    Expects:
        - config

    Sets:
        - ctx (None for commands that choose their own fields)
        - workers, started_at, warnings
        - error / exit_code (if the configuration is unusable)
    """
    started = state.get("started_at") or time.perf_counter()
    base = {**state, "started_at": started, "warnings": list(state.get("warnings") or [])}

    try:
        config = require(state.get("config"), "A run configuration").validate()
        workers = thread_count()
        ctx = None
        sweeping = config.command in SWEEP_COMMANDS and config.primes
        if config.command not in FIELDLESS_COMMANDS and not sweeping:
            ctx = parse_field_spec(require(config.field_spec, "--field"))
        log_progress("Prepare", f"{config.command} over {ctx or 'per-prime fields'} with {workers} worker(s)")
        return {**base, "config": config, "ctx": ctx, "workers": workers}
    except Exception as e:
        return failed(base, "Prepare", e)
