"""
Finalize Report Node

Assembles the run document. Always runs, also after a failed node, so every
invocation produces a report.
"""

import time

from analysis.report import to_jsonable
from config import SCHEMA_VERSION
from graph.state import ExperimentState


def finalize_report(state: ExperimentState) -> ExperimentState:
    """
    Sets:
        - document: schema_version, command, config, result, summary,
          warnings, error, wall_time_seconds, exit_code
    """
    config = state.get("config")
    started = state.get("started_at")
    exit_code = state.get("exit_code")
    if exit_code is None:
        exit_code = 70 if state.get("error") else 0

    document = {
        "schema_version": SCHEMA_VERSION,
        "command": config.command if config is not None else None,
        "config": config.to_dict() if config is not None else None,
        "result": state.get("result"),
        "summary": state.get("summary"),
        "warnings": list(state.get("warnings") or []),
        "error": state.get("error"),
        "wall_time_seconds": time.perf_counter() - started if started else 0.0,
        "exit_code": exit_code,
    }
    return {**state, "document": to_jsonable(document), "exit_code": exit_code}
