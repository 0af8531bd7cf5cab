"""
Niceness Executor Node

Runs check-nice: parse the polynomial, try each distinguished variable and
report the verdict with its certificate.
"""

from analysis.structure import is_nice
from graph.nodes.common import failed, parse_poly, require
from graph.state import ExperimentState
from observability import log_progress


def execute_check_nice(state: ExperimentState) -> ExperimentState:
    """
    Expects:
        - config (poly, nvars, bound, column_cap), ctx, workers

    Sets:
        - result, summary, exit_code (0 Nice, 1 NotNice, 2 Inconclusive)
    """
    config = state["config"]
    ctx = state["ctx"]

    try:
        poly = parse_poly(require(config.poly, "--poly"), ctx, config.nvars)
        log_progress("Nice", f"checking {poly.to_text()} over F_{ctx.q}")
        verdict = is_nice(poly, config.bound, config.column_cap, state.get("workers", 1))
        log_progress("Nice", f"verdict {verdict.status.value}")

        result = {
            "field": ctx.spec,
            "polynomial": poly.to_text(),
            "polynomial_terms": poly.to_json(),
            "nvars": poly.nvars,
            "degree": poly.degree,
            "verdict": verdict.to_json(),
        }
        summary = {
            "field": ctx.spec,
            "polynomial": poly.to_text(),
            "status": verdict.status.value,
            "distinguished": result["verdict"]["distinguished_name"],
            "bound_used": verdict.bound_used,
        }
        return {**state, "result": result, "summary": summary, "exit_code": verdict.status.exit_code}
    except Exception as e:
        return failed(state, "Nice", e)
