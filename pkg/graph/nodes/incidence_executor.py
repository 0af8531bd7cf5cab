"""
Incidence Executor Node

Runs the seeded incidence harness: random point sets and curve families
(plus the structured adversarial instances) checked against the deviation
bound in exact integer arithmetic.
"""

from analysis.incidence import incidence_trials
from graph.nodes.common import failed
from graph.state import ExperimentState
from observability import log_progress, log_score


def execute_incidence(state: ExperimentState) -> ExperimentState:
    """
    Expects:
        - config (degree, points, curves, trials, seed, adversarial), ctx, workers

    Sets:
        - result, summary, exit_code (0 when every instance satisfies the bound)
    """
    config = state["config"]
    ctx = state["ctx"]

    try:
        log_progress(
            "Incidence",
            f"{config.trials} trial(s) over F_{ctx.q}, degree {config.degree}, "
            f"|P|={config.points}, |Q|={config.curves}",
        )
        summary = incidence_trials(
            ctx,
            config.degree,
            config.points,
            config.curves,
            config.trials,
            config.seed,
            config.adversarial,
            state.get("workers", 1),
        )
        log_progress("Incidence", f"{summary.satisfied}/{summary.trials} satisfied, max ratio {summary.max_ratio:.4f}")
        log_score("incidence_max_ratio", summary.max_ratio)

        result = {"field": ctx.spec, "q": ctx.q, "degree": config.degree, **summary.to_dict()}
        row = {
            "field": ctx.spec,
            "degree": config.degree,
            "points": config.points,
            "curves": config.curves,
            "trials": summary.trials,
            "satisfied": summary.satisfied,
            "max_ratio": summary.max_ratio,
        }
        return {**state, "result": result, "summary": row, "exit_code": 0 if summary.all_satisfied else 1}
    except Exception as e:
        return failed(state, "Incidence", e)
