"""
Structure Executor Node

Runs classify-quadratic (one polynomial, or the exhaustive / random scans
compared against is_nice) and annihilator (relation search for a list of
polynomials, or the fibre relations of a map).
"""

from algebra.mvpoly import variable_names
from algebra.poly_parser import infer_nvars
from analysis.sampling import make_rng
from analysis.structure import (
    ClassifierComparison,
    classify_quadratic,
    compare_classifier,
    default_bound,
    exhaustive_quadratics,
    fibre_relations,
    find_annihilator,
    homogeneous_form_checks,
    is_nice,
    jacobian_det,
    random_quadratics,
    relation_names,
)
from errors import ConfigError
from graph.nodes.common import failed, parse_poly, require
from graph.state import ExperimentState
from observability import log_progress, log_score


def _classify_single(config, ctx) -> tuple[dict, dict, int]:
    poly = parse_poly(config.poly, ctx, config.nvars or 3)
    classified = classify_quadratic(poly)
    verdict = is_nice(poly, config.bound, config.column_cap)
    agree = classified.status is verdict.status
    result = {
        "polynomial": poly.to_text(),
        "classification": classified.to_json(),
        "is_nice": verdict.to_json(),
        "agree": agree,
    }
    if poly == poly.homogeneous_part(2):
        result["form_checks"] = homogeneous_form_checks(poly)
    row = {
        "field": ctx.spec,
        "polynomial": poly.to_text(),
        "status": classified.status.value,
        "reason": classified.reason,
        "agree": agree,
    }
    return result, row, 0 if agree else 1


def _classify_scan(config, ctx) -> tuple[dict, list, int]:
    scans: dict[str, ClassifierComparison] = {}
    if config.exhaustive:
        log_progress("Classify", f"exhaustive scan over F_{ctx.q}")
        scans["exhaustive"] = compare_classifier(exhaustive_quadratics(ctx), config.column_cap)
    if config.random_count:
        log_progress("Classify", f"{config.random_count} random quadratic(s) over F_{ctx.q}")
        rng = make_rng(config.seed)
        scans["random"] = compare_classifier(random_quadratics(ctx, rng, config.random_count), config.column_cap)

    rows = []
    for name, scan in scans.items():
        rate = scan.agreements / scan.total if scan.total else 1.0
        log_score(f"classifier_agreement_{name}", rate)
        rows.append({"field": ctx.spec, "scan": name, **{k: v for k, v in scan.to_dict().items()
                                                          if k not in ("reasons", "disagreements")}})
    result = {"field": ctx.spec, **{name: scan.to_dict() for name, scan in scans.items()}}
    return result, rows, 0 if all(scan.all_agree for scan in scans.values()) else 1


def _annihilator(config, ctx) -> tuple[dict, dict, int]:
    texts = [t for t in require(config.polys or config.poly, "--polys").split(";") if t.strip()]
    if not texts:
        raise ConfigError("--polys needs at least one polynomial")
    nvars = config.nvars or max(infer_nvars(t) for t in texts)
    polys = [parse_poly(t, ctx, nvars) for t in texts]
    names = variable_names(nvars)

    if config.fibre:
        report = fibre_relations(polys, config.column_cap)
        found = all(r.relation is not None for r in report.relations)
        result = {"field": ctx.spec, "polys": [p.to_text(names) for p in polys], "fibre": report.to_json()}
        row = {"field": ctx.spec, "mode": "fibre", "bound": report.bound, "all_found": found}
        return result, row, 0 if found else 1

    bound = config.bound or default_bound(polys, config.column_cap)
    log_progress("Annihilator", f"{len(polys)} polynomial(s), degree bound {bound}")
    relation = find_annihilator(polys, bound, config.column_cap)
    result = {
        "field": ctx.spec,
        "polys": [p.to_text(names) for p in polys],
        "bound": bound,
        "unknowns": relation_names(len(polys)),
        "relation": relation.to_json(names) if relation is not None else None,
    }
    if len(polys) == nvars:
        result["jacobian"] = jacobian_det(polys).to_text(names)
    row = {
        "field": ctx.spec,
        "mode": "relation",
        "bound": bound,
        "found": relation is not None,
        "relation": result["relation"]["relation"] if relation is not None else "",
    }
    return result, row, 0


def execute_structure(state: ExperimentState) -> ExperimentState:
    """
    Expects:
        - config, ctx

    Sets:
        - result, summary
        - exit_code (0 on agreement / completed search, 1 on a disagreement
          or a missing fibre relation)
    """
    config = state["config"]
    ctx = state["ctx"]

    try:
        if config.command == "annihilator":
            result, summary, exit_code = _annihilator(config, ctx)
        elif config.poly:
            result, summary, exit_code = _classify_single(config, ctx)
        elif config.exhaustive or config.random_count:
            result, summary, exit_code = _classify_scan(config, ctx)
        else:
            raise ConfigError("classify-quadratic needs --poly, --exhaustive or --random N")
        return {**state, "result": result, "summary": summary, "exit_code": exit_code}
    except Exception as e:
        return failed(state, "Structure", e)
