"""
Expansion Executor Node

Runs expand, counterexample and conc-family. Each produces one
ExperimentReport per field; --primes LO-HI sweeps every odd prime in the
range with one summary row per prime.
"""

import time

from algebra.gf import field_new
from analysis.expansion import (
    WITNESS_GRID_CAP,
    conc_family_run,
    counterexample_run,
    deficiency_stat,
    odd_primes_in_range,
    proof_witness,
)
from analysis.report import ExperimentReport
from analysis.sampling import build_sets
from analysis.structure import NicenessStatus, is_nice
from errors import ConfigError
from graph.nodes.common import collect_warnings, failed, parse_in_yz, parse_poly, require
from graph.state import ExperimentState
from observability import log_progress, log_score


def _fields(state: ExperimentState) -> list:
    config = state["config"]
    if config.primes:
        return [field_new(p) for p in odd_primes_in_range(config.primes)]
    return [state["ctx"]]


def _parse_coeffs(text: str) -> list[int]:
    try:
        coeffs = [int(v) for v in str(text).split(",")]
    except ValueError:
        raise ConfigError(f"--coeffs must be three comma-separated integers, got '{text}'")
    if len(coeffs) != 3:
        raise ConfigError(f"--coeffs must hold three integers, got {len(coeffs)}")
    return coeffs


def _apply_threshold(report: ExperimentReport, threshold) -> None:
    if threshold is not None:
        report.checks["max_deficiency"] = report.deficiency <= threshold
        report.extras["max_deficiency"] = threshold


def _expand_one(config, ctx, workers: int) -> ExperimentReport:
    poly = parse_poly(require(config.poly, "--poly"), ctx, config.nvars)
    sets = build_sets(ctx, config.sets, poly.nvars, config.seed)
    report = deficiency_stat(
        poly, sets, config.C, config.epsilon, config.delta, config.sets, config.seed, config.early_exit, workers
    )
    if config.witness:
        verdict = is_nice(poly, config.bound, config.column_cap, workers)
        distinguished = verdict.distinguished if verdict.status is NicenessStatus.NICE else None
        witness = proof_witness(poly, sets, distinguished)
        witness["niceness"] = verdict.status.value
        report.extras["witness"] = witness
        report.checks["witness_incidences_zero"] = witness["incidences_zero"]
        if witness["inequality_checked"]:
            report.checks["witness_inequality"] = witness["inequality_holds"]
    return report


def _conc_one(config, ctx, workers: int) -> ExperimentReport:
    F = parse_in_yz(config.f_poly, ctx)
    G = parse_in_yz(config.g_poly, ctx)
    sets = build_sets(ctx, config.sets, 3, config.seed)
    return conc_family_run(
        config.a,
        config.d,
        F,
        G,
        sets,
        sampling=config.sets,
        seed=config.seed,
        bound=config.bound,
        column_cap=config.column_cap,
        early_exit=config.early_exit,
        witness=config.witness or sets[1].size * sets[2].size <= WITNESS_GRID_CAP,
        workers=workers,
    )


def execute_expansion(state: ExperimentState) -> ExperimentState:
    """
    Expects:
        - config, ctx (None for sweeps and counterexample), workers

    Sets:
        - result: {"reports": [...]}
        - summary: one row per report
        - warnings: precondition warnings raised during the runs
        - exit_code (0 when every report's checks pass)
    """
    config = state["config"]
    workers = state.get("workers", 1)
    warnings_seen = list(state.get("warnings") or [])

    try:
        reports: list[ExperimentReport] = []
        with collect_warnings(warnings_seen):
            if config.command == "counterexample":
                coeffs = _parse_coeffs(config.coeffs)
                primes = odd_primes_in_range(config.primes) if config.primes else [require(config.prime, "--prime")]
                runs = [(p, lambda p=p: counterexample_run(p, coeffs, config.seed)) for p in primes]
            elif config.command == "conc-family":
                runs = [(ctx.q, lambda ctx=ctx: _conc_one(config, ctx, workers)) for ctx in _fields(state)]
            else:
                runs = [(ctx.q, lambda ctx=ctx: _expand_one(config, ctx, workers)) for ctx in _fields(state)]

            for q, run in runs:
                started = time.perf_counter()
                report = run()
                report.wall_time = time.perf_counter() - started
                if config.command != "counterexample":
                    _apply_threshold(report, config.max_deficiency)
                log_progress(
                    "Expand",
                    f"q={q}: |image|={report.image_size}, deficiency={report.deficiency}, "
                    f"checks {'passed' if report.passed else 'FAILED'}",
                )
                reports.append(report)

        log_score("max_deficiency", max(r.deficiency for r in reports))
        result = {"reports": [r.to_dict() for r in reports]}
        summary = [r.summary_row() for r in reports]
        exit_code = 0 if all(r.passed for r in reports) else 1
        return {**state, "result": result, "summary": summary, "warnings": warnings_seen, "exit_code": exit_code}
    except Exception as e:
        return failed({**state, "warnings": warnings_seen}, "Expand", e)
