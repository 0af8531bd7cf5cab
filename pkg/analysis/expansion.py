"""
Expansion Measurements

Image sets |P(X_1, ..., X_k)| by exact enumeration of the Cartesian product,
the deficiency w = q - |image| and its normalised statistic, the witness
objects behind the deficiency bound, the diagonal-quadric counterexample and
the runner for the family a*x^d + F(y,z)*x + G(y,z).
"""

from __future__ import annotations

import math
import threading
import warnings
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from algebra.gf import FieldCtx, field_new, is_prime
from algebra.mvpoly import MvPoly, variable_names
from analysis.incidence import CurveFamily, PointSet, count_incidences
from analysis.report import ExperimentReport
from analysis.structure import IndependenceStatus, independence_check
from analysis.workers import map_ordered, resolve_workers
from config import ANNIHILATOR_COLUMN_CAP, DEFAULT_SEED, SCAN_CHUNK_SIZE
from errors import ConfigError, DimensionError, FieldError, PreconditionWarning, SamplingError

WITNESS_GRID_CAP = 1 << 22


# ============================================================================
# Cartesian-product scans
# ============================================================================


def _as_arrays(poly: MvPoly, sets: Sequence) -> list[np.ndarray]:
    if len(sets) != poly.nvars:
        raise DimensionError(f"{len(sets)} sets for a polynomial in {poly.nvars} variables")
    arrays = []
    for s in sets:
        arr = np.asarray(s, dtype=np.int64).ravel()
        if arr.size and (arr.min() < 0 or arr.max() >= poly.ctx.q):
            raise SamplingError("Set elements must be element codes of the field")
        arrays.append(np.unique(arr))
    return arrays


def _evaluate_block(poly: MvPoly, arrays: list[np.ndarray], start: int, stop: int) -> np.ndarray:
    # row-major over the sets in the given order
    index = np.unravel_index(np.arange(start, stop, dtype=np.int64), [a.size for a in arrays])
    return poly.evaluate_many([a[i] for a, i in zip(arrays, index)])


def image_mask(
    poly: MvPoly,
    sets: Sequence,
    early_exit: bool = True,
    workers: Optional[int] = 1,
    chunk: int = SCAN_CHUNK_SIZE,
) -> np.ndarray:
    """Boolean mask over element codes marking the values of P on X_1 x ... x X_k."""
    q = poly.ctx.q
    arrays = _as_arrays(poly, sets)
    total = math.prod(a.size for a in arrays)
    mask = np.zeros(q, dtype=bool)
    if total == 0:
        return mask
    starts = list(range(0, total, chunk))
    workers = min(resolve_workers(workers), len(starts))

    if workers <= 1:
        for start in starts:
            mask[_evaluate_block(poly, arrays, start, min(start + chunk, total))] = True
            if early_exit and mask.all():
                break
        return mask

    lock = threading.Lock()
    done = threading.Event()

    def run(own: list[int]) -> None:
        try:
            for start in own:
                if done.is_set():
                    return
                values = _evaluate_block(poly, arrays, start, min(start + chunk, total))
                with lock:
                    mask[values] = True
                    if early_exit and mask.all():
                        done.set()
        except BaseException:
            done.set()
            raise

    # a failed block re-raises here; the mask is never returned partial
    map_ordered(run, [starts[w::workers] for w in range(workers)], workers)
    return mask


def image_set(poly: MvPoly, sets: Sequence, early_exit: bool = True, workers: Optional[int] = 1) -> frozenset:
    """The image P(X_1, ..., X_k) as a set of field elements."""
    mask = image_mask(poly, sets, early_exit, workers)
    elements = poly.ctx.elements()
    return frozenset(elements[int(code)] for code in np.flatnonzero(mask))


def image_histogram(poly: MvPoly, sets: Sequence, chunk: int = SCAN_CHUNK_SIZE) -> np.ndarray:
    """Exact number of preimages of every value (no early exit)."""
    q = poly.ctx.q
    arrays = _as_arrays(poly, sets)
    total = math.prod(a.size for a in arrays)
    counts = np.zeros(q, dtype=np.int64)
    for start in range(0, total, chunk):
        counts += np.bincount(_evaluate_block(poly, arrays, start, min(start + chunk, total)), minlength=q)
    return counts


# ============================================================================
# Deficiency
# ============================================================================


def hypothesis_flags(q: int, d: int, sizes: Sequence[int], C: float, epsilon: float, delta: float) -> dict:
    """Which size hypotheses the sets meet: C q^(d/(d+1)), C q^((1+eps)d/(d+1)), delta q."""
    thresholds = {
        "main": C * q ** (d / (d + 1)),
        "almost_strong": C * q ** ((1 + epsilon) * d / (d + 1)),
        "positive_proportion": delta * q,
    }
    return {
        name: {"threshold": threshold, "holds": all(s >= threshold for s in sizes)}
        for name, threshold in thresholds.items()
    }


def deficiency_stat(
    poly: MvPoly,
    sets: Sequence,
    C: float = 1.0,
    epsilon: float = 0.1,
    delta: float = 0.25,
    sampling: str = "full",
    seed: int = DEFAULT_SEED,
    early_exit: bool = True,
    workers: Optional[int] = 1,
) -> ExperimentReport:
    """Deficiency w = q - |P(X_1..X_{d+1})| and w * prod|X_i| / q^(d+1)."""
    ctx = poly.ctx
    d = poly.degree
    if poly.is_constant or poly.nvars != d + 1:
        raise DimensionError(
            f"Deficiency statistics need degree d in d+1 variables (degree {d}, {poly.nvars} variables)"
        )
    arrays = _as_arrays(poly, sets)
    sizes = [int(a.size) for a in arrays]
    mask = image_mask(poly, arrays, early_exit, workers)
    image_size = int(mask.sum())
    deficiency = ctx.q - image_size
    return ExperimentReport(
        kind="expansion",
        field=ctx.spec,
        q=ctx.q,
        polynomial=poly.to_text(),
        polynomial_terms=poly.to_json(),
        degree=d,
        set_sizes=sizes,
        sampling=sampling,
        seed=seed,
        image_size=image_size,
        deficiency=deficiency,
        statistic=Fraction(deficiency * math.prod(sizes), ctx.q ** (d + 1)),
        hypotheses=hypothesis_flags(ctx.q, d, sizes, C, epsilon, delta),
    )


def _grid_values(polys: Sequence[MvPoly], arrays: list[np.ndarray]) -> np.ndarray:
    """Rows (P_1(v), ..., P_m(v)) for every v in the product of the arrays."""
    total = math.prod(a.size for a in arrays)
    if total > WITNESS_GRID_CAP:
        raise SamplingError(f"Witness grid of {total} points exceeds {WITNESS_GRID_CAP}")
    if total == 0:
        return np.zeros((0, len(polys)), dtype=np.int64)
    index = np.unravel_index(np.arange(total, dtype=np.int64), [a.size for a in arrays])
    columns = [a[i] for a, i in zip(arrays, index)]
    return np.stack([np.broadcast_to(p.evaluate_many(columns), (total,)) for p in polys], axis=1)


def _sheared_complement(ctx: FieldCtx, xs: np.ndarray, mask: np.ndarray, a_code: int, d: int) -> PointSet:
    """psi(X x W) with W the values missed and psi(x, w) = (x, w - a x^d)."""
    missed = np.flatnonzero(~mask).astype(np.int64)
    grid_x = np.repeat(xs, missed.size)
    grid_w = np.tile(missed, xs.size)
    shift = ctx.vmul(ctx.vpow(grid_x, d), a_code)
    return PointSet(ctx, grid_x, ctx.vsub(grid_w, shift))


def proof_witness(poly: MvPoly, sets: Sequence, distinguished: Optional[int] = None) -> dict:
    """
    Rebuild the incidence argument behind the deficiency bound.

    With P = a x^d + sum_k P_k x^(d-k) along the distinguished variable, every
    v in the other sets gives the curve y = P_1(v) x^(d-1) + ... + P_d(v).
    No point (x, w - a x^d) with w outside the image lies on any of them, so
    the incidence count is 0 and, for d >= 2, |points| * |curves| <= q^(d+1).
    """
    ctx = poly.ctx
    d = int(poly.degree)
    if poly.nvars != d + 1:
        raise DimensionError("The witness needs degree d in d+1 variables")
    distinguished = poly.nvars - 1 if distinguished is None else distinguished
    arrays = _as_arrays(poly, sets)
    dec = poly.decompose(distinguished)
    others = [arrays[j] for j in dec.other_variables]

    rows = _grid_values(dec.parts, others)
    family = CurveFamily(ctx, d - 1, rows)
    mask = image_mask(poly, arrays)
    points = _sheared_complement(ctx, arrays[distinguished], mask, dec.a.value, d)
    incidences = count_incidences(points, family)
    product = math.prod(a.size for a in others)
    out = {
        "distinguished": variable_names(poly.nvars)[distinguished],
        "curves": len(family),
        "curve_ratio": Fraction(len(family), product) if product else None,
        "missed_values": int((~mask).sum()),
        "points": len(points),
        "incidences": incidences,
        "incidences_zero": incidences == 0,
        "inequality_checked": d >= 2,
    }
    if d >= 2:
        out["inequality_holds"] = len(points) * len(family) <= ctx.q ** (d + 1)
    return out


# ============================================================================
# Diagonal quadric counterexample
# ============================================================================


def _check_counterexample_field(ctx: FieldCtx) -> None:
    if ctx.k != 1 or ctx.p == 2:
        raise FieldError("The counterexample construction needs an odd prime field")


def counterexample_sets(ctx: FieldCtx, a: int, b: int, c: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """X = {x : 1 <= r(a x^2) <= floor(p/4)}, and Y, Z likewise for b, c."""
    _check_counterexample_field(ctx)
    p = ctx.p
    xs = np.arange(p, dtype=np.int64)
    squares = xs * xs % p
    quarter = p // 4
    out = []
    for coeff in (a, b, c):
        coeff = int(coeff) % p
        if coeff == 0:
            raise FieldError("Counterexample coefficients must be nonzero mod p")
        values = coeff * squares % p
        out.append(xs[(values >= 1) & (values <= quarter)])
    return out[0], out[1], out[2]


def diagonal_quadric(ctx: FieldCtx, a: int, b: int, c: int) -> MvPoly:
    return MvPoly(ctx, 3, {(2, 0, 0): a, (0, 2, 0): b, (0, 0, 2): c})


def counterexample_run(p: int, coeffs: Sequence[int], seed: int = DEFAULT_SEED) -> ExperimentReport:
    """
    Sizes of X, Y, Z, the image of a x^2 + b y^2 + c z^2 on them and the
    ceiling floor(3p/4). Every summand has representative in [1, floor(p/4)],
    so the image is a sumset of integers in [3, 3 floor(p/4)].
    """
    if len(coeffs) != 3:
        raise ConfigError(f"Expected three coefficients, got {len(coeffs)}")
    ctx = field_new(p)
    a, b, c = (int(v) for v in coeffs)
    X, Y, Z = counterexample_sets(ctx, a, b, c)
    values = [np.unique(coeff * s * s % p) for coeff, s in zip((a, b, c), (X, Y, Z))]

    sums = np.unique(np.add.outer(values[0], values[1]).ravel())
    sums = np.unique(np.add.outer(sums, values[2]).ravel())
    image_size = int(sums.size)
    sizes = [int(X.size), int(Y.size), int(Z.size)]
    ceiling = 3 * p // 4
    radius = 3 * math.sqrt(p) * math.log(p)
    poly = diagonal_quadric(ctx, a, b, c)

    return ExperimentReport(
        kind="counterexample",
        field=ctx.spec,
        q=p,
        polynomial=poly.to_text(),
        polynomial_terms=poly.to_json(),
        degree=2,
        set_sizes=sizes,
        sampling="quarter-residues",
        seed=seed,
        image_size=image_size,
        deficiency=p - image_size,
        statistic=Fraction((p - image_size) * math.prod(sizes), p ** 3),
        checks={
            "ceiling_holds": image_size <= ceiling,
            "sizes_in_window": all(abs(s - p / 4) <= radius for s in sizes),
        },
        extras={
            "coefficients": [a, b, c],
            "ceiling": ceiling,
            "value_range": [int(sums.min()), int(sums.max())] if image_size else None,
            "size_window": {"center": p / 4, "radius": radius},
        },
    )


# ============================================================================
# a*x^d + F(y,z)*x + G(y,z)
# ============================================================================


def conc_polynomial(a, d: int, F: MvPoly, G: MvPoly) -> MvPoly:
    """Assemble a*x^d + F(y,z)*x + G(y,z) in (x, y, z)."""
    if F.nvars != 2 or G.nvars != 2:
        raise DimensionError("F and G must be polynomials in (y, z)")
    if d < 1:
        raise DimensionError(f"d must be >= 1, got {d}")
    ctx = F.ctx
    x = MvPoly.variable(ctx, 3, 0)
    return (x ** d).scale(a) + F.embed(3, [1, 2]) * x + G.embed(3, [1, 2])


def conc_family_run(
    a,
    d: int,
    F: MvPoly,
    G: MvPoly,
    sets: Sequence,
    sampling: str = "full",
    seed: int = DEFAULT_SEED,
    bound: Optional[int] = None,
    column_cap: int = ANNIHILATOR_COLUMN_CAP,
    early_exit: bool = True,
    witness: bool = True,
    workers: Optional[int] = 1,
) -> ExperimentReport:
    """
    Deficiency of a*x^d + F x + G with the normalisation q^3 / (|X||Y||Z|).

    F and G should be algebraically independent; when that cannot be
    certified a PreconditionWarning is issued and the run proceeds.
    """
    ctx = F.ctx
    poly = conc_polynomial(a, d, F, G)
    precondition = independence_check([F, G], bound, column_cap)
    if precondition.status is not IndependenceStatus.INDEPENDENT:
        warnings.warn(
            PreconditionWarning(f"F = {F.to_text(['y', 'z'])} and G = {G.to_text(['y', 'z'])} "
                                f"are not certified independent ({precondition.status.value})"),
            stacklevel=2,
        )

    arrays = _as_arrays(poly, sets)
    sizes = [int(s.size) for s in arrays]
    mask = image_mask(poly, arrays, early_exit, workers)
    image_size = int(mask.sum())
    deficiency = ctx.q - image_size
    product = math.prod(sizes)

    checks = {"independence_certified": precondition.status is IndependenceStatus.INDEPENDENT}
    extras = {
        "a": ctx.element(a).to_json(),
        "d": d,
        "F": F.to_text(["y", "z"]),
        "G": G.to_text(["y", "z"]),
        "precondition": precondition.to_json(["y", "z"]),
        "bound_shape": Fraction(ctx.q ** 3, product) if product else None,
    }

    if witness:
        rows = _grid_values([F, G], arrays[1:])
        lines = CurveFamily(ctx, 1, rows)
        points = _sheared_complement(ctx, arrays[0], mask, ctx.element(a).value, d)
        incidences = count_incidences(points, lines)
        extras["witness"] = {
            "lines": len(lines),
            "points": len(points),
            "incidences": incidences,
        }
        checks["witness_incidences_zero"] = incidences == 0
        checks["witness_inequality"] = len(points) * len(lines) <= ctx.q ** 3

    return ExperimentReport(
        kind="conc-family",
        field=ctx.spec,
        q=ctx.q,
        polynomial=poly.to_text(),
        polynomial_terms=poly.to_json(),
        degree=int(poly.degree),
        set_sizes=sizes,
        sampling=sampling,
        seed=seed,
        image_size=image_size,
        deficiency=deficiency,
        statistic=Fraction(deficiency * product, ctx.q ** 3),
        checks=checks,
        extras=extras,
    )


# ============================================================================
# Prime sweeps
# ============================================================================


def odd_primes_in_range(spec: str) -> list[int]:
    """Odd primes in an inclusive range "LO-HI"."""
    try:
        lo, hi = (int(v) for v in str(spec).split("-"))
    except ValueError:
        raise ConfigError(f"Prime range must look like LO-HI, got '{spec}'")
    if lo > hi:
        raise ConfigError(f"Empty prime range {spec}")
    primes = [p for p in range(max(lo, 3), hi + 1) if is_prime(p)]
    if not primes:
        raise ConfigError(f"No odd primes in {spec}")
    return primes
