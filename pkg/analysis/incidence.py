"""
Point-Curve Incidences

Point sets in F_q^2, families of polynomial graphs y = a_n x^n + ... + a_0
stored by coefficient vector, exact incidence counts, the deviation bound
q^(n/2) * sqrt(|P| |Q|) and the shearing maps that reduce degree-n curves to
lines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from algebra.gf import FieldCtx, FieldElement
from analysis.sampling import distinct_integers, make_rng
from analysis.workers import map_ordered
from config import DEFAULT_SEED, SCAN_CHUNK_SIZE
from errors import ContextMismatchError, DimensionError, IncidenceDomainError, SamplingError

FULL_FAMILY_CAP = 1 << 21


def _code(ctx: FieldCtx, value) -> int:
    """Integers here are element codes, not n*1."""
    if isinstance(value, FieldElement):
        ctx.check_same(value.ctx)
        return value.value
    return ctx.from_code(int(value)).value


def _codes(ctx: FieldCtx, values) -> np.ndarray:
    return np.array([_code(ctx, v) for v in values], dtype=np.int64)


# ============================================================================
# Point sets
# ============================================================================


class PointSet:
    """A set of points of F_q^2, kept as sorted unique code pairs."""

    def __init__(self, ctx: FieldCtx, xs, ys):
        xs = np.asarray(xs, dtype=np.int64).ravel()
        ys = np.asarray(ys, dtype=np.int64).ravel()
        if xs.shape != ys.shape:
            raise DimensionError("Point coordinates of different lengths")
        if xs.size and (min(xs.min(), ys.min()) < 0 or max(xs.max(), ys.max()) >= ctx.q):
            raise DimensionError("Point coordinates must be element codes of the field")
        keys = np.unique(xs * ctx.q + ys)
        self.ctx = ctx
        self.xs = keys // ctx.q
        self.ys = keys % ctx.q

    @classmethod
    def from_pairs(cls, ctx: FieldCtx, pairs: Sequence[tuple]) -> PointSet:
        if not pairs:
            return cls(ctx, [], [])
        return cls(ctx, _codes(ctx, [p[0] for p in pairs]), _codes(ctx, [p[1] for p in pairs]))

    @classmethod
    def full(cls, ctx: FieldCtx) -> PointSet:
        grid = np.arange(ctx.q * ctx.q, dtype=np.int64)
        return cls(ctx, grid // ctx.q, grid % ctx.q)

    @classmethod
    def random(cls, ctx: FieldCtx, size: int, rng: np.random.Generator) -> PointSet:
        keys = distinct_integers(rng, ctx.q * ctx.q, size)
        return cls(ctx, keys // ctx.q, keys % ctx.q)

    @classmethod
    def on_curve(cls, ctx: FieldCtx, coeffs: Sequence, xs=None) -> PointSet:
        """The graph of one curve (a_n, ..., a_0), over all abscissae or the given ones."""
        family = CurveFamily(ctx, len(coeffs) - 1, [list(coeffs)])
        xs = np.arange(ctx.q, dtype=np.int64) if xs is None else _codes(ctx, xs)
        return cls(ctx, xs, family.values_at(xs)[0])

    def __len__(self) -> int:
        return int(self.xs.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.ctx == other.ctx and np.array_equal(self.xs, other.xs) and np.array_equal(self.ys, other.ys)

    def pairs(self) -> list[tuple[FieldElement, FieldElement]]:
        return [(FieldElement(self.ctx, int(x)), FieldElement(self.ctx, int(y))) for x, y in zip(self.xs, self.ys)]

    def subset(self, index) -> PointSet:
        return PointSet(self.ctx, self.xs[index], self.ys[index])

    def to_json(self) -> dict:
        return {"points": [[x.to_json(), y.to_json()] for x, y in self.pairs()]}


# ============================================================================
# Curve families
# ============================================================================


class CurveFamily:
    """
    Graphs y = a_n x^n + ... + a_0 stored as rows (a_n, ..., a_0).

    For n >= 1 the field must satisfy q > n, otherwise distinct coefficient
    vectors can share a graph. n = 0 gives horizontal lines.
    """

    def __init__(self, ctx: FieldCtx, degree: int, coeffs):
        if degree < 0:
            raise IncidenceDomainError(f"Curve degree must be >= 0, got {degree}")
        if degree >= 1 and ctx.q <= degree:
            raise IncidenceDomainError(f"q = {ctx.q} must exceed the curve degree {degree}")
        rows = np.asarray(
            [_codes(ctx, row) for row in coeffs] if not isinstance(coeffs, np.ndarray) else coeffs,
            dtype=np.int64,
        )
        if rows.size == 0:
            rows = rows.reshape(0, degree + 1)
        if rows.ndim != 2 or rows.shape[1] != degree + 1:
            raise DimensionError(f"Coefficient rows must have length {degree + 1}")
        if rows.size and (rows.min() < 0 or rows.max() >= ctx.q):
            raise DimensionError("Curve coefficients must be element codes of the field")
        self.ctx = ctx
        self.degree = degree
        self.coeffs = np.unique(rows, axis=0) if len(rows) else rows

    @classmethod
    def _from_indices(cls, ctx: FieldCtx, degree: int, indices: np.ndarray) -> CurveFamily:
        rows = np.empty((indices.size, degree + 1), dtype=np.int64)
        rest = indices.copy()
        for col in range(degree, -1, -1):
            rows[:, col] = rest % ctx.q
            rest //= ctx.q
        return cls(ctx, degree, rows)

    @classmethod
    def full(cls, ctx: FieldCtx, degree: int) -> CurveFamily:
        count = ctx.q ** (degree + 1)
        if count > FULL_FAMILY_CAP:
            raise SamplingError(f"The full family of degree {degree} over {ctx} has {count} curves")
        return cls._from_indices(ctx, degree, np.arange(count, dtype=np.int64))

    @classmethod
    def random(cls, ctx: FieldCtx, degree: int, size: int, rng: np.random.Generator) -> CurveFamily:
        if degree >= 1 and ctx.q <= degree:
            raise IncidenceDomainError(f"q = {ctx.q} must exceed the curve degree {degree}")
        return cls._from_indices(ctx, degree, distinct_integers(rng, ctx.q ** (degree + 1), size))

    @classmethod
    def through_point(cls, ctx: FieldCtx, degree: int, point: tuple, size: int,
                      rng: np.random.Generator) -> CurveFamily:
        """`size` distinct curves passing through one point."""
        x0, y0 = _code(ctx, point[0]), _code(ctx, point[1])
        if degree == 0:
            return cls(ctx, 0, np.array([[y0]], dtype=np.int64))
        heads = cls._from_indices(ctx, degree - 1, distinct_integers(rng, ctx.q ** degree, size)).coeffs
        rows = np.empty((heads.shape[0], degree + 1), dtype=np.int64)
        rows[:, :degree] = heads
        # value of a_n x^n + ... + a_1 x at x0
        acc = np.zeros(heads.shape[0], dtype=np.int64)
        for col in range(degree):
            acc = ctx.vmul(ctx.vadd(acc, heads[:, col]), x0)
        rows[:, degree] = ctx.vsub(y0, acc)
        return cls(ctx, degree, rows)

    def __len__(self) -> int:
        return int(self.coeffs.shape[0])

    def values_at(self, xs, rows: Optional[slice] = None) -> np.ndarray:
        """Horner evaluation of every curve at every abscissa: shape (curves, len(xs))."""
        ctx = self.ctx
        xs = np.asarray(xs, dtype=np.int64)
        coeffs = self.coeffs if rows is None else self.coeffs[rows]
        values = np.broadcast_to(coeffs[:, :1], (coeffs.shape[0], xs.size)).copy()
        for col in range(1, self.degree + 1):
            values = ctx.vadd(ctx.vmul(values, xs[None, :]), coeffs[:, col:col + 1])
        return values

    def to_json(self) -> dict:
        ctx = self.ctx
        return {
            "degree": self.degree,
            "curves": [[FieldElement(ctx, int(c)).to_json() for c in row] for row in self.coeffs],
        }


# ============================================================================
# Counting
# ============================================================================


def _check_pair(points: PointSet, family: CurveFamily) -> None:
    if points.ctx != family.ctx:
        raise ContextMismatchError(f"Points over {points.ctx}, curves over {family.ctx}")


def _count_naive(points: PointSet, family: CurveFamily, chunk: int) -> int:
    if not len(points) or not len(family):
        return 0
    step = max(1, chunk // len(points))
    total = 0
    for start in range(0, len(family), step):
        values = family.values_at(points.xs, slice(start, start + step))
        total += int(np.count_nonzero(values == points.ys[None, :]))
    return total


def _count_bucketed(points: PointSet, family: CurveFamily) -> int:
    q = points.ctx.q
    total = 0
    for x0 in np.unique(points.xs):
        ys_here = np.bincount(points.ys[points.xs == x0], minlength=q)
        values = family.values_at(np.array([x0]))[:, 0]
        total += int(ys_here[values].sum())
    return total


def count_incidences(
    points: PointSet,
    family: CurveFamily,
    method: str = "auto",
    workers: Optional[int] = 1,
    chunk: int = SCAN_CHUNK_SIZE,
) -> int:
    """
    Number of (point, curve) pairs with the point on the curve.

    "naive" evaluates every curve at every point; "bucket" evaluates each
    curve once per distinct abscissa and looks up the ordinates there. Both
    give the same count; "auto" buckets when the family outnumbers q.
    """
    _check_pair(points, family)
    if method == "auto":
        method = "bucket" if len(family) > points.ctx.q else "naive"
    if method not in ("naive", "bucket"):
        raise DimensionError(f"Unknown counting method '{method}'")

    if method == "bucket":
        abscissae = np.unique(points.xs)
        groups = [points.subset(points.xs == x0) for x0 in abscissae]
        counts = map_ordered(lambda part: _count_bucketed(part, family), groups, workers)
    else:
        n = len(points)
        parts = max(1, min(workers or 1, n))
        bounds = np.linspace(0, n, parts + 1).astype(int)
        slices = [points.subset(slice(bounds[i], bounds[i + 1])) for i in range(parts)]
        counts = map_ordered(lambda part: _count_naive(part, family, chunk), slices, workers)
    return int(sum(counts))


@dataclass(frozen=True)
class DeviationResult:
    incidences: int
    points: int
    curves: int
    q: int
    degree: int
    deviation: Fraction
    bound: float
    satisfied: bool

    @property
    def ratio(self) -> float:
        return float(self.deviation) / self.bound if self.bound > 0 else 0.0

    def to_dict(self) -> dict:
        return {
            "incidences": self.incidences,
            "points": self.points,
            "curves": self.curves,
            "q": self.q,
            "degree": self.degree,
            "deviation": self.deviation,
            "bound": self.bound,
            "ratio": self.ratio,
            "satisfied": self.satisfied,
        }


def bound_satisfied(q: int, degree: int, incidences: int, points: int, curves: int) -> bool:
    """(q*I - |P||Q|)^2 <= q^(n+2) |P||Q| in exact integers."""
    gap = q * incidences - points * curves
    return gap * gap <= q ** (degree + 2) * points * curves


def vinh_deviation(points: PointSet, family: CurveFamily, workers: Optional[int] = 1) -> DeviationResult:
    """|I - |P||Q|/q| against q^(n/2) sqrt(|P||Q|)."""
    if family.degree < 1:
        raise IncidenceDomainError("The deviation bound needs curve degree >= 1")
    q = points.ctx.q
    incidences = count_incidences(points, family, workers=workers)
    np_, nq = len(points), len(family)
    deviation = Fraction(abs(q * incidences - np_ * nq), q)
    bound = q ** (family.degree / 2) * math.sqrt(np_ * nq)
    return DeviationResult(
        incidences, np_, nq, q, family.degree, deviation, bound,
        bound_satisfied(q, family.degree, incidences, np_, nq),
    )


# ============================================================================
# Shearing
# ============================================================================


def shear(points: PointSet, head: Sequence) -> PointSet:
    """(x, y) -> (x, y - a_n x^n - ... - a_2 x^2) for head = (a_n, ..., a_2)."""
    ctx = points.ctx
    head = _codes(ctx, head)
    offset = np.zeros(len(points), dtype=np.int64)
    for a in head:
        offset = ctx.vmul(ctx.vadd(offset, a), points.xs)
    # Horner stops at a_2 x; one more factor of x
    if head.size:
        offset = ctx.vmul(offset, points.xs)
    return PointSet(ctx, points.xs, ctx.vsub(points.ys, offset))


def shear_family(family: CurveFamily, head: Sequence) -> CurveFamily:
    """Subtract (b_n, ..., b_2, 0, 0) from every coefficient vector."""
    ctx = family.ctx
    head = _codes(ctx, head)
    if head.size != max(family.degree - 1, 0):
        raise DimensionError(f"Shear head of length {head.size} for curves of degree {family.degree}")
    rows = family.coeffs.copy()
    if head.size:
        rows[:, :head.size] = ctx.vsub(rows[:, :head.size], head[None, :])
    return CurveFamily(ctx, family.degree, rows)


def classes(family: CurveFamily) -> dict[tuple[int, ...], CurveFamily]:
    """Group curves by their head (a_n, ..., a_2); each class is a line family (a_1, a_0)."""
    if family.degree < 1:
        raise IncidenceDomainError("Classes need curve degree >= 1")
    heads = family.coeffs[:, :family.degree - 1]
    out: dict[tuple[int, ...], CurveFamily] = {}
    keys = [tuple(int(v) for v in row) for row in heads]
    for key in sorted(set(keys)):
        mask = np.array([k == key for k in keys], dtype=bool)
        out[key] = CurveFamily(family.ctx, 1, family.coeffs[mask][:, -2:])
    return out


@dataclass(frozen=True)
class DecomposedDeviation:
    total_deviation: Fraction
    class_sum: Fraction
    class_bound: float
    bound: float
    classes: int
    classes_satisfied: bool
    incidences_preserved: bool

    @property
    def chain_holds(self) -> bool:
        return (
            self.incidences_preserved
            and self.total_deviation <= self.class_sum
            and self.classes_satisfied
            and self.class_bound <= self.bound * (1 + 1e-12)
        )

    def to_dict(self) -> dict:
        return {
            "total_deviation": self.total_deviation,
            "class_sum": self.class_sum,
            "class_bound": self.class_bound,
            "bound": self.bound,
            "classes": self.classes,
            "classes_satisfied": self.classes_satisfied,
            "incidences_preserved": self.incidences_preserved,
            "chain_holds": self.chain_holds,
        }


def decomposed_deviation(points: PointSet, family: CurveFamily) -> DecomposedDeviation:
    """
    Split the family into classes of equal head, shear each class to lines and
    compare the chain

        |I - |P||Q|/q| <= sum_a |I_a - |P||Q_a|/q|
                       <= q^(1/2) sqrt|P| sum_a sqrt|Q_a|
                       <= q^(n/2) sqrt(|P||Q|).
    """
    _check_pair(points, family)
    q, n = points.ctx.q, family.degree
    np_ = len(points)
    total = count_incidences(points, family)
    class_sum = Fraction(0)
    root_sum = 0.0
    satisfied = True
    recount = 0
    grouped = classes(family)
    for head, lines in grouped.items():
        sheared = shear(points, head)
        i_a = count_incidences(sheared, lines)
        recount += i_a
        class_sum += Fraction(abs(q * i_a - np_ * len(lines)), q)
        root_sum += math.sqrt(len(lines))
        satisfied = satisfied and bound_satisfied(q, 1, i_a, np_, len(lines))
    return DecomposedDeviation(
        total_deviation=Fraction(abs(q * total - np_ * len(family)), q),
        class_sum=class_sum,
        class_bound=math.sqrt(q) * math.sqrt(np_) * root_sum,
        bound=q ** (n / 2) * math.sqrt(np_ * len(family)),
        classes=len(grouped),
        classes_satisfied=satisfied,
        incidences_preserved=recount == total,
    )


# ============================================================================
# Trial harness
# ============================================================================


MIXED_SIZES = "mixed"


def size_ladder(q: int, population: int) -> list[int]:
    """Trial sizes 1, q, q^2 and 2q^2, each capped at the population."""
    return sorted({min(size, population) for size in (1, q, q * q, 2 * q * q)})


def parse_size(spec, population: int) -> Optional[int]:
    """None for "full", else an integer size within the population."""
    if str(spec).strip().lower() == "full":
        return None
    try:
        size = int(spec)
    except (TypeError, ValueError):
        raise SamplingError(f"Size must be an integer, 'full' or '{MIXED_SIZES}', got '{spec}'")
    if not 0 <= size <= population:
        raise SamplingError(f"Size {size} outside [0, {population}]")
    return size


@dataclass
class IncidenceSummary:
    trials: int = 0
    satisfied: int = 0
    max_ratio: float = 0.0
    failures: list = field(default_factory=list)
    instances: list = field(default_factory=list)

    @property
    def all_satisfied(self) -> bool:
        return self.satisfied == self.trials

    def record(self, label: str, result: DeviationResult, keep: bool = False) -> None:
        self.trials += 1
        self.satisfied += int(result.satisfied)
        self.max_ratio = max(self.max_ratio, result.ratio)
        if not result.satisfied and len(self.failures) < 10:
            self.failures.append({"instance": label, **result.to_dict()})
        if keep:
            self.instances.append({"instance": label, **result.to_dict()})

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "satisfied": self.satisfied,
            "all_satisfied": self.all_satisfied,
            "max_ratio": self.max_ratio,
            "failures": self.failures,
            "instances": self.instances,
        }


class _SizeSource:
    """Per-trial sizes: a fixed count, None for the full set, or a draw from the ladder."""

    def __init__(self, spec, population: int, q: int, rng: np.random.Generator):
        self.mixed = str(spec).strip().lower() == MIXED_SIZES
        self.fixed = None if self.mixed else parse_size(spec, population)
        self.ladder = size_ladder(q, population)
        self.rng = rng

    def __call__(self) -> Optional[int]:
        if not self.mixed:
            return self.fixed
        return self.ladder[int(self.rng.integers(len(self.ladder)))]


def incidence_trials(
    ctx: FieldCtx,
    degree: int,
    points_spec="10",
    curves_spec="10",
    trials: int = 100,
    seed: int = DEFAULT_SEED,
    adversarial: bool = False,
    workers: Optional[int] = 1,
) -> IncidenceSummary:
    """Seeded random instances (plus the structured ones) checked against the bound."""
    if degree < 1:
        raise IncidenceDomainError("Incidence trials need curve degree >= 1")
    if ctx.q <= degree:
        raise IncidenceDomainError(f"q = {ctx.q} must exceed the curve degree {degree}")
    rng = make_rng(seed)
    q = ctx.q
    point_sizes = _SizeSource(points_spec, q * q, q, rng)
    curve_sizes = _SizeSource(curves_spec, q ** (degree + 1), q, rng)

    def draw_points() -> PointSet:
        n = point_sizes()
        return PointSet.full(ctx) if n is None else PointSet.random(ctx, n, rng)

    def draw_curves() -> CurveFamily:
        n = curve_sizes()
        return CurveFamily.full(ctx, degree) if n is None else CurveFamily.random(ctx, degree, n, rng)

    summary = IncidenceSummary()
    for t in range(trials):
        summary.record(f"random-{t}", vinh_deviation(draw_points(), draw_curves(), workers))

    if adversarial:
        one_curve = CurveFamily.random(ctx, degree, 1, rng).coeffs[0]
        summary.record(
            "points-on-one-curve",
            vinh_deviation(PointSet.on_curve(ctx, one_curve.tolist()), draw_curves(), workers),
            keep=True,
        )
        anchor = (int(rng.integers(q)), int(rng.integers(q)))
        through = CurveFamily.through_point(ctx, degree, anchor, min(curve_sizes.fixed or q, q ** degree), rng)
        summary.record("curves-through-one-point", vinh_deviation(draw_points(), through, workers), keep=True)
        if q ** (degree + 1) <= FULL_FAMILY_CAP:
            summary.record(
                "full-sets",
                vinh_deviation(PointSet.full(ctx), CurveFamily.full(ctx, degree), workers),
                keep=True,
            )
        summary.record(
            "singletons",
            vinh_deviation(PointSet.random(ctx, 1, rng), CurveFamily.random(ctx, degree, 1, rng), workers),
            keep=True,
        )
    return summary
