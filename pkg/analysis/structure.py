"""
Niceness Decision Machinery

Jacobian criterion, annihilating-polynomial search by linear algebra, the
niceness verdict over all distinguished variables and the structural
classifier for ternary quadratics (odd q).

A polynomial P of degree d is nice when, for some distinguished variable x_i,
the parts P_1..P_d of P = a*x_i^d + sum_k P_k*x_i^(d-k) are algebraically
independent.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from algebra.gf import FieldCtx, FieldElement
from algebra.linalg import MatrixGF
from algebra.mvpoly import Decomposition, MvPoly, variable_names
from analysis.workers import map_ordered
from config import ANNIHILATOR_COLUMN_CAP
from errors import AnnihilatorSearchTooLarge, DimensionError, FFExpandError, StructureError


PERRON_SEARCH_LIMIT = 10_000


def relation_names(m: int) -> list[str]:
    """Names for the unknowns of a relation Q(u_1, ..., u_m)."""
    if m <= 3:
        return ["u", "v", "w"][:m]
    return [f"u{i + 1}" for i in range(m)]


def _shared(polys: Sequence[MvPoly]) -> tuple[FieldCtx, int]:
    if not polys:
        raise StructureError("Empty polynomial list")
    ctx, nvars = polys[0].ctx, polys[0].nvars
    for poly in polys[1:]:
        ctx.check_same(poly.ctx)
        if poly.nvars != nvars:
            raise DimensionError("All polynomials must live in the same variables")
    return ctx, nvars


# ============================================================================
# Jacobian criterion
# ============================================================================


def _determinant(matrix: list[list[MvPoly]]) -> MvPoly:
    """Cofactor expansion along the first row."""
    size = len(matrix)
    if size == 1:
        return matrix[0][0]
    total = None
    for j, entry in enumerate(matrix[0]):
        if entry.is_zero:
            continue
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = entry * _determinant(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        return MvPoly.zero(matrix[0][0].ctx, matrix[0][0].nvars)
    return total


def jacobian_minor(polys: Sequence[MvPoly], columns: Sequence[int]) -> MvPoly:
    """det(dP_k/dx_j) over the chosen variable columns."""
    ctx, nvars = _shared(polys)
    if len(columns) != len(polys):
        raise DimensionError(f"{len(columns)} columns for {len(polys)} polynomials")
    matrix = [[poly.partial(j) for j in columns] for poly in polys]
    return _determinant(matrix)


def jacobian_det(polys: Sequence[MvPoly]) -> MvPoly:
    """Determinant of the square Jacobian matrix of d polynomials in d variables."""
    _, nvars = _shared(polys)
    if len(polys) != nvars:
        raise DimensionError(f"Jacobian needs as many polynomials as variables ({len(polys)} vs {nvars})")
    return jacobian_minor(polys, range(nvars))


# ============================================================================
# Annihilator search
# ============================================================================


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def monomials_up_to(m: int, bound: int) -> list[tuple[int, ...]]:
    """Exponent vectors of total degree <= bound: graded, descending lex within a degree."""
    out: list[tuple[int, ...]] = []
    for degree in range(bound + 1):
        out.extend(_compositions(degree, m))
    return out


@dataclass(frozen=True)
class AnnihilatorRelation:
    """A nonzero Q with Q(P_1, ..., P_m) identically zero."""

    polys: tuple[MvPoly, ...]
    relation: MvPoly

    @property
    def degree(self) -> int:
        return int(self.relation.degree)

    def verify(self) -> bool:
        return not self.relation.is_zero and self.relation.substitute(list(self.polys)).is_zero

    def to_json(self, names: Optional[Sequence[str]] = None) -> dict:
        return {
            "polys": [p.to_text(names) for p in self.polys],
            "relation": self.relation.to_text(relation_names(self.relation.nvars)),
            "relation_terms": self.relation.to_json(),
            "degree": self.degree,
        }


def find_annihilator(
    polys: Sequence[MvPoly],
    bound: int,
    column_cap: int = ANNIHILATOR_COLUMN_CAP,
) -> Optional[AnnihilatorRelation]:
    """
    Search for Q of total degree <= bound with Q(P_1, ..., P_m) = 0.

    Unknowns are the coefficients of Q, one column per monomial; rows are the
    monomials of the expanded compositions. The first kernel vector (free
    column set to 1) becomes the relation, which is then checked by symbolic
    substitution.
    """
    if bound < 1:
        raise StructureError(f"Annihilator degree bound must be >= 1, got {bound}")
    ctx, nvars = _shared(polys)
    m = len(polys)
    columns = math.comb(bound + m, m)
    if columns > column_cap:
        raise AnnihilatorSearchTooLarge(columns, column_cap)

    monomials = monomials_up_to(m, bound)
    images: dict[tuple[int, ...], MvPoly] = {}
    for mono in monomials:
        if not any(mono):
            images[mono] = MvPoly.constant(ctx, nvars, 1)
            continue
        j = next(i for i, e in enumerate(mono) if e)
        previous = mono[:j] + (mono[j] - 1,) + mono[j + 1:]
        images[mono] = images[previous] * polys[j]

    row_keys = sorted({e for image in images.values() for e, _ in image.term_codes()})
    row_index = {e: i for i, e in enumerate(row_keys)}
    system = np.zeros((len(row_keys), len(monomials)), dtype=np.int64)
    for col, mono in enumerate(monomials):
        for e, code in images[mono].term_codes():
            system[row_index[e], col] = code

    basis = MatrixGF(ctx, system).kernel()
    if not basis:
        return None
    vector = basis[0]
    relation = MvPoly.from_codes(ctx, m, {mono: int(vector[i]) for i, mono in enumerate(monomials)})
    found = AnnihilatorRelation(tuple(polys), relation)
    if not found.verify():
        raise FFExpandError("Kernel vector failed symbolic verification")
    return found


def perron_bound(m: int, n: int, degree: int, limit: int = PERRON_SEARCH_LIMIT) -> Optional[int]:
    """
    Smallest M with C(M+m, m) > C(degree*M + n, n).

    Then the monomials of degree <= M in m unknowns outnumber the monomials of
    degree <= degree*M in n variables, so m polynomials of degree <= `degree`
    in n variables carry a relation of degree <= M. Never holds for m <= n.
    """
    if m < 1 or n < 0 or degree < 1:
        raise StructureError(f"perron_bound needs m >= 1, n >= 0, degree >= 1 (got {m}, {n}, {degree})")
    if m <= n:
        return None
    for M in range(1, limit + 1):
        if math.comb(M + m, m) > math.comb(degree * M + n, n):
            return M
    return None


def default_bound(polys: Sequence[MvPoly], column_cap: int = ANNIHILATOR_COLUMN_CAP) -> int:
    """Product of the input degrees, lowered until the system fits the column cap."""
    m = len(polys)
    bound = 1
    for poly in polys:
        bound *= max(int(poly.degree) if not poly.is_zero else 1, 1)
    while bound > 1 and math.comb(bound + m, m) > column_cap:
        bound -= 1
    return bound


# ============================================================================
# Independence and niceness verdicts
# ============================================================================


class IndependenceStatus(Enum):
    INDEPENDENT = "independent"
    DEPENDENT = "dependent"
    UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class IndependenceVerdict:
    status: IndependenceStatus
    jacobian: Optional[MvPoly] = None
    jacobian_columns: tuple[int, ...] = ()
    relation: Optional[AnnihilatorRelation] = None
    bound_used: Optional[int] = None

    def to_json(self, names: Optional[Sequence[str]] = None) -> dict:
        names = list(names) if names is not None else None
        out: dict = {"status": self.status.value, "bound_used": self.bound_used}
        if self.jacobian is not None:
            out["jacobian"] = self.jacobian.to_text(names)
            out["jacobian_terms"] = self.jacobian.to_json()
            out["jacobian_columns"] = [names[j] if names else j for j in self.jacobian_columns]
        if self.relation is not None:
            out["relation"] = self.relation.to_json(names)
        return out


def independence_check(
    polys: Sequence[MvPoly],
    bound: Optional[int] = None,
    column_cap: int = ANNIHILATOR_COLUMN_CAP,
) -> IndependenceVerdict:
    """
    Certify independence (nonzero Jacobian minor) or dependence (verified
    annihilator); anything else is unresolved at the bound used.
    """
    ctx, nvars = _shared(polys)
    m = len(polys)

    for k, poly in enumerate(polys):
        if poly.is_zero:
            relation = AnnihilatorRelation(tuple(polys), MvPoly.variable(ctx, m, k))
            return IndependenceVerdict(IndependenceStatus.DEPENDENT, relation=relation)

    if m <= nvars:
        for columns in itertools.combinations(range(nvars), m):
            minor = jacobian_minor(polys, columns)
            if not minor.is_zero:
                return IndependenceVerdict(
                    IndependenceStatus.INDEPENDENT, jacobian=minor, jacobian_columns=tuple(columns)
                )

    used = bound if bound is not None else default_bound(polys, column_cap)
    relation = find_annihilator(polys, used, column_cap)
    if relation is not None:
        return IndependenceVerdict(IndependenceStatus.DEPENDENT, relation=relation, bound_used=used)
    return IndependenceVerdict(IndependenceStatus.UNRESOLVED, bound_used=used)


class NicenessStatus(Enum):
    NICE = "Nice"
    NOT_NICE = "NotNice"
    INCONCLUSIVE = "Inconclusive"

    @property
    def exit_code(self) -> int:
        return {"Nice": 0, "NotNice": 1, "Inconclusive": 2}[self.value]


@dataclass(frozen=True)
class VariableCheck:
    """Outcome for one choice of distinguished variable."""

    decomposition: Decomposition
    verdict: IndependenceVerdict

    @property
    def variable(self) -> int:
        return self.decomposition.distinguished

    def to_json(self) -> dict:
        dec = self.decomposition
        names = variable_names(dec.nvars)
        rest = [names[j] for j in dec.other_variables]
        return {
            "distinguished": dec.distinguished,
            "distinguished_name": names[dec.distinguished],
            "a": dec.a.to_json(),
            "parts": [part.to_text(rest) for part in dec.parts],
            **self.verdict.to_json(rest),
        }


@dataclass(frozen=True)
class NicenessVerdict:
    status: NicenessStatus
    distinguished: Optional[int]
    checks: tuple[VariableCheck, ...]
    bound_used: Optional[int]
    nvars: int

    @property
    def witness(self) -> Optional[MvPoly]:
        """The nonzero Jacobian certificate when Nice."""
        for check in self.checks:
            if check.verdict.status is IndependenceStatus.INDEPENDENT:
                return check.verdict.jacobian
        return None

    def to_json(self) -> dict:
        names = variable_names(self.nvars)
        out = {
            "status": self.status.value,
            "distinguished": self.distinguished,
            "distinguished_name": names[self.distinguished] if self.distinguished is not None else None,
            "bound_used": self.bound_used,
            "checks": [check.to_json() for check in self.checks],
        }
        if self.status is NicenessStatus.NICE:
            chosen = next(c for c in self.checks if c.variable == self.distinguished)
            rest = [names[j] for j in chosen.decomposition.other_variables]
            out["certificate"] = {"kind": "jacobian", "determinant": chosen.verdict.jacobian.to_text(rest)}
        elif self.status is NicenessStatus.NOT_NICE:
            out["certificate"] = {
                "kind": "annihilators",
                "relations": [
                    {
                        "distinguished_name": names[c.variable],
                        **c.verdict.relation.to_json([names[j] for j in c.decomposition.other_variables]),
                    }
                    for c in self.checks
                ],
            }
        else:
            out["certificate"] = None
        return out


def is_nice(
    poly: MvPoly,
    bound: Optional[int] = None,
    column_cap: int = ANNIHILATOR_COLUMN_CAP,
    workers: Optional[int] = 1,
) -> NicenessVerdict:
    """
    Decide niceness by trying each variable as the distinguished one.

    Candidates are tried from the last variable down to the first; the first
    candidate with an independence certificate is the Nice witness and the
    reported checks stop there.
    """
    if poly.is_constant:
        raise StructureError("Niceness is defined for nonconstant polynomials")
    order = list(range(poly.nvars - 1, -1, -1))

    def check(index: int) -> VariableCheck:
        decomposition = poly.decompose(index)
        verdict = independence_check(list(decomposition.parts), bound, column_cap)
        return VariableCheck(decomposition, verdict)

    if workers is not None and workers > 1:
        checks = map_ordered(check, order, workers)
    else:
        checks = []
        for index in order:
            checks.append(check(index))
            if checks[-1].verdict.status is IndependenceStatus.INDEPENDENT:
                break

    kept: list[VariableCheck] = []
    for c in checks:
        kept.append(c)
        if c.verdict.status is IndependenceStatus.INDEPENDENT:
            break

    bounds = [c.verdict.bound_used for c in kept if c.verdict.bound_used is not None]
    bound_used = max(bounds) if bounds else None
    last = kept[-1]
    if last.verdict.status is IndependenceStatus.INDEPENDENT:
        return NicenessVerdict(NicenessStatus.NICE, last.variable, tuple(kept), bound_used, poly.nvars)
    if all(c.verdict.status is IndependenceStatus.DEPENDENT for c in kept):
        return NicenessVerdict(NicenessStatus.NOT_NICE, None, tuple(kept), bound_used, poly.nvars)
    return NicenessVerdict(NicenessStatus.INCONCLUSIVE, None, tuple(kept), bound_used, poly.nvars)


# ============================================================================
# Ternary quadratics
# ============================================================================

REASON_MISSING_VARIABLE = "missing-variable"
REASON_DIAGONAL = "diagonal"
REASON_COMPLETED_SQUARE = "completed-square"
REASON_GENERIC = "generic"


def variable_occurrence(poly: MvPoly) -> tuple[bool, ...]:
    used = poly.variables_used()
    return tuple(i in used for i in range(poly.nvars))


def genuinely_ternary(poly: MvPoly) -> bool:
    """True iff each of the three variables occurs with a nonzero coefficient."""
    if poly.nvars != 3:
        raise DimensionError(f"genuinely_ternary needs 3 variables, got {poly.nvars}")
    return all(variable_occurrence(poly))


def _check_odd(ctx: FieldCtx) -> None:
    if ctx.p == 2:
        raise StructureError("The quadratic classifier needs odd q")


def symmetric_matrix(poly: MvPoly) -> MatrixGF:
    """S with x^T S x equal to the quadratic part (needs odd q)."""
    ctx = poly.ctx
    _check_odd(ctx)
    n = poly.nvars
    half = ctx.inv_code(2)
    S = np.zeros((n, n), dtype=np.int64)
    for exp, code in poly.homogeneous_part(2).term_codes():
        idx = [i for i, e in enumerate(exp) for _ in range(e)]
        i, j = idx
        if i == j:
            S[i, i] = code
        else:
            S[i, j] = S[j, i] = ctx.mul_codes(code, half)
    return MatrixGF(ctx, S)


def has_cross_terms(poly: MvPoly) -> bool:
    return any(sum(1 for e in exp if e) > 1 for exp, _ in poly.term_codes())


@dataclass(frozen=True)
class QuadraticClassification:
    status: NicenessStatus
    reason: str
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"status": self.status.value, "reason": self.reason, **self.details}


def _square_completion(poly: MvPoly) -> Optional[dict]:
    """Return e, L, u, v with poly = e*(L+u)^2 + v, or None."""
    ctx = poly.ctx
    S = symmetric_matrix(poly)
    if S.rank() != 1:
        return None
    n = poly.nvars
    i = next(k for k in range(n) if S.entries[k, k])
    e = int(S.entries[i, i])
    e_inv = ctx.inv_code(e)
    d = [ctx.mul_codes(int(S.entries[i, j]), e_inv) for j in range(n)]
    linear = [poly.coefficient(tuple(1 if k == j else 0 for k in range(n))).value for j in range(n)]
    if any(linear[j] != ctx.mul_codes(linear[i], d[j]) for j in range(n)):
        return None
    # linear = 2*e*u * d and d[i] = 1
    u = ctx.mul_codes(linear[i], ctx.inv_code(ctx.mul_codes(2 % ctx.p, e)))
    c = poly.constant_term().value
    v = ctx.sub_codes(c, ctx.mul_codes(e, ctx.mul_codes(u, u)))
    L = MvPoly.from_codes(ctx, n, {tuple(1 if k == j else 0 for k in range(n)): d[j] for j in range(n)})
    rebuilt = ((L + FieldElement(ctx, u)) ** 2).scale(FieldElement(ctx, e)) + FieldElement(ctx, v)
    if rebuilt != poly:
        raise FFExpandError("Square completion failed to reproduce the quadratic")
    return {"e": FieldElement(ctx, e), "L": L, "u": FieldElement(ctx, u), "v": FieldElement(ctx, v)}


def classify_quadratic(poly: MvPoly) -> QuadraticClassification:
    """
    Structural niceness test for ternary quadratics over odd q.

    NotNice iff a variable is missing, there are no cross terms, or
    poly = e*(L+u)^2 + v for a linear form L; Nice otherwise.
    """
    _check_odd(poly.ctx)
    if poly.nvars != 3:
        raise StructureError(f"classify_quadratic needs 3 variables, got {poly.nvars}")
    if poly.degree != 2:
        raise StructureError(f"classify_quadratic needs degree 2, got {poly.degree}")

    occurrence = variable_occurrence(poly)
    if not all(occurrence):
        missing = [n for n, used in zip(variable_names(3), occurrence) if not used]
        return QuadraticClassification(NicenessStatus.NOT_NICE, REASON_MISSING_VARIABLE, {"missing": missing})
    if not has_cross_terms(poly):
        return QuadraticClassification(NicenessStatus.NOT_NICE, REASON_DIAGONAL)
    square = _square_completion(poly)
    if square is not None:
        return QuadraticClassification(
            NicenessStatus.NOT_NICE,
            REASON_COMPLETED_SQUARE,
            {
                "e": square["e"].to_json(),
                "L": square["L"].to_text(),
                "u": square["u"].to_json(),
                "v": square["v"].to_json(),
            },
        )
    return QuadraticClassification(NicenessStatus.NICE, REASON_GENERIC)


def homogeneous_form_checks(poly: MvPoly) -> dict:
    """
    The three conditions on a ternary quadratic form: not diagonal, genuinely
    ternary, not a square over the algebraic closure (rank of S is not 1).
    """
    if poly.nvars != 3 or poly.is_zero or poly != poly.homogeneous_part(2):
        raise StructureError("homogeneous_form_checks needs a nonzero ternary quadratic form")
    rank = symmetric_matrix(poly).rank()
    checks = {
        "non_diagonal": has_cross_terms(poly),
        "genuinely_ternary": genuinely_ternary(poly),
        "not_square": rank != 1,
        "rank": rank,
    }
    checks["all_hold"] = checks["non_diagonal"] and checks["genuinely_ternary"] and checks["not_square"]
    return checks


def square_relation(linear: MvPoly, quadratic: MvPoly) -> Optional[tuple[FieldElement, FieldElement]]:
    """(a, b) with quadratic = a*L^2 + b*L, solved as a two-unknown linear system."""
    ctx, _ = _shared([linear, quadratic])
    columns = [linear * linear, linear]
    keys = sorted({e for p in columns + [quadratic] for e, _ in p.term_codes()})
    if not keys:
        return (ctx.zero, ctx.zero)
    index = {e: i for i, e in enumerate(keys)}
    system = np.zeros((len(keys), 2), dtype=np.int64)
    for col, p in enumerate(columns):
        for e, code in p.term_codes():
            system[index[e], col] = code
    rhs = np.zeros(len(keys), dtype=np.int64)
    for e, code in quadratic.term_codes():
        rhs[index[e]] = code
    solution = MatrixGF(ctx, system).solve(rhs)
    if solution is None:
        return None
    return FieldElement(ctx, int(solution[0])), FieldElement(ctx, int(solution[1]))


def quadratic_monomials(nvars: int = 3) -> list[tuple[int, ...]]:
    """Degree-2 then degree-1 monomials (constant term excluded)."""
    return [m for m in monomials_up_to(nvars, 2) if sum(m) == 2] + [
        m for m in monomials_up_to(nvars, 2) if sum(m) == 1
    ]


def exhaustive_quadratics(ctx: FieldCtx) -> Iterator[MvPoly]:
    """Every constant-free ternary polynomial of degree exactly 2."""
    monos = quadratic_monomials(3)
    for coeffs in itertools.product(range(ctx.q), repeat=len(monos)):
        if not any(coeffs[:6]):
            continue
        yield MvPoly.from_codes(ctx, 3, dict(zip(monos, coeffs)))


def random_quadratics(ctx: FieldCtx, rng: np.random.Generator, count: int) -> Iterator[MvPoly]:
    monos = quadratic_monomials(3)
    produced = 0
    while produced < count:
        coeffs = ctx.random_codes(rng, len(monos))
        if not coeffs[:6].any():
            continue
        produced += 1
        yield MvPoly.from_codes(ctx, 3, {m: int(c) for m, c in zip(monos, coeffs)})


@dataclass
class ClassifierComparison:
    total: int = 0
    nice: int = 0
    not_nice: int = 0
    inconclusive: int = 0
    agreements: int = 0
    reasons: dict = field(default_factory=dict)
    disagreements: list = field(default_factory=list)

    @property
    def all_agree(self) -> bool:
        return self.agreements == self.total and self.inconclusive == 0

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "nice": self.nice,
            "not_nice": self.not_nice,
            "inconclusive": self.inconclusive,
            "agreements": self.agreements,
            "all_agree": self.all_agree,
            "reasons": dict(sorted(self.reasons.items())),
            "disagreements": self.disagreements,
        }


def compare_classifier(polys: Iterable[MvPoly], column_cap: int = ANNIHILATOR_COLUMN_CAP,
                       max_reported: int = 10) -> ClassifierComparison:
    """Run classify_quadratic and is_nice side by side."""
    result = ClassifierComparison()
    for poly in polys:
        classified = classify_quadratic(poly)
        verdict = is_nice(poly, column_cap=column_cap)
        result.total += 1
        result.reasons[classified.reason] = result.reasons.get(classified.reason, 0) + 1
        if classified.status is NicenessStatus.NICE:
            result.nice += 1
        else:
            result.not_nice += 1
        if verdict.status is NicenessStatus.INCONCLUSIVE:
            result.inconclusive += 1
        if verdict.status is classified.status:
            result.agreements += 1
        elif len(result.disagreements) < max_reported:
            result.disagreements.append(
                {"poly": poly.to_text(), "classifier": classified.status.value, "is_nice": verdict.status.value}
            )
    return result


# ============================================================================
# Fibre relations
# ============================================================================


@dataclass(frozen=True)
class FibreRelation:
    """Q_k(x_k, P_1, ..., P_n) = 0 for one coordinate x_k."""

    variable: int
    relation: Optional[AnnihilatorRelation]
    degree_in_variable: int
    leading_coefficient: Optional[MvPoly]

    def to_json(self, names: Sequence[str]) -> dict:
        if self.relation is None:
            return {"variable": names[self.variable], "relation": None}
        unknowns = relation_names(self.relation.relation.nvars)
        return {
            "variable": names[self.variable],
            "relation": self.relation.relation.to_text(unknowns),
            "degree": self.relation.degree,
            "degree_in_variable": self.degree_in_variable,
            "leading_coefficient": self.leading_coefficient.to_text(unknowns[1:]),
        }


@dataclass(frozen=True)
class FibreReport:
    bound: int
    capped: bool
    degree_bound: int
    relations: tuple[FibreRelation, ...]
    nvars: int

    def to_json(self) -> dict:
        names = variable_names(self.nvars)
        return {
            "bound": self.bound,
            "capped": self.capped,
            "degree_bound": self.degree_bound,
            "relations": [r.to_json(names) for r in self.relations],
        }


def fibre_relations(polys: Sequence[MvPoly], column_cap: int = ANNIHILATOR_COLUMN_CAP) -> FibreReport:
    """
    For a map (P_1, ..., P_n) in n variables, find for every coordinate x_k a
    relation Q_k(x_k, P_1, ..., P_n) = 0 of degree at most the counting bound.

    The leading coefficient of Q_k in x_k cuts out the points whose fibres
    may be large; n*M bounds the fibre sizes elsewhere.
    """
    ctx, nvars = _shared(polys)
    n = len(polys)
    if n != nvars:
        raise DimensionError(f"fibre_relations needs n polynomials in n variables ({n} vs {nvars})")
    top_degree = max(max(int(p.degree), 1) if not p.is_zero else 1 for p in polys)
    bound = perron_bound(n + 1, n, top_degree)
    capped = False
    while math.comb(bound + n + 1, n + 1) > column_cap and bound > 1:
        bound -= 1
        capped = True

    relations = []
    for k in range(n):
        coordinate = MvPoly.variable(ctx, nvars, k)
        found = find_annihilator([coordinate] + list(polys), bound, column_cap)
        if found is None:
            relations.append(FibreRelation(k, None, 0, None))
            continue
        q = found.relation
        top = max(e[0] for e, _ in q.term_codes())
        lead = MvPoly.from_codes(ctx, n, {e[1:]: c for e, c in q.term_codes() if e[0] == top})
        relations.append(FibreRelation(k, found, top, lead))
    return FibreReport(bound, capped, n * bound, tuple(relations), nvars)
