"""
Sparse Multivariate Polynomials

MvPoly stores a polynomial over F_q as a mapping from exponent tuples to
nonzero element codes. Values are immutable after construction; every
operation returns a new normalised polynomial. Variable indices are 0-based
(x, y, z for up to three variables, x1..xN otherwise).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from algebra.gf import FieldCtx, FieldElement
from errors import ContextMismatchError, DimensionError, StructureError


ALIASES = ("x", "y", "z")


def variable_names(nvars: int) -> list[str]:
    if nvars <= len(ALIASES):
        return list(ALIASES[:nvars])
    return [f"x{i + 1}" for i in range(nvars)]


def _sort_key(exp: tuple[int, ...]):
    # Descending total degree, then descending lex.
    return (-sum(exp), tuple(-e for e in exp))


class MvPoly:
    """A sparse polynomial in nvars variables over ctx."""

    __slots__ = ("ctx", "nvars", "_terms")

    def __init__(
        self,
        ctx: FieldCtx,
        nvars: int,
        terms: Mapping[Sequence[int], int | FieldElement] | None = None,
    ):
        if nvars < 0:
            raise DimensionError(f"nvars must be >= 0, got {nvars}")
        codes: dict[tuple[int, ...], int] = {}
        for exp, coeff in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars:
                raise DimensionError(f"Exponent vector {exp} has length {len(exp)}, expected {nvars}")
            if any(e < 0 for e in exp):
                raise DimensionError(f"Negative exponent in {exp}")
            code = ctx.element(coeff).value
            codes[exp] = ctx.add_codes(codes.get(exp, 0), code)
        self.ctx = ctx
        self.nvars = nvars
        self._terms = {e: c for e, c in sorted(codes.items()) if c}

    @classmethod
    def from_codes(cls, ctx: FieldCtx, nvars: int, codes: Mapping[tuple[int, ...], int]) -> MvPoly:
        """Build from already reduced element codes (no coercion)."""
        poly = cls.__new__(cls)
        poly.ctx = ctx
        poly.nvars = nvars
        poly._terms = {e: c for e, c in sorted(codes.items()) if c}
        return poly

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------

    @classmethod
    def zero(cls, ctx: FieldCtx, nvars: int) -> MvPoly:
        return cls.from_codes(ctx, nvars, {})

    @classmethod
    def constant(cls, ctx: FieldCtx, nvars: int, value: int | FieldElement) -> MvPoly:
        return cls(ctx, nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, ctx: FieldCtx, nvars: int, index: int) -> MvPoly:
        if not 0 <= index < nvars:
            raise DimensionError(f"Variable index {index} out of range for {nvars} variables")
        exp = [0] * nvars
        exp[index] = 1
        return cls.from_codes(ctx, nvars, {tuple(exp): 1})

    @classmethod
    def monomial(cls, ctx: FieldCtx, exp: Sequence[int], coeff: int | FieldElement = 1) -> MvPoly:
        return cls(ctx, len(exp), {tuple(exp): coeff})

    # ------------------------------------------------------------------
    # Inspection
    # ------------------------------------------------------------------

    @property
    def terms(self) -> dict[tuple[int, ...], FieldElement]:
        return {e: FieldElement(self.ctx, c) for e, c in self._terms.items()}

    def term_codes(self) -> Iterable[tuple[tuple[int, ...], int]]:
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int | float:
        """Total degree; -inf for the zero polynomial."""
        if not self._terms:
            return -math.inf
        return max(sum(e) for e in self._terms)

    @property
    def is_constant(self) -> bool:
        return self.degree <= 0

    def degree_in(self, index: int) -> int | float:
        self._check_index(index)
        if not self._terms:
            return -math.inf
        return max(e[index] for e in self._terms)

    def coefficient(self, exp: Sequence[int]) -> FieldElement:
        return FieldElement(self.ctx, self._terms.get(tuple(exp), 0))

    def constant_term(self) -> FieldElement:
        return self.coefficient((0,) * self.nvars)

    def variables_used(self) -> set[int]:
        return {i for e in self._terms for i, k in enumerate(e) if k}

    def homogeneous_part(self, degree: int) -> MvPoly:
        return MvPoly.from_codes(
            self.ctx, self.nvars, {e: c for e, c in self._terms.items() if sum(e) == degree}
        )

    def _check_index(self, index: int) -> None:
        if not 0 <= index < self.nvars:
            raise DimensionError(f"Variable index {index} out of range for {self.nvars} variables")

    # ------------------------------------------------------------------
    # Ring operations
    # ------------------------------------------------------------------

    def _lift(self, other) -> MvPoly:
        if isinstance(other, MvPoly):
            self.ctx.check_same(other.ctx)
            if other.nvars != self.nvars:
                raise DimensionError(f"Polynomials in {self.nvars} and {other.nvars} variables")
            return other
        if isinstance(other, FieldElement):
            self.ctx.check_same(other.ctx)
            return MvPoly.constant(self.ctx, self.nvars, other)
        if isinstance(other, (int, np.integer)):
            return MvPoly.constant(self.ctx, self.nvars, int(other))
        raise ContextMismatchError(f"Cannot combine MvPoly with {type(other).__name__}")

    def __add__(self, other) -> MvPoly:
        other = self._lift(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = self.ctx.add_codes(out.get(e, 0), c)
        return MvPoly.from_codes(self.ctx, self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> MvPoly:
        return MvPoly.from_codes(
            self.ctx, self.nvars, {e: self.ctx.neg_code(c) for e, c in self._terms.items()}
        )

    def __sub__(self, other) -> MvPoly:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> MvPoly:
        return self._lift(other) + (-self)

    def scale(self, factor: int | FieldElement) -> MvPoly:
        code = self.ctx.element(factor).value
        return MvPoly.from_codes(
            self.ctx, self.nvars, {e: self.ctx.mul_codes(c, code) for e, c in self._terms.items()}
        )

    def __mul__(self, other) -> MvPoly:
        if isinstance(other, (int, np.integer, FieldElement)):
            return self.scale(other)
        other = self._lift(other)
        out: dict[tuple[int, ...], int] = {}
        ctx = self.ctx
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = ctx.add_codes(out.get(e, 0), ctx.mul_codes(c1, c2))
        return MvPoly.from_codes(ctx, self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> MvPoly:
        if not isinstance(e, int) or e < 0:
            raise DimensionError(f"Exponent must be a non-negative integer, got {e!r}")
        result = MvPoly.constant(self.ctx, self.nvars, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, MvPoly):
            return self.ctx == other.ctx and self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, np.integer, FieldElement)):
            return self == self._lift(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, tuple(self._terms.items())))

    # ------------------------------------------------------------------
    # Evaluation and calculus
    # ------------------------------------------------------------------

    def evaluate(self, point: Sequence[int | FieldElement]) -> FieldElement:
        if len(point) != self.nvars:
            raise DimensionError(f"Point of length {len(point)} for {self.nvars} variables")
        ctx = self.ctx
        values = [ctx.element(v).value for v in point]
        total = 0
        for exp, code in self._terms.items():
            term = code
            for v, e in zip(values, exp):
                if e:
                    term = ctx.mul_codes(term, ctx.pow_code(v, e))
            total = ctx.add_codes(total, term)
        return FieldElement(ctx, total)

    def __call__(self, *point) -> FieldElement:
        return self.evaluate(point)

    def evaluate_many(self, columns: Sequence[np.ndarray]) -> np.ndarray:
        """
        Vectorised evaluation over numpy arrays of element codes.

        columns[i] holds values for variable i; the arrays are broadcast
        against each other, so a Cartesian grid can be passed as reshaped
        axes without materialising it.
        """
        if len(columns) != self.nvars:
            raise DimensionError(f"{len(columns)} columns for {self.nvars} variables")
        ctx = self.ctx
        cols = [np.asarray(c, dtype=np.int64) for c in columns]
        shape = np.broadcast_shapes(*(c.shape for c in cols)) if cols else ()
        result = np.zeros(shape, dtype=np.int64)
        powers: dict[tuple[int, int], np.ndarray] = {}

        for exp, code in self._terms.items():
            term = None
            for i, e in enumerate(exp):
                if not e:
                    continue
                key = (i, e)
                if key not in powers:
                    powers[key] = ctx.vpow(cols[i], e)
                term = powers[key] if term is None else ctx.vmul(term, powers[key])
            if term is None:
                term = np.full(shape, code, dtype=np.int64)
            elif code != 1:
                term = ctx.vmul(term, code)
            result = ctx.vadd(result, term)
        return result

    def partial(self, index: int) -> MvPoly:
        """Formal partial derivative; exponents act through their residue mod p."""
        self._check_index(index)
        ctx = self.ctx
        out: dict[tuple[int, ...], int] = {}
        for exp, code in self._terms.items():
            e = exp[index]
            factor = e % ctx.p
            if factor == 0:
                continue
            new_exp = exp[:index] + (e - 1,) + exp[index + 1:]
            out[new_exp] = ctx.add_codes(out.get(new_exp, 0), ctx.mul_codes(code, factor))
        return MvPoly.from_codes(ctx, self.nvars, out)

    # ------------------------------------------------------------------
    # Structure
    # ------------------------------------------------------------------

    def decompose(self, distinguished: int) -> Decomposition:
        """
        Split P = a*x^d + sum_k P_k * x^(d-k) along the distinguished variable.

        Parts live in the remaining nvars-1 variables, in their original order.
        """
        self._check_index(distinguished)
        d = self.degree
        if self.is_zero or d < 1:
            raise StructureError("Decomposition needs a nonconstant polynomial")
        buckets: list[dict[tuple[int, ...], int]] = [dict() for _ in range(d + 1)]
        for exp, code in self._terms.items():
            rest = exp[:distinguished] + exp[distinguished + 1:]
            buckets[d - exp[distinguished]][rest] = code
        a_code = buckets[0].get((0,) * (self.nvars - 1), 0)
        parts = tuple(MvPoly.from_codes(self.ctx, self.nvars - 1, buckets[k]) for k in range(1, d + 1))
        for k, part in enumerate(parts, start=1):
            if part.degree > k:
                raise StructureError(f"Part P_{k} has degree {part.degree} > {k}")
        return Decomposition(distinguished, FieldElement(self.ctx, a_code), parts, self.nvars)

    def substitute(self, polys: Sequence[MvPoly], nvars: int | None = None) -> MvPoly:
        """Composition Q(P_1, ..., P_m) with Q = self and m = self.nvars."""
        if len(polys) != self.nvars:
            raise DimensionError(f"{len(polys)} substitutes for {self.nvars} variables")
        if polys:
            target = polys[0].nvars
            for poly in polys:
                self.ctx.check_same(poly.ctx)
                if poly.nvars != target:
                    raise DimensionError("Substituted polynomials must share their variable count")
        elif nvars is None:
            raise DimensionError("Target variable count required when substituting into a constant")
        else:
            target = nvars

        powers: dict[tuple[int, int], MvPoly] = {}

        def power(j: int, e: int) -> MvPoly:
            if (j, e) not in powers:
                powers[(j, e)] = polys[j] if e == 1 else power(j, e - 1) * polys[j]
            return powers[(j, e)]

        result = MvPoly.zero(self.ctx, target)
        for exp, code in self._terms.items():
            term = MvPoly.from_codes(self.ctx, target, {(0,) * target: code})
            for j, e in enumerate(exp):
                if e:
                    term = term * power(j, e)
            result = result + term
        return result

    def drop_variable(self, index: int) -> MvPoly:
        """Remove a variable that does not occur."""
        self._check_index(index)
        if self.degree_in(index) > 0:
            raise DimensionError(f"Variable {variable_names(self.nvars)[index]} occurs in {self}")
        return MvPoly.from_codes(
            self.ctx,
            self.nvars - 1,
            {e[:index] + e[index + 1:]: c for e, c in self._terms.items()},
        )

    def embed(self, nvars: int, positions: Sequence[int]) -> MvPoly:
        """Move variable j to position positions[j] in an nvars-variable ring."""
        if len(positions) != self.nvars or len(set(positions)) != len(positions):
            raise DimensionError("Embedding needs one distinct target position per variable")
        if any(not 0 <= p < nvars for p in positions):
            raise DimensionError(f"Embedding position out of range for {nvars} variables")
        out = {}
        for exp, code in self._terms.items():
            new = [0] * nvars
            for j, e in enumerate(exp):
                new[positions[j]] = e
            out[tuple(new)] = code
        return MvPoly.from_codes(self.ctx, nvars, out)

    # ------------------------------------------------------------------
    # Text and JSON
    # ------------------------------------------------------------------

    def to_text(self, names: Sequence[str] | None = None) -> str:
        if not self._terms:
            return "0"
        names = list(names) if names is not None else variable_names(self.nvars)
        pieces = []
        for exp in sorted(self._terms, key=_sort_key):
            code = self._terms[exp]
            factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, exp) if e]
            coeff = self.ctx.format_code(code)
            if not factors:
                pieces.append(coeff)
            elif code == 1:
                pieces.append("*".join(factors))
            else:
                pieces.append("*".join([coeff] + factors))
        return " + ".join(pieces)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"MvPoly({self.to_text()!r}, nvars={self.nvars}, {self.ctx})"

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "terms": [
                {"e": list(exp), "c": FieldElement(self.ctx, self._terms[exp]).to_json()}
                for exp in sorted(self._terms, key=_sort_key)
            ],
        }

    @classmethod
    def from_json(cls, ctx: FieldCtx, data: dict) -> MvPoly:
        nvars = int(data["nvars"])
        codes: dict[tuple[int, ...], int] = {}
        for term in data.get("terms", []):
            exp = tuple(int(e) for e in term["e"])
            if len(exp) != nvars:
                raise DimensionError(f"Exponent vector {exp} has length {len(exp)}, expected {nvars}")
            codes[exp] = FieldElement.from_json(ctx, term["c"]).value
        return cls.from_codes(ctx, nvars, codes)


@dataclass(frozen=True)
class Decomposition:
    """P = a*x_i^d + sum_k P_k * x_i^(d-k) for the distinguished variable x_i."""

    distinguished: int
    a: FieldElement
    parts: tuple[MvPoly, ...]
    nvars: int

    @property
    def degree(self) -> int:
        return len(self.parts)

    @property
    def other_variables(self) -> list[int]:
        return [j for j in range(self.nvars) if j != self.distinguished]

    def lifted_parts(self) -> list[MvPoly]:
        """Parts as polynomials in the full variable set."""
        return [part.embed(self.nvars, self.other_variables) for part in self.parts]

    def reassemble(self) -> MvPoly:
        ctx = self.a.ctx
        d = self.degree
        x = MvPoly.variable(ctx, self.nvars, self.distinguished)
        total = (x ** d).scale(self.a)
        for k, part in enumerate(self.lifted_parts(), start=1):
            total = total + part * (x ** (d - k))
        return total


def compose_univariate(g: MvPoly, poly: MvPoly) -> MvPoly:
    """g(P) for a univariate g."""
    if g.nvars != 1:
        raise DimensionError(f"compose_univariate needs a univariate g, got {g.nvars} variables")
    return g.substitute([poly])
