"""
Finite Field Arithmetic

Arithmetic in F_q for q = p^k. Elements are carried as integer codes: for
k = 1 the residue in [0, p-1], for k > 1 the packed coefficient vector
sum(c_i * p^i) over the basis 1, t, ..., t^(k-1) of F_p[t]/(modulus).
A code equals the element's position in the enumeration order, so numpy
arrays of codes double as index arrays for histograms and lookup tables.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from config import FIELD_ORDER_CAP
from errors import ContextMismatchError, FieldError, FieldZeroDivisionError


# ============================================================================
# Integer and F_p[t] helpers
# ============================================================================


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality test (fine below the field cap)."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    factors = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            factors.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        factors.append(n)
    return factors


def _int_inverse(a: int, p: int) -> int:
    """Inverse of a modulo p by the extended Euclidean algorithm."""
    r0, r1 = p, a % p
    s0, s1 = 0, 1
    while r1:
        quo = r0 // r1
        r0, r1 = r1, r0 - quo * r1
        s0, s1 = s1, s0 - quo * s1
    if r0 != 1:
        raise FieldZeroDivisionError("inverse of zero")
    return s0 % p


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _poly_sub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _poly_divmod(a: Sequence[int], b: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    """Quotient and remainder in F_p[t]; coefficient lists are low-degree-first."""
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    if not b:
        raise FieldZeroDivisionError("polynomial division by zero")
    inv_lc = _int_inverse(b[-1], p)
    quo = [0] * max(len(a) - len(b) + 1, 0)
    while a and len(a) >= len(b):
        c = a[-1] * inv_lc % p
        shift = len(a) - len(b)
        quo[shift] = c
        for j, bj in enumerate(b):
            a[shift + j] = (a[shift + j] - c * bj) % p
        _trim(a)
    return _trim(quo), a


def _poly_inverse(a: Sequence[int], modulus: Sequence[int], p: int) -> list[int]:
    """Inverse of a modulo an irreducible modulus, by extended Euclid in F_p[t]."""
    r0, r1 = list(modulus), _trim(list(a))
    if not r1:
        raise FieldZeroDivisionError("inverse of zero")
    s0: list[int] = []
    s1 = [1]
    while r1:
        quo, rem = _poly_divmod(r0, r1, p)
        r0, r1 = r1, rem
        s0, s1 = s1, _poly_sub(s0, _poly_mul(quo, s1, p), p)
    scale = _int_inverse(r0[0], p)
    return _poly_divmod([x * scale for x in s0], modulus, p)[1]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    k = len(poly) - 1
    for deg in range(1, k // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            if not _poly_divmod(poly, list(low) + [1], p)[1]:
                return False
    return True


def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree k (low-degree-first tuples)."""
    for low in itertools.product(range(p), repeat=k):
        if low[0] == 0:
            continue
        candidate = list(low) + [1]
        if is_irreducible(candidate, p):
            return tuple(candidate)
    raise FieldError(f"no irreducible polynomial of degree {k} over F_{p}")


# ============================================================================
# Field context
# ============================================================================


@dataclass(frozen=True)
class FieldCtx:
    """
    The field F_q, q = p^k.

    Immutable and shareable across threads; the lazily built lookup tables are
    derived data and do not take part in equality.
    """

    p: int
    k: int = 1
    modulus: tuple[int, ...] | None = None

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise FieldError(f"Field characteristic {self.p} is not prime")
        if not isinstance(self.k, int) or self.k < 1:
            raise FieldError(f"Extension degree must be >= 1, got {self.k}")
        if self.p ** self.k > FIELD_ORDER_CAP:
            raise FieldError(f"q = {self.p}^{self.k} exceeds the cap of {FIELD_ORDER_CAP}")
        if self.k == 1:
            if self.modulus is not None:
                raise FieldError("A prime field carries no modulus")
            return
        m = self.modulus
        if m is None or len(m) != self.k + 1 or m[-1] != 1:
            raise FieldError(f"Modulus must be monic of degree {self.k}")
        if any(not 0 <= c < self.p for c in m):
            raise FieldError("Modulus coefficients must lie in [0, p-1]")
        if not is_irreducible(list(m), self.p):
            raise FieldError(f"Modulus {format_modulus(m)} is reducible over F_{self.p}")

    # ------------------------------------------------------------------
    # Basic properties
    # ------------------------------------------------------------------

    @property
    def q(self) -> int:
        return self.p ** self.k

    @property
    def is_prime_field(self) -> bool:
        return self.k == 1

    @property
    def spec(self) -> str:
        """Field spec string as accepted by parse_field_spec."""
        return str(self.p) if self.k == 1 else f"{self.p}^{self.k}"

    def __str__(self) -> str:
        return f"F_{self.q}"

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    @property
    def generator(self) -> FieldElement:
        """The class of t in F_p[t]/(modulus)."""
        if self.k == 1:
            raise FieldError("Prime fields have no extension generator")
        return FieldElement(self, self.p)

    def element(self, value: int | Sequence[int] | FieldElement) -> FieldElement:
        """Coerce an integer (n -> n*1), a coefficient vector or an element."""
        if isinstance(value, FieldElement):
            self.check_same(value.ctx)
            return value
        if isinstance(value, (int, np.integer)):
            return FieldElement(self, int(value) % self.p)
        coeffs = list(value)
        if self.k == 1 and len(coeffs) == 1:
            return FieldElement(self, int(coeffs[0]) % self.p)
        if len(coeffs) > self.k:
            raise FieldError(f"Coefficient vector of length {len(coeffs)} for k = {self.k}")
        return FieldElement(self, self.pack(int(c) % self.p for c in coeffs))

    def from_code(self, code: int) -> FieldElement:
        if not 0 <= code < self.q:
            raise FieldError(f"Code {code} outside [0, {self.q - 1}]")
        return FieldElement(self, int(code))

    def elements(self) -> tuple[FieldElement, ...]:
        """All q elements in enumeration order (codes 0..q-1)."""
        return self._elements

    @cached_property
    def _elements(self) -> tuple[FieldElement, ...]:
        return tuple(FieldElement(self, code) for code in range(self.q))

    def check_same(self, other: FieldCtx) -> None:
        if other is not self and other != self:
            raise ContextMismatchError(f"Mixed fields: {self} and {other}")

    # ------------------------------------------------------------------
    # Code packing
    # ------------------------------------------------------------------

    def unpack(self, code: int) -> list[int]:
        """Coefficient vector (c_0, ..., c_{k-1}) of a code."""
        digits = []
        for _ in range(self.k):
            code, d = divmod(code, self.p)
            digits.append(d)
        return digits

    def pack(self, coeffs: Iterable[int]) -> int:
        code = 0
        weight = 1
        for c in coeffs:
            code += c * weight
            weight *= self.p
        return code

    # ------------------------------------------------------------------
    # Scalar arithmetic on codes
    # ------------------------------------------------------------------

    def add_codes(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return self.pack((x + y) % self.p for x, y in zip(self.unpack(a), self.unpack(b)))

    def neg_code(self, a: int) -> int:
        if self.k == 1:
            return -a % self.p
        if self.p == 2:
            return a
        return self.pack(-x % self.p for x in self.unpack(a))

    def sub_codes(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a - b) % self.p
        return self.add_codes(a, self.neg_code(b))

    def mul_codes(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        product = _poly_mul(self.unpack(a), self.unpack(b), self.p)
        remainder = _poly_divmod(product, self.modulus, self.p)[1]
        return self.pack(remainder)

    def inv_code(self, a: int) -> int:
        if a == 0:
            raise FieldZeroDivisionError(f"Inversion of zero in {self}")
        if self.k == 1:
            return _int_inverse(a, self.p)
        return self.pack(_poly_inverse(_trim(self.unpack(a)), self.modulus, self.p))

    def pow_code(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv_code(a), -e
        if self.k == 1:
            return pow(a, e, self.p)
        result = 1
        base = a
        while e:
            if e & 1:
                result = self.mul_codes(result, base)
            base = self.mul_codes(base, base)
            e >>= 1
        return result

    # ------------------------------------------------------------------
    # Vectorised arithmetic on numpy code arrays
    # ------------------------------------------------------------------

    def _digitwise(self, a: np.ndarray, b: np.ndarray, op) -> np.ndarray:
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        weight = 1
        for _ in range(self.k):
            da = (a // weight) % self.p
            db = (b // weight) % self.p
            out += (op(da, db) % self.p) * weight
            weight *= self.p
        return out

    def vadd(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return np.bitwise_xor(a, b)
        return self._digitwise(a, b, np.add)

    def vsub(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return (a - b) % self.p
        if self.p == 2:
            return np.bitwise_xor(a, b)
        return self._digitwise(a, b, np.subtract)

    def vneg(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        return self.vsub(np.zeros_like(a), a)

    def vmul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return (a * b) % self.p
        exp, log = self._log_tables
        product = exp[log[a] + log[b]]
        return np.where((a == 0) | (b == 0), 0, product)

    def vpow(self, a, e: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if e < 0:
            a, e = self.vinv(a), -e
        result = np.ones_like(a)
        base = a
        while e:
            if e & 1:
                result = self.vmul(result, base)
            base = self.vmul(base, base)
            e >>= 1
        return result

    def vinv(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise FieldZeroDivisionError(f"Inversion of zero in {self}")
        if self.k == 1:
            return self.vpow(a, self.p - 2)
        exp, log = self._log_tables
        return exp[(self.q - 1 - log[a]) % (self.q - 1)]

    @cached_property
    def _log_tables(self) -> tuple[np.ndarray, np.ndarray]:
        """Exp/log tables over a primitive element (extension fields only)."""
        order = self.q - 1
        g = self._primitive_code()
        exp = np.empty(2 * order, dtype=np.int64)
        log = np.zeros(self.q, dtype=np.int64)
        x = 1
        for i in range(order):
            exp[i] = x
            log[x] = i
            x = self.mul_codes(x, g)
        exp[order:] = exp[:order]
        return exp, log

    def _primitive_code(self) -> int:
        order = self.q - 1
        factors = _prime_factors(order)
        for g in range(2, self.q):
            if all(self.pow_code(g, order // r) != 1 for r in factors):
                return g
        raise FieldError(f"No primitive element found in {self}")

    def random_codes(self, rng: np.random.Generator, size) -> np.ndarray:
        return rng.integers(0, self.q, size=size, dtype=np.int64)

    # ------------------------------------------------------------------
    # Formatting
    # ------------------------------------------------------------------

    def format_code(self, code: int) -> str:
        """Text form usable inside the polynomial grammar."""
        if self.k == 1:
            return str(code)
        terms = []
        for i, c in enumerate(self.unpack(code)):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                power = "t" if i == 1 else f"t^{i}"
                terms.append(power if c == 1 else f"{c}*{power}")
        if not terms:
            return "0"
        return terms[0] if len(terms) == 1 else "(" + " + ".join(terms) + ")"


def format_modulus(modulus: Sequence[int]) -> str:
    terms = []
    for i in range(len(modulus) - 1, -1, -1):
        c = modulus[i]
        if c == 0:
            continue
        power = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
        if not power:
            terms.append(str(c))
        else:
            terms.append(power if c == 1 else f"{c}*{power}")
    return " + ".join(terms)


# ============================================================================
# Field elements
# ============================================================================


class FieldElement:
    """An element of F_q: a reduced code together with its field."""

    __slots__ = ("ctx", "value")

    def __init__(self, ctx: FieldCtx, value: int):
        self.ctx = ctx
        self.value = value

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(self.ctx.unpack(self.value))

    @property
    def representation(self) -> int | tuple[int, ...]:
        """Integer residue for prime fields, coefficient vector otherwise."""
        return self.value if self.ctx.k == 1 else self.coeffs

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            self.ctx.check_same(other.ctx)
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other) % self.ctx.p
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.add_codes(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.sub_codes(self.value, b))

    def __rsub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.sub_codes(b, self.value))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.mul_codes(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.mul_codes(self.value, self.ctx.inv_code(b)))

    def __rtruediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.mul_codes(b, self.ctx.inv_code(self.value)))

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx.neg_code(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.ctx, self.ctx.pow_code(self.value, int(e)))

    def inv(self) -> FieldElement:
        return FieldElement(self.ctx, self.ctx.inv_code(self.value))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.ctx == other.ctx and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == int(other) % self.ctx.p
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return canon_rep(self)

    def __repr__(self):
        return f"FieldElement({self}, {self.ctx})"

    def __str__(self):
        if self.ctx.k == 1:
            return str(self.value)
        return "[" + ",".join(str(c) for c in self.coeffs) + "]"

    def to_json(self) -> int | list[int]:
        return self.value if self.ctx.k == 1 else list(self.coeffs)

    @staticmethod
    def from_json(ctx: FieldCtx, data: int | list[int]) -> FieldElement:
        if isinstance(data, list):
            if len(data) != ctx.k or any(not 0 <= c < ctx.p for c in data):
                raise FieldError(f"Malformed element {data} for {ctx}")
            return FieldElement(ctx, ctx.pack(data))
        return ctx.element(int(data))


# ============================================================================
# Module-level operations
# ============================================================================


@lru_cache(maxsize=None)
def field_new(p: int, k: int = 1) -> FieldCtx:
    """
    Build F_{p^k}.

    For k > 1 the modulus is the lexicographically smallest monic irreducible
    polynomial of degree k, which makes the representation reproducible.
    """
    if not isinstance(p, int) or not is_prime(p):
        raise FieldError(f"Field characteristic {p} is not prime")
    if k < 1:
        raise FieldError(f"Extension degree must be >= 1, got {k}")
    if p ** k > FIELD_ORDER_CAP:
        raise FieldError(f"q = {p}^{k} exceeds the cap of {FIELD_ORDER_CAP}")
    if k == 1:
        return FieldCtx(p)
    return FieldCtx(p, k, smallest_irreducible(p, k))


_FIELD_SPEC = re.compile(r"^\s*(\d+)\s*(?:\^\s*(\d+)\s*)?$")


def parse_field_spec(text: str) -> FieldCtx:
    """Parse "p" or "p^k" (e.g. "7", "3^2")."""
    match = _FIELD_SPEC.match(str(text))
    if not match:
        raise FieldError(f"Malformed field spec '{text}', expected 'p' or 'p^k'")
    p = int(match.group(1))
    k = int(match.group(2)) if match.group(2) is not None else 1
    return field_new(p, k)


def enumerate_field(ctx: FieldCtx) -> list[FieldElement]:
    """All elements, prime field 0..p-1, extension fields in odometer order."""
    return list(ctx.elements())


def canon_rep(x: FieldElement) -> int:
    """The unique integer in [0, p-1] reducing to x (prime fields only)."""
    if x.ctx.k != 1:
        raise FieldError("Canonical integer representatives exist only in prime fields")
    return x.value
