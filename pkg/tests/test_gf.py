"""Finite field arithmetic."""

import itertools

import numpy as np
import pytest

from algebra.gf import (
    FieldElement,
    canon_rep,
    enumerate_field,
    field_new,
    is_irreducible,
    parse_field_spec,
)
from errors import ContextMismatchError, FieldError, FieldZeroDivisionError


@pytest.mark.parametrize("text, q", [("7", 7), ("3^2", 9), (" 2 ^ 3 ", 8), ("101", 101)])
def test_parse_field_spec(text, q):
    assert parse_field_spec(text).q == q


@pytest.mark.parametrize("text", ["4^1", "9", "1", "3^0", "p", "", "2^21", "7^-1"])
def test_parse_field_spec_rejects(text):
    with pytest.raises(FieldError) as excinfo:
        parse_field_spec(text)
    assert excinfo.value.exit_code == 64


def test_prime_field_matches_integers(f7):
    for a, b in itertools.product(range(7), repeat=2):
        x, y = f7.element(a), f7.element(b)
        assert int(x + y) == (a + b) % 7
        assert int(x - y) == (a - b) % 7
        assert int(x * y) == (a * b) % 7
        if b:
            assert int(x / y) == a * pow(b, -1, 7) % 7


def test_integer_coercion_is_n_times_one(f9):
    assert f9.element(4) == f9.element(1)
    assert f9.element(-1) == -f9.one
    assert f9.element(3) == f9.zero


@pytest.mark.parametrize("p, k", [(2, 2), (2, 3), (3, 2), (5, 2), (2, 4)])
def test_extension_field_axioms(p, k):
    ctx = field_new(p, k)
    assert is_irreducible(list(ctx.modulus), p)
    elements = enumerate_field(ctx)
    assert len(elements) == ctx.q
    assert [e.value for e in elements] == list(range(ctx.q))
    for x in elements:
        assert x ** ctx.q == x
        if x:
            assert x * x.inv() == ctx.one
    for x, y in itertools.product(elements[:6], elements):
        assert x * y == y * x
        assert (x + y) - y == x


def test_vectorised_matches_scalar(f9):
    codes = np.arange(f9.q)
    a, b = np.meshgrid(codes, codes)
    a, b = a.ravel(), b.ravel()
    assert f9.vmul(a, b).tolist() == [f9.mul_codes(int(x), int(y)) for x, y in zip(a, b)]
    assert f9.vadd(a, b).tolist() == [f9.add_codes(int(x), int(y)) for x, y in zip(a, b)]
    assert f9.vsub(a, b).tolist() == [f9.sub_codes(int(x), int(y)) for x, y in zip(a, b)]
    assert f9.vpow(codes, 5).tolist() == [f9.pow_code(int(x), 5) for x in codes]
    assert f9.vinv(codes[1:]).tolist() == [f9.inv_code(int(x)) for x in codes[1:]]


def test_characteristic_two_addition_is_xor(f4):
    codes = np.arange(4)
    assert f4.vadd(codes[:, None], codes[None, :]).tolist() == (codes[:, None] ^ codes[None, :]).tolist()


def test_zero_division(f5, f9):
    with pytest.raises(FieldZeroDivisionError):
        f5.zero.inv()
    with pytest.raises(ZeroDivisionError):
        f9.one / f9.zero
    with pytest.raises(FieldZeroDivisionError):
        f9.vinv(np.array([1, 0]))


def test_mixed_fields_rejected(f5, f7):
    with pytest.raises(ContextMismatchError):
        f5.one + f7.one


def test_canonical_representative(f7, f9):
    assert canon_rep(f7.element(-1)) == 6
    assert int(f7.element(10)) == 3
    with pytest.raises(FieldError):
        canon_rep(f9.generator)


def test_json_forms(f7, f9):
    assert f7.element(3).to_json() == 3
    x = f9.element([1, 2])
    assert x.to_json() == [1, 2]
    assert FieldElement.from_json(f9, [1, 2]) == x
    with pytest.raises(FieldError):
        FieldElement.from_json(f9, [1, 2, 0])


def test_generator_only_in_extensions(f5, f9):
    assert f9.generator.coeffs == (0, 1)
    with pytest.raises(FieldError):
        f5.generator


# ============================================================================
# Field laws on seeded samples
# ============================================================================


SMALL_FIELDS = [(p, k) for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79)
                for k in range(1, 7) if p ** k <= 81]


@pytest.mark.parametrize("p, k", [(5, 1), (7, 1), (101, 1), (2, 4), (3, 2), (3, 3), (7, 2), (2, 8)])
def test_ring_laws_on_random_triples(p, k):
    ctx = field_new(p, k)
    rng = np.random.Generator(np.random.PCG64(p ** k))
    a, b, c = (ctx.random_codes(rng, 10_000) for _ in range(3))
    assert np.array_equal(ctx.vadd(ctx.vadd(a, b), c), ctx.vadd(a, ctx.vadd(b, c)))
    assert np.array_equal(ctx.vmul(ctx.vmul(a, b), c), ctx.vmul(a, ctx.vmul(b, c)))
    assert np.array_equal(ctx.vmul(a, ctx.vadd(b, c)), ctx.vadd(ctx.vmul(a, b), ctx.vmul(a, c)))
    assert np.array_equal(ctx.vsub(ctx.vadd(a, b), b), a)


def test_scalar_ring_laws_in_f27():
    ctx = field_new(3, 3)
    rng = np.random.Generator(np.random.PCG64(27))
    for a, b, c in ctx.random_codes(rng, (10_000, 3)).tolist():
        x, y, z = ctx.from_code(a), ctx.from_code(b), ctx.from_code(c)
        assert (x * y) * z == x * (y * z)
        assert (x + y) + z == x + (y + z)
        assert x * (y + z) == x * y + x * z


@pytest.mark.parametrize("p, k", SMALL_FIELDS)
def test_frobenius_exhaustively(p, k):
    ctx = field_new(p, k)
    codes = np.arange(ctx.q)
    assert np.array_equal(ctx.vpow(codes, ctx.q), codes)
    frob = ctx.vpow(codes, p)
    assert np.flatnonzero(frob == codes).tolist() == list(range(p))
    a, b = (grid.ravel() for grid in np.meshgrid(codes, codes))
    assert np.array_equal(ctx.vpow(ctx.vadd(a, b), p), ctx.vadd(frob[a], frob[b]))
    assert np.array_equal(ctx.vpow(ctx.vmul(a, b), p), ctx.vmul(frob[a], frob[b]))


def test_frobenius_covers_the_larger_extensions():
    assert {(3, 3), (7, 2), (3, 4)} <= set(SMALL_FIELDS)


def test_inverses_in_f27():
    ctx = field_new(3, 3)
    nonzero = [x for x in enumerate_field(ctx) if x]
    assert len(nonzero) == 26
    for x in nonzero:
        assert x * x.inv() == ctx.one
        assert x / x == ctx.one
        assert x.inv().inv() == x
    codes = np.arange(1, ctx.q)
    assert np.all(ctx.vmul(codes, ctx.vinv(codes)) == 1)
