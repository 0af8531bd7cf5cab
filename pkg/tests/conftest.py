"""Shared fixtures: small fields, seeded generators, polynomial builders."""

import numpy as np
import pytest

from algebra.gf import field_new
from algebra.mvpoly import MvPoly
from algebra.poly_parser import parse


@pytest.fixture
def f3():
    return field_new(3)


@pytest.fixture
def f5():
    return field_new(5)


@pytest.fixture
def f7():
    return field_new(7)


@pytest.fixture
def f9():
    return field_new(3, 2)


@pytest.fixture
def f4():
    return field_new(2, 2)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(12345))


@pytest.fixture
def poly():
    """poly(text, ctx, nvars=3) parses polynomial text."""
    def build(text, ctx, nvars=3):
        return parse(text, nvars, ctx)
    return build


def random_poly(ctx, nvars, degree, rng, terms=4):
    """A random polynomial with up to `terms` monomials of total degree <= degree."""
    out = {}
    for _ in range(terms):
        exp = [0] * nvars
        for _ in range(int(rng.integers(0, degree + 1))):
            exp[int(rng.integers(nvars))] += 1
        out[tuple(exp)] = int(rng.integers(ctx.q))
    return MvPoly.from_codes(ctx, nvars, out)
