"""Seeded subset construction."""

import numpy as np
import pytest

from analysis.sampling import (
    SetMode,
    build_sets,
    distinct_integers,
    make_rng,
    parse_set_descriptors,
    sample_sets,
)
from errors import SamplingError


def test_full_mode(f7):
    sets = sample_sets(f7, [0, 0], "full")
    assert all(np.array_equal(s, np.arange(7)) for s in sets)


def test_same_seed_same_sets(f7):
    assert [s.tolist() for s in sample_sets(f7, [3, 4], SetMode.UNIFORM, seed=9)] == [
        s.tolist() for s in sample_sets(f7, [3, 4], SetMode.UNIFORM, seed=9)
    ]


@pytest.mark.parametrize("size", [0, 1, 5, 9])
def test_uniform_sets_have_distinct_values(f9, size):
    (chosen,) = sample_sets(f9, [size], "uniform", seed=3)
    assert chosen.size == size
    assert np.unique(chosen).size == size
    assert chosen.min(initial=0) >= 0 and chosen.max(initial=0) < 9


def test_interval_sets_are_consecutive(f7):
    (chosen,) = sample_sets(f7, [4], "interval", seed=1)
    assert np.array_equal(np.diff(chosen), np.ones(3, dtype=np.int64))
    assert chosen[-1] < 7


def test_interval_needs_prime_field(f9):
    with pytest.raises(SamplingError):
        sample_sets(f9, [3], "interval")


def test_size_above_q(f5):
    with pytest.raises(SamplingError):
        sample_sets(f5, [6], "uniform")


def test_large_population_uses_rejection():
    values = distinct_integers(make_rng(0), 1 << 30, 50)
    assert np.unique(values).size == 50


def test_negative_seed():
    with pytest.raises(SamplingError):
        make_rng(-1)


def test_descriptor_parsing():
    descriptors = parse_set_descriptors("full; uniform:3; random:4:17", 3)
    assert [d.mode for d in descriptors] == [SetMode.FULL, SetMode.UNIFORM, SetMode.UNIFORM]
    assert descriptors[2].size == 4 and descriptors[2].seed == 17
    assert len(parse_set_descriptors("uniform:2", 4)) == 4


@pytest.mark.parametrize("text", ["uniform", "random:3", "interval:x", "[1, 2", "{}", "full;full"])
def test_malformed_descriptors(text):
    with pytest.raises(SamplingError):
        parse_set_descriptors(text, 3)


def test_own_seed_ignores_run_seed(f7):
    assert build_sets(f7, "random:3:9", 1, seed=1)[0].tolist() == build_sets(f7, "random:3:9", 1, seed=2)[0].tolist()


def test_explicit_extension_elements(f9):
    (chosen,) = build_sets(f9, "[[1,2],[0,1]]", 1)
    assert chosen.tolist() == [3, 7]


def test_explicit_out_of_range(f5):
    with pytest.raises(SamplingError):
        build_sets(f5, "[[1, 2]]", 1)
