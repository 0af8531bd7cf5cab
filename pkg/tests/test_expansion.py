"""Image sets, deficiency reports, witnesses and the structured families."""

from fractions import Fraction

import numpy as np
import pytest

from algebra.gf import field_new
from algebra.poly_parser import parse
from analysis.expansion import (
    conc_family_run,
    conc_polynomial,
    counterexample_run,
    counterexample_sets,
    deficiency_stat,
    hypothesis_flags,
    image_histogram,
    image_mask,
    image_set,
    odd_primes_in_range,
    proof_witness,
)
from analysis.sampling import build_sets, make_rng
from errors import ConfigError, DimensionError, FieldError, PreconditionWarning, SamplingError
from graph.nodes.common import parse_in_yz

NICE_QUADRATIC = "2*z^2 + (x+y)*z + x*y"


def full(ctx, count):
    return [np.arange(ctx.q)] * count


# ============================================================================
# Images
# ============================================================================


def test_sum_covers_the_field(f7):
    assert len(image_set(parse("x + y", 2, f7), full(f7, 2))) == 7


def test_product_on_zero(f5):
    assert image_set(parse("x*y", 2, f5), [[0], [0]]) == frozenset({f5.zero})


def test_image_needs_one_set_per_variable(f5):
    with pytest.raises(DimensionError):
        image_mask(parse("x + y", 2, f5), full(f5, 3))


def test_set_elements_must_be_codes(f5):
    with pytest.raises(SamplingError):
        image_mask(parse("x + y", 2, f5), [[0, 5], [1]])


def test_empty_set_gives_empty_image(f5):
    assert not image_mask(parse("x + y", 2, f5), [[], [1, 2]]).any()


@pytest.mark.parametrize("workers", [2, 4])
def test_threaded_scan_matches_serial(workers):
    ctx = field_new(13)
    poly = parse(NICE_QUADRATIC, 3, ctx)
    sets = build_sets(ctx, "uniform:5", 3, seed=4)
    serial = image_mask(poly, sets, workers=1, chunk=17)
    assert np.array_equal(image_mask(poly, sets, workers=workers, chunk=17), serial)
    assert np.array_equal(image_mask(poly, sets, early_exit=False, workers=workers, chunk=17), serial)


@pytest.mark.parametrize("early_exit", [True, False])
def test_threaded_scan_propagates_block_failure(f5, monkeypatch, early_exit):
    import analysis.expansion as expansion

    original = expansion._evaluate_block

    def failing(poly, arrays, start, stop):
        if start > 0:
            raise RuntimeError(f"block at {start} failed")
        return original(poly, arrays, start, stop)

    monkeypatch.setattr(expansion, "_evaluate_block", failing)
    poly = parse("x + 2*y", 2, f5)
    with pytest.raises(RuntimeError, match="failed"):
        image_mask(poly, [[0, 1], [0, 1, 2]], early_exit=early_exit, workers=2, chunk=2)


def test_histogram_counts_every_preimage(f7):
    poly = parse("x*y + z", 3, f7)
    sets = build_sets(f7, "uniform:4", 3, seed=2)
    counts = image_histogram(poly, sets, chunk=7)
    assert counts.sum() == 4 ** 3
    assert np.array_equal(counts > 0, image_mask(poly, sets))


def test_extension_field_image(f9):
    poly = parse("x^2 + t*y", 2, f9)
    assert len(image_set(poly, full(f9, 2))) == 9


@pytest.mark.parametrize("seed", range(4))
def test_image_grows_with_the_sets(seed):
    ctx = field_new(11)
    poly = parse(NICE_QUADRATIC, 3, ctx)
    rng = make_rng(seed)
    order = [rng.permutation(ctx.q) for _ in range(3)]
    previous = 0
    for size in range(1, ctx.q + 1):
        current = len(image_set(poly, [o[:size] for o in order]))
        assert current >= previous
        previous = current


# ============================================================================
# Deficiency
# ============================================================================


def test_full_sets_statistic_equals_deficiency():
    ctx = field_new(11)
    report = deficiency_stat(parse(NICE_QUADRATIC, 3, ctx), full(ctx, 3))
    assert report.image_size == 11
    assert report.deficiency == 0
    assert report.statistic == Fraction(report.deficiency)
    assert report.hypotheses["main"]["holds"]
    assert report.hypotheses["positive_proportion"]["holds"]


def test_linear_form_on_random_sets():
    ctx = field_new(13)
    sets = build_sets(ctx, "uniform:7", 2, seed=21)
    report = deficiency_stat(parse("x + 2*y", 2, ctx), sets, sampling="uniform:7", seed=21)
    assert report.set_sizes == [7, 7]
    assert report.deficiency == 13 - report.image_size
    assert report.statistic == Fraction(report.deficiency * 49, 13 ** 2)
    # Cauchy-Davenport
    assert report.image_size >= 13


def test_deficiency_needs_d_plus_one_variables(f5):
    with pytest.raises(DimensionError):
        deficiency_stat(parse("x + y + z", 3, f5), full(f5, 3))


def test_report_is_reproducible():
    ctx = field_new(13)
    poly = parse(NICE_QUADRATIC, 3, ctx)
    runs = [deficiency_stat(poly, build_sets(ctx, "uniform:6", 3, seed=8), seed=8).to_dict() for _ in range(2)]
    assert runs[0] == runs[1]


def test_hypothesis_thresholds():
    flags = hypothesis_flags(64, 2, [16, 16, 16], C=1.0, epsilon=0.5, delta=0.25)
    assert flags["main"]["threshold"] == pytest.approx(16.0)
    assert flags["main"]["holds"]
    assert flags["almost_strong"]["threshold"] == pytest.approx(64.0)
    assert not flags["almost_strong"]["holds"]
    assert flags["positive_proportion"]["holds"]


@pytest.mark.slow
def test_full_set_deficiency_across_primes():
    for p in odd_primes_in_range("11-199"):
        ctx = field_new(p)
        assert deficiency_stat(parse(NICE_QUADRATIC, 3, ctx), full(ctx, 3)).deficiency == 0


# ============================================================================
# Witness
# ============================================================================


@pytest.mark.parametrize("seed", range(3))
def test_witness_has_no_incidences(seed):
    ctx = field_new(11)
    poly = parse(NICE_QUADRATIC, 3, ctx)
    sets = build_sets(ctx, "uniform:6", 3, seed=seed)
    witness = proof_witness(poly, sets)
    assert witness["distinguished"] == "z"
    assert witness["incidences"] == 0
    assert witness["incidences_zero"]
    assert witness["inequality_checked"]
    assert witness["inequality_holds"]
    assert witness["points"] == 6 * witness["missed_values"]


def test_witness_along_another_variable(f7):
    poly = parse(NICE_QUADRATIC, 3, f7)
    witness = proof_witness(poly, build_sets(f7, "uniform:3", 3, seed=1), distinguished=0)
    assert witness["distinguished"] == "x"
    assert witness["incidences"] == 0


# ============================================================================
# Diagonal quadric
# ============================================================================


def test_counterexample_sets_property():
    ctx = field_new(101)
    X, Y, Z = counterexample_sets(ctx, 1, 1, 1)
    assert np.array_equal(X, Y) and np.array_equal(Y, Z)
    residues = X * X % 101
    assert residues.min() >= 1 and residues.max() <= 25


@pytest.mark.parametrize("p", [101, 229, 1009])
@pytest.mark.parametrize("coeffs", [(1, 1, 1), (1, 2, 3)])
def test_counterexample_ceiling(p, coeffs):
    report = counterexample_run(p, coeffs)
    assert report.extras["ceiling"] == 3 * p // 4
    assert report.image_size <= 3 * p // 4
    assert report.checks["ceiling_holds"]
    assert report.checks["sizes_in_window"]
    low, high = report.extras["value_range"]
    assert 3 <= low and high <= 3 * (p // 4)


def test_counterexample_ceiling_for_101():
    assert counterexample_run(101, (1, 1, 1)).extras["ceiling"] == 75


def test_counterexample_rejects_bad_input(f9):
    with pytest.raises(FieldError):
        counterexample_sets(f9, 1, 1, 1)
    with pytest.raises(FieldError):
        counterexample_sets(field_new(2), 1, 1, 1)
    with pytest.raises(FieldError):
        counterexample_sets(field_new(7), 1, 7, 1)
    with pytest.raises(ConfigError):
        counterexample_run(7, (1, 1))


# ============================================================================
# a*x^d + F(y,z)*x + G(y,z)
# ============================================================================


def test_conc_polynomial_layout():
    ctx = field_new(11)
    poly = conc_polynomial(2, 3, parse_in_yz("y", ctx), parse_in_yz("z^2", ctx))
    assert poly == parse("2*x^3 + x*y + z^2", 3, ctx)


def test_conc_family_full_sets():
    ctx = field_new(11)
    report = conc_family_run(1, 3, parse_in_yz("y", ctx), parse_in_yz("z^2", ctx), full(ctx, 3))
    assert report.deficiency == 0
    assert report.checks["independence_certified"]
    assert report.checks["witness_incidences_zero"]
    assert report.checks["witness_inequality"]
    assert report.extras["bound_shape"] == Fraction(1)
    assert report.passed


def test_conc_family_warns_on_dependent_parts():
    ctx = field_new(11)
    with pytest.warns(PreconditionWarning):
        report = conc_family_run(1, 2, parse_in_yz("y", ctx), parse_in_yz("y^2", ctx), full(ctx, 3))
    assert not report.checks["independence_certified"]
    assert report.extras["precondition"]["status"] == "dependent"


def test_conc_family_allows_zero_leading_coefficient():
    ctx = field_new(7)
    report = conc_family_run(
        0, 4, parse_in_yz("y", ctx), parse_in_yz("z^2", ctx), build_sets(ctx, "uniform:4", 3, seed=5)
    )
    assert report.extras["a"] == 0
    assert report.checks["witness_incidences_zero"]


def test_conc_family_needs_positive_degree():
    ctx = field_new(7)
    with pytest.raises(DimensionError):
        conc_polynomial(1, 0, parse_in_yz("y", ctx), parse_in_yz("z", ctx))


@pytest.mark.slow
def test_conc_family_sweep():
    for p in odd_primes_in_range("11-101"):
        ctx = field_new(p)
        report = conc_family_run(1, 3, parse_in_yz("y", ctx), parse_in_yz("z^2", ctx), full(ctx, 3))
        assert report.deficiency == 0
        assert report.passed


# ============================================================================
# Prime ranges
# ============================================================================


def test_odd_primes_in_range():
    assert odd_primes_in_range("10-20") == [11, 13, 17, 19]
    assert odd_primes_in_range("1-3") == [3]


@pytest.mark.parametrize("spec", ["2-2", "20-10", "abc", "5"])
def test_bad_prime_ranges(spec):
    with pytest.raises(ConfigError):
        odd_primes_in_range(spec)
