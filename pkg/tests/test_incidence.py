"""Point-curve incidences and the deviation bound."""

from fractions import Fraction

import numpy as np
import pytest

from algebra.gf import field_new
from analysis.incidence import (
    CurveFamily,
    PointSet,
    bound_satisfied,
    classes,
    count_incidences,
    decomposed_deviation,
    incidence_trials,
    shear,
    shear_family,
    size_ladder,
    vinh_deviation,
)
from analysis.sampling import make_rng
from errors import IncidenceDomainError, SamplingError


def brute_force(points, family):
    ctx = points.ctx
    total = 0
    for row in family.coeffs.tolist():
        for x, y in zip(points.xs.tolist(), points.ys.tolist()):
            value = 0
            for a in row:
                value = ctx.add_codes(ctx.mul_codes(value, x), a)
            total += value == y
    return total


@pytest.mark.parametrize("p, k, degree", [(5, 1, 1), (7, 1, 2), (3, 2, 2), (2, 3, 3)])
def test_counting_matches_brute_force(p, k, degree):
    ctx = field_new(p, k)
    rng = make_rng(p + degree)
    points = PointSet.random(ctx, min(20, ctx.q ** 2), rng)
    family = CurveFamily.random(ctx, degree, 15, rng)
    expected = brute_force(points, family)
    assert count_incidences(points, family, method="naive") == expected
    assert count_incidences(points, family, method="bucket") == expected
    assert count_incidences(points, family, workers=3) == expected


def test_full_sets_have_zero_deviation(f5):
    result = vinh_deviation(PointSet.full(f5), CurveFamily.full(f5, 1))
    assert result.incidences == 125
    assert result.deviation == Fraction(0)
    assert result.satisfied


def test_curve_degree_must_be_below_q(f7):
    with pytest.raises(IncidenceDomainError) as excinfo:
        CurveFamily(f7, 7, [[1] * 8])
    assert excinfo.value.exit_code == 65
    with pytest.raises(IncidenceDomainError):
        incidence_trials(f7, 7)


def test_family_deduplicates(f5):
    family = CurveFamily(f5, 1, [[1, 2], [1, 2], [3, 2]])
    assert len(family) == 2


def test_integers_are_codes_in_extension_fields(f9):
    points = PointSet.from_pairs(f9, [(3, 7)])
    assert points.xs.tolist() == [3] and points.ys.tolist() == [7]


def test_points_on_one_curve(f7):
    points = PointSet.on_curve(f7, [1, 0, 3])
    assert len(points) == 7
    assert count_incidences(points, CurveFamily(f7, 2, [[1, 0, 3]])) == 7


def test_curves_through_one_point(f7, rng):
    family = CurveFamily.through_point(f7, 2, (3, 4), 20, rng)
    assert len(family) == 20
    assert count_incidences(PointSet.from_pairs(f7, [(3, 4)]), family) == 20


def test_bound_satisfied_is_exact():
    # q = 5, n = 1, |P| = |Q| = 5: (5*I - 25)^2 <= 125 * 25
    assert bound_satisfied(5, 1, 5, 5, 5)
    assert bound_satisfied(5, 1, 16, 5, 5)
    assert not bound_satisfied(5, 1, 17, 5, 5)


@pytest.mark.parametrize("seed", range(5))
def test_shearing_preserves_incidences(f7, seed):
    rng = make_rng(seed)
    points = PointSet.random(f7, 25, rng)
    family = CurveFamily.random(f7, 3, 30, rng)
    head = [int(v) for v in rng.integers(0, 7, size=2)]
    assert count_incidences(shear(points, head), shear_family(family, head)) == count_incidences(points, family)


def test_classes_are_line_families(f5, rng):
    family = CurveFamily.random(f5, 2, 40, rng)
    grouped = classes(family)
    assert sum(len(lines) for lines in grouped.values()) == len(family)
    assert all(lines.degree == 1 for lines in grouped.values())


@pytest.mark.parametrize("degree", [2, 3])
def test_decomposed_deviation_chain(f7, degree):
    rng = make_rng(degree)
    report = decomposed_deviation(PointSet.random(f7, 30, rng), CurveFamily.random(f7, degree, 60, rng))
    assert report.incidences_preserved
    assert report.chain_holds


def test_seeded_trials_satisfy_the_bound(f7):
    summary = incidence_trials(f7, 2, "20", "20", trials=100, seed=1)
    assert summary.trials == 100
    assert summary.satisfied == 100


def test_adversarial_instances(f5):
    summary = incidence_trials(f5, 1, "10", "10", trials=10, seed=3, adversarial=True)
    assert summary.all_satisfied
    labels = [instance["instance"] for instance in summary.instances]
    assert labels == ["points-on-one-curve", "curves-through-one-point", "full-sets", "singletons"]
    full = summary.instances[2]
    assert full["deviation"] == Fraction(0)


@pytest.mark.slow
@pytest.mark.parametrize("q_spec", ["5", "7", "3^2", "11", "13", "5^2", "3^3"])
@pytest.mark.parametrize("degree", [1, 2, 3])
def test_bound_across_fields(q_spec, degree):
    from algebra.gf import parse_field_spec

    ctx = parse_field_spec(q_spec)
    q = ctx.q
    point_population, curve_population = q * q, q ** (degree + 1)
    point_sizes = sorted({min(n, point_population) for n in (1, q // 2, q, q * q, 2 * q * q)})
    curve_sizes = sorted({min(n, curve_population) for n in (1, q, q * q, 2 * q * q)})
    for points in point_sizes:
        for curves in curve_sizes:
            summary = incidence_trials(ctx, degree, str(points), str(curves), trials=10, seed=q)
            assert summary.all_satisfied, (points, curves, summary.failures)
    summary = incidence_trials(ctx, degree, "mixed", "mixed", trials=60, seed=q, adversarial=True)
    assert summary.all_satisfied, summary.failures


def test_size_ladder_caps_at_population():
    assert size_ladder(5, 25) == [1, 5, 25]
    assert size_ladder(5, 125) == [1, 5, 25, 50]
    assert size_ladder(7, 7 ** 3) == [1, 7, 49, 98]
    assert size_ladder(2, 3) == [1, 2, 3]


def test_mixed_sizes_draw_from_the_ladder(f5, monkeypatch):
    import analysis.incidence as incidence

    seen = []
    original = incidence.vinh_deviation

    def recording(points, family, workers=1):
        seen.append((len(points), len(family)))
        return original(points, family, workers)

    monkeypatch.setattr(incidence, "vinh_deviation", recording)
    summary = incidence_trials(f5, 1, "mixed", "mixed", trials=200, seed=4)
    assert summary.all_satisfied
    assert {p for p, _ in seen} == {1, 5, 25}
    assert {c for _, c in seen} == {1, 5, 25, 50}


def test_mixed_sizes_are_reproducible(f7):
    first = incidence_trials(f7, 2, "mixed", "10", trials=30, seed=2).to_dict()
    second = incidence_trials(f7, 2, "mixed", "10", trials=30, seed=2).to_dict()
    assert first == second


@pytest.mark.parametrize("spec", ["some", "-1", "26"])
def test_size_spec_errors(f5, spec):
    with pytest.raises(SamplingError):
        incidence_trials(f5, 1, spec, "10", trials=1)


def test_trials_are_reproducible(f7):
    first = incidence_trials(f7, 1, "15", "15", trials=20, seed=11).to_dict()
    second = incidence_trials(f7, 1, "15", "15", trials=20, seed=11).to_dict()
    assert first == second


def test_full_quadratic_family_over_f5(f5):
    assert count_incidences(PointSet.full(f5), CurveFamily.full(f5, 2)) == 625


def test_single_point_on_the_diagonal(f5):
    assert count_incidences(PointSet.from_pairs(f5, [(0, 0)]), CurveFamily(f5, 1, [[1, 0]])) == 1


def test_every_curve_has_q_points(f9):
    family = CurveFamily.full(f9, 2)
    assert count_incidences(PointSet.full(f9), family) == 9 * len(family)


def test_shear_is_invertible(f7, rng):
    points = PointSet.random(f7, 30, rng)
    head = [2, 5]
    back = [int(v) for v in f7.vneg(head)]
    assert shear(points, [0, 0]) == points
    assert shear(shear(points, head), back) == points
