"""Jacobians, annihilators, niceness and the quadratic classifier."""

import itertools
import math

import pytest

from algebra.gf import field_new
from algebra.poly_parser import parse
from analysis.sampling import make_rng
from analysis.structure import (
    IndependenceStatus,
    NicenessStatus,
    REASON_COMPLETED_SQUARE,
    REASON_DIAGONAL,
    REASON_GENERIC,
    REASON_MISSING_VARIABLE,
    classify_quadratic,
    compare_classifier,
    default_bound,
    exhaustive_quadratics,
    fibre_relations,
    find_annihilator,
    genuinely_ternary,
    homogeneous_form_checks,
    independence_check,
    is_nice,
    jacobian_det,
    perron_bound,
    random_quadratics,
    square_relation,
)
from errors import AnnihilatorSearchTooLarge, DimensionError, StructureError
from tests.conftest import random_poly


def P(text, ctx, nvars=2):
    return parse(text, nvars, ctx)


# ============================================================================
# Jacobian
# ============================================================================


def test_jacobian_examples(f5):
    assert jacobian_det([P("x+y", f5), P("x*y", f5)]) == P("x - y", f5)
    assert jacobian_det([P("0", f5), P("x^2+y^2", f5)]).is_zero
    assert jacobian_det([P("x^5", f5), P("y", f5)]).is_zero


def test_jacobian_needs_square_system(f5):
    with pytest.raises(DimensionError):
        jacobian_det([P("x", f5)])


# ============================================================================
# Annihilators
# ============================================================================


def test_annihilator_of_square(f5):
    found = find_annihilator([P("x*y", f5), P("x^2*y^2", f5)], 2)
    assert found is not None
    assert found.relation == P("x^2 - y", f5)
    assert found.verify()
    assert found.degree == 2


def test_coordinates_have_no_relation(f5):
    assert find_annihilator([P("x", f5), P("y", f5)], 3) is None


def test_annihilator_of_polynomial_family(f7):
    f = P("x^2 + 3*x*y + 2", f7)
    found = find_annihilator([f, f * f + f], 2)
    assert found.relation == P("x^2 + x - y", f7)
    assert found.relation.substitute([f, f * f + f]).is_zero


@pytest.mark.parametrize("seed", range(100))
def test_constructed_dependent_families(f5, seed):
    rng = make_rng(seed)
    f = P("x^2 + y", f5).scale(int(rng.integers(1, 5))) + int(rng.integers(5))
    g = P("x + 2*y", f5) + int(rng.integers(5))
    for polys, bound in (([f, f * f + f], 2), ([f * g, f * f * g * g], 2), ([f, f * g, g], 2)):
        found = find_annihilator(polys, bound)
        assert found is not None
        assert found.verify()


def test_nonzero_jacobian_families_have_no_relation(f5):
    rng = make_rng(2024)
    checked = 0
    while checked < 100:
        polys = [random_poly(f5, 2, 2, rng, terms=3) for _ in range(2)]
        if any(p.degree < 1 for p in polys) or jacobian_det(polys).is_zero:
            continue
        assert find_annihilator(polys, default_bound(polys)) is None, [str(p) for p in polys]
        checked += 1


def test_annihilator_cap(f5):
    with pytest.raises(AnnihilatorSearchTooLarge) as excinfo:
        find_annihilator([P("x", f5), P("y", f5)], 200, column_cap=100)
    assert excinfo.value.exit_code == 66


def test_perron_bound_examples():
    assert perron_bound(2, 1, 1) == 1
    assert perron_bound(2, 2, 3) is None


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("degree", [1, 2, 3, 4])
def test_perron_bound_is_minimal(n, degree):
    M = perron_bound(n + 1, n, degree)

    def holds(m):
        return math.comb(m + n + 1, n + 1) > math.comb(degree * m + n, n)

    assert holds(M)
    assert M == 1 or not holds(M - 1)


def test_default_bound_respects_cap(f5):
    polys = [P("x^3", f5), P("y^3", f5), P("x*y^2", f5)]
    bound = default_bound(polys, column_cap=100)
    assert math.comb(bound + 3, 3) <= 100


def test_independence_verdicts(f5):
    independent = independence_check([P("x+y", f5), P("x*y", f5)])
    assert independent.status is IndependenceStatus.INDEPENDENT
    assert independent.jacobian == P("x - y", f5)

    dependent = independence_check([P("y", f5), P("y^2", f5)])
    assert dependent.status is IndependenceStatus.DEPENDENT
    assert dependent.relation.relation == P("x^2 - y", f5)

    zero_part = independence_check([P("0", f5), P("x", f5)])
    assert zero_part.status is IndependenceStatus.DEPENDENT
    assert zero_part.relation.relation == P("x", f5)


# ============================================================================
# Niceness
# ============================================================================


def test_nice_quadratic(f5):
    verdict = is_nice(P("2*z^2+(x+y)*z+x*y", f5, 3))
    assert verdict.status is NicenessStatus.NICE
    assert verdict.distinguished == 2
    assert verdict.witness == P("x - y", f5)
    doc = verdict.to_json()
    assert doc["certificate"]["kind"] == "jacobian"
    assert doc["distinguished_name"] == "z"


def test_sum_of_squares_is_not_nice(f5):
    verdict = is_nice(P("x^2+y^2+z^2", f5, 3))
    assert verdict.status is NicenessStatus.NOT_NICE
    assert len(verdict.checks) == 3
    assert all(c.verdict.relation.verify() for c in verdict.checks)


def test_square_of_linear_form_is_not_nice(f5):
    verdict = is_nice(P("(x+y+z)^2", f5, 3))
    assert verdict.status is NicenessStatus.NOT_NICE
    assert verdict.to_json()["certificate"]["kind"] == "annihilators"
    for check in verdict.checks:
        assert check.verdict.relation.verify()


def test_parallel_search_matches_serial(f7):
    poly = P("x*y + y*z + 3*z^2 + x", f7, 3)
    assert is_nice(poly, workers=3).to_json() == is_nice(poly, workers=1).to_json()


def test_constant_rejected(f5):
    with pytest.raises(StructureError):
        is_nice(P("3", f5, 3))


# ============================================================================
# Quadratic classifier
# ============================================================================


@pytest.mark.parametrize(
    "text, status, reason",
    [
        ("x^2+y^2+z^2", NicenessStatus.NOT_NICE, REASON_DIAGONAL),
        ("3*x^2+3*y^2+3*z^2+x*y+x*z+y*z", NicenessStatus.NOT_NICE, REASON_COMPLETED_SQUARE),
        ("2*z^2+(x+y)*z+x*y", NicenessStatus.NICE, REASON_GENERIC),
        ("x^2+x*y", NicenessStatus.NOT_NICE, REASON_MISSING_VARIABLE),
        ("(x+2*y+z+1)^2 + 3", NicenessStatus.NOT_NICE, REASON_COMPLETED_SQUARE),
    ],
)
def test_classify_quadratic(f5, text, status, reason):
    result = classify_quadratic(P(text, f5, 3))
    assert result.status is status
    assert result.reason == reason


def test_classifier_preconditions(f5):
    with pytest.raises(StructureError):
        classify_quadratic(P("x^2+y*z", field_new(2), 3))
    with pytest.raises(StructureError):
        classify_quadratic(P("x*y", f5, 2))
    with pytest.raises(StructureError):
        classify_quadratic(P("x^3+y*z", f5, 3))


def test_genuinely_ternary(f5):
    assert not genuinely_ternary(P("x^2+x*y", f5, 3))
    assert genuinely_ternary(P("x*y*z", f5, 3))
    assert not genuinely_ternary(P("0", f5, 3))


def test_form_checks(f5):
    assert homogeneous_form_checks(P("x*y+y*z+x*z", f5, 3))["all_hold"]
    square = homogeneous_form_checks(P("(x+y+z)^2", f5, 3))
    assert square["rank"] == 1
    assert not square["not_square"]


def test_square_relation(f5):
    L = P("x + y", f5)
    a, b = square_relation(L, L * L * 2 + L * 3)
    assert (a, b) == (f5.element(2), f5.element(3))
    assert square_relation(L, P("x*y", f5)) is None


def linear_forms(ctx):
    x, y, z = (P(name, ctx, 3) for name in ("x", "y", "z"))
    for a, b, c in itertools.product(range(ctx.q), repeat=3):
        if a or b or c:
            yield x.scale(a) + y.scale(b) + z.scale(c)


def test_square_relation_recovers_every_coefficient_pair(f3):
    for L in linear_forms(f3):
        for a, b in itertools.product(range(3), repeat=2):
            found = square_relation(L, (L * L).scale(a) + L.scale(b))
            assert found == (f3.from_code(a), f3.from_code(b))


@pytest.mark.slow
def test_square_relation_matches_the_exhaustive_scan(f3):
    quadratics = list(exhaustive_quadratics(f3))
    for L in linear_forms(f3):
        expected = {(L * L).scale(a) + L.scale(b) for a in (1, 2) for b in range(3)}
        found = {Q for Q in quadratics if square_relation(L, Q) is not None}
        assert found == expected, str(L)


def test_classifier_agrees_on_random_quadratics(f5):
    comparison = compare_classifier(random_quadratics(f5, make_rng(7), 150))
    assert comparison.total == 150
    assert comparison.all_agree, comparison.disagreements


@pytest.mark.slow
@pytest.mark.parametrize("p, count", [(5, 10_000), (7, 10_000)])
def test_classifier_agrees_on_many_random_quadratics(p, count):
    comparison = compare_classifier(random_quadratics(field_new(p), make_rng(p), count))
    assert comparison.all_agree, comparison.disagreements


@pytest.mark.slow
def test_classifier_agrees_exhaustively_over_f3(f3):
    comparison = compare_classifier(exhaustive_quadratics(f3))
    assert comparison.total == 3 ** 9 - 27
    assert comparison.all_agree, comparison.disagreements


def test_exhaustive_enumeration_size(f3):
    assert sum(1 for _ in exhaustive_quadratics(f3)) == 3 ** 9 - 27


# ============================================================================
# Fibre relations
# ============================================================================


def test_fibre_relations(f5):
    polys = [P("x+y", f5), P("x*y", f5)]
    report = fibre_relations(polys)
    assert report.bound == 8
    assert report.degree_bound == 16
    for relation in report.relations:
        assert relation.relation is not None
        assert relation.relation.verify()
        assert relation.degree_in_variable >= 1
