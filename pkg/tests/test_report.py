"""Report records and their JSON form."""

import json
from fractions import Fraction

import numpy as np
import pytest

from analysis.expansion import counterexample_run
from analysis.report import ExperimentReport, from_jsonable, to_jsonable


def report(**changes):
    values = dict(
        kind="expansion", field="7", q=7, polynomial="x + y", polynomial_terms={"nvars": 2, "terms": []},
        degree=1, set_sizes=[3, 3], sampling="uniform:3", seed=0, image_size=5, deficiency=2,
        statistic=Fraction(18, 49),
    )
    values.update(changes)
    return ExperimentReport(**values)


def test_image_size_within_field():
    with pytest.raises(ValueError):
        report(image_size=8, deficiency=-1)


def test_deficiency_matches_image():
    with pytest.raises(ValueError):
        report(deficiency=3)


def test_round_trip_through_json_text():
    original = counterexample_run(101, (1, 2, 3), seed=4)
    restored = ExperimentReport.from_dict(json.loads(json.dumps(original.to_dict())))
    assert restored == original
    assert isinstance(restored.statistic, Fraction)


def test_passed_reads_checks():
    assert report().passed
    assert not report(checks={"a": True, "b": False}).passed


def test_summary_row():
    row = report().summary_row()
    assert row["sizes"] == "3 3"
    assert row["statistic"] == pytest.approx(18 / 49)


def test_to_jsonable_values():
    assert to_jsonable(Fraction(3, 4)) == {"num": 3, "den": 4}
    assert to_jsonable(float("inf")) == "inf"
    assert to_jsonable(np.int64(5)) == 5
    assert to_jsonable(np.bool_(True)) is True
    assert to_jsonable(np.arange(3)) == [0, 1, 2]
    assert to_jsonable({1: (Fraction(1), None)}) == {"1": [{"num": 1, "den": 1}, None]}
    with pytest.raises(TypeError):
        to_jsonable(object())


def test_from_jsonable_restores_rationals():
    assert from_jsonable({"x": [{"num": 1, "den": 2}]}) == {"x": [Fraction(1, 2)]}
