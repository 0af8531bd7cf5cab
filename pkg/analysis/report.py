"""
Experiment Reports

ExperimentReport records one expansion-type run. Exact rationals are
serialised as {"num": n, "den": d} so the JSON form round-trips losslessly.
"""

import math
from dataclasses import asdict, dataclass, field, fields
from enum import Enum
from fractions import Fraction
from typing import Any

import numpy as np

from algebra.gf import FieldElement
from algebra.mvpoly import MvPoly


def to_jsonable(value: Any) -> Any:
    """Convert report values into plain JSON types."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, Fraction):
        return {"num": value.numerator, "den": value.denominator}
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, FieldElement):
        return value.to_json()
    if isinstance(value, MvPoly):
        return value.to_json()
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        return [to_jsonable(v) for v in value]
    if hasattr(value, "to_dict"):
        return to_jsonable(value.to_dict())
    if hasattr(value, "to_json"):
        return to_jsonable(value.to_json())
    raise TypeError(f"Cannot serialise {type(value).__name__}")


def from_jsonable(value: Any) -> Any:
    """Inverse of to_jsonable for rationals (other values pass through)."""
    if isinstance(value, dict):
        if set(value) == {"num", "den"}:
            return Fraction(value["num"], value["den"])
        return {k: from_jsonable(v) for k, v in value.items()}
    if isinstance(value, list):
        return [from_jsonable(v) for v in value]
    return value


@dataclass
class ExperimentReport:
    """Inputs, seeds and measured quantities of one run."""

    kind: str
    field: str
    q: int
    polynomial: str
    polynomial_terms: dict
    degree: int
    set_sizes: list[int]
    sampling: str
    seed: int
    image_size: int
    deficiency: int
    statistic: Fraction
    hypotheses: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def __post_init__(self):
        if not 0 <= self.image_size <= self.q:
            raise ValueError(f"Image size {self.image_size} outside [0, {self.q}]")
        if self.deficiency != self.q - self.image_size:
            raise ValueError("Deficiency must equal q - image size")

    @property
    def passed(self) -> bool:
        return all(bool(v) for v in self.checks.values())

    def to_dict(self) -> dict:
        return to_jsonable(asdict(self))

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentReport":
        names = {f.name for f in fields(cls)}
        return cls(**{k: from_jsonable(v) for k, v in data.items() if k in names})

    def summary_row(self) -> dict:
        return {
            "kind": self.kind,
            "q": self.q,
            "d": self.degree,
            "sizes": " ".join(str(s) for s in self.set_sizes),
            "image_size": self.image_size,
            "deficiency": self.deficiency,
            "statistic": float(self.statistic),
            "passed": self.passed,
        }
