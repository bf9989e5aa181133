"""Assertion records shared by the verification routines and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

PASS, FAIL, REPORT = "pass", "fail", "report-only"


def jsonable(v):
    """Exact values become fraction strings; floats keep full precision."""
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    if isinstance(v, np.ndarray):
        return [jsonable(x) for x in v.tolist()]
    if isinstance(v, dict):
        return {str(k): jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    if hasattr(v, "to_dict"):
        return v.to_dict()
    return v


@dataclass
class Assertion:
    name: str
    status: str
    lhs: object = None
    rhs: object = None
    detail: str = ""

    def to_dict(self) -> dict:
        out = {"name": self.name, "status": self.status, "lhs": jsonable(self.lhs), "rhs": jsonable(self.rhs)}
        if self.detail:
            out["detail"] = self.detail
        return out


def check(name: str, ok: bool, lhs=None, rhs=None, detail: str = "") -> Assertion:
    return Assertion(name, PASS if ok else FAIL, lhs, rhs, detail)


@dataclass
class VerificationReport:
    name: str
    assertions: list[Assertion] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(a.status != FAIL for a in self.assertions)

    def add(self, a: Assertion) -> Assertion:
        self.assertions.append(a)
        return a

    def extend(self, other: "VerificationReport") -> None:
        self.assertions.extend(other.assertions)

    def failures(self) -> list[Assertion]:
        return [a for a in self.assertions if a.status == FAIL]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "data": jsonable(self.data),
            "assertions": [a.to_dict() for a in self.assertions],
        }
