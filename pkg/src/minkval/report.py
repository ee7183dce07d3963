"""Verification records and their deterministic JSON form."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .kernel import Tolerance, format_scalar, is_exact, to_float

GEQ = ">="
EQ = "="


def _both_exact(a, b) -> bool:
    return is_exact(a) and is_exact(b)


@dataclass
class InequalityCase:
    """One instance ``lhs relation rhs``; ``slack = lhs - rhs`` is kept on pass too."""

    name: str
    lhs: Any
    rhs: Any
    relation: str
    tol: float = 1e-9
    relative: bool = True
    witnesses: dict = field(default_factory=dict)

    @property
    def slack(self):
        return self.lhs - self.rhs

    @property
    def scale(self) -> float:
        if not self.relative:
            return 1.0
        return max(1.0, abs(to_float(self.lhs)), abs(to_float(self.rhs)))

    @property
    def relative_slack(self) -> float:
        return to_float(self.slack) / max(abs(to_float(self.lhs)), abs(to_float(self.rhs)), 1e-300)

    @property
    def passed(self) -> bool:
        s = self.slack
        if self.relation == EQ:
            if _both_exact(self.lhs, self.rhs):
                return s == 0
            return abs(to_float(s)) <= self.tol * self.scale
        if self.relation == GEQ:
            if _both_exact(self.lhs, self.rhs):
                return s >= 0
            return to_float(s) >= -self.tol * self.scale
        raise ValueError(f"unknown relation {self.relation!r}")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": _jsonable(self.lhs),
            "rhs": _jsonable(self.rhs),
            "relation": self.relation,
            "slack": _jsonable(self.slack),
            "pass": self.passed,
            "witnesses": _jsonable(self.witnesses),
        }


@dataclass
class VerificationReport:
    suite: str
    config: dict
    cases: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    @property
    def failures(self) -> list:
        return [c for c in self.cases if not c.passed]

    def add(self, case: InequalityCase) -> InequalityCase:
        self.cases.append(case)
        return case

    def extend(self, other: "VerificationReport", prefix: str = "") -> None:
        for c in other.cases:
            if prefix:
                c.name = f"{prefix}{c.name}"
            self.cases.append(c)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "config": _jsonable(self.config),
            "cases": [c.to_dict() for c in self.cases],
            "info": _jsonable(self.info),
            "pass": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def to_text(self) -> str:
        lines = [f"suite {self.suite}: {'PASS' if self.passed else 'FAIL'}"]
        for key in sorted(self.config):
            lines.append(f"  {key} = {_jsonable(self.config[key])}")
        for c in self.cases:
            flag = "ok  " if c.passed else "FAIL"
            lines.append(f"  {flag} {c.name}: {_short(c.lhs)} {c.relation} {_short(c.rhs)}"
                         f"  slack {_short(c.slack)}")
        return "\n".join(lines)


def _short(x) -> str:
    if isinstance(x, Fraction) and x.denominator != 1 and len(str(x)) > 24:
        return f"{float(x):.12g}"
    return format_scalar(x) if isinstance(x, (int, float, Fraction)) else str(x)


def _jsonable(x):
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, float):
        return x if math.isfinite(x) else str(x)
    if isinstance(x, Fraction):
        return format_scalar(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "item"):  # numpy scalar
        return _jsonable(x.item())
    return str(x)


def tolerance_for(tol: float) -> Tolerance:
    return Tolerance(tol)
