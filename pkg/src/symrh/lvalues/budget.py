"""Error budgets and containers for completed critical values."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import mpmath


def _up(x) -> mpmath.mpf:
    # every budget component is a small nonnegative float-like quantity; a
    # relative 2^-40 inflation covers the roundings of the additions
    return mpmath.mpf(x) * (1 + mpmath.mpf(2) ** -40)


@dataclass(frozen=True)
class ErrorBudget:
    series_truncation: mpmath.mpf = mpmath.mpf(0)
    quadrature_truncation: mpmath.mpf = mpmath.mpf(0)
    quadrature_discretization: mpmath.mpf = mpmath.mpf(0)
    rounding: mpmath.mpf = mpmath.mpf(0)

    def __post_init__(self):
        for name in ("series_truncation", "quadrature_truncation", "quadrature_discretization", "rounding"):
            v = mpmath.mpf(getattr(self, name))
            if v < 0:
                raise ValueError(f"budget component {name} is negative")
            object.__setattr__(self, name, v)

    @property
    def total(self) -> mpmath.mpf:
        with mpmath.workprec(64):
            return _up(
                _up(self.series_truncation + self.quadrature_truncation)
                + _up(self.quadrature_discretization + self.rounding)
            )

    def __add__(self, other: "ErrorBudget") -> "ErrorBudget":
        with mpmath.workprec(64):
            return ErrorBudget(
                _up(self.series_truncation + other.series_truncation),
                _up(self.quadrature_truncation + other.quadrature_truncation),
                _up(self.quadrature_discretization + other.quadrature_discretization),
                _up(self.rounding + other.rounding),
            )

    def scaled(self, factor) -> "ErrorBudget":
        f = abs(mpmath.mpf(factor))
        with mpmath.workprec(64):
            return ErrorBudget(
                _up(self.series_truncation * f),
                _up(self.quadrature_truncation * f),
                _up(self.quadrature_discretization * f),
                _up(self.rounding * f),
            )

    def as_dict(self) -> dict:
        return {
            "series_truncation": mpmath.nstr(self.series_truncation, 6),
            "quadrature_truncation": mpmath.nstr(self.quadrature_truncation, 6),
            "quadrature_discretization": mpmath.nstr(self.quadrature_discretization, 6),
            "rounding": mpmath.nstr(self.rounding, 6),
            "total": mpmath.nstr(self.total, 6),
        }

    _FIELDS = ("series_truncation", "quadrature_truncation", "quadrature_discretization", "rounding")

    def to_json(self) -> list[str]:
        # 20 digits round-trip the 64-bit components; _up on load covers the decimal step
        return [mpmath.nstr(getattr(self, f), 20) for f in self._FIELDS]

    @classmethod
    def from_json(cls, doc) -> "ErrorBudget":
        with mpmath.workprec(64):
            return cls(*[_up(mpmath.mpf(x)) for x in doc])


STRATEGIES = ("direct", "reflect", "afe")


@dataclass(frozen=True)
class CriticalValue:
    s: int
    value: mpmath.mpf
    budget: ErrorBudget
    strategy: str
    check_value: Optional[mpmath.mpf] = None  # independent evaluation used for the pairing test
    check_budget: Optional[ErrorBudget] = None

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")

    @property
    def error(self) -> mpmath.mpf:
        return self.budget.total


@dataclass(frozen=True)
class CriticalValueSet:
    m: int
    k: int
    level: int
    label: str
    values: tuple  # indexed by n = 0..W-1, entry for s = W - n
    epsilon: int
    precision: int
    target: mpmath.mpf
    meta: dict = field(default_factory=dict)

    @property
    def weight(self) -> int:
        return self.m * (self.k - 1)

    def at(self, s: int) -> CriticalValue:
        W = self.weight
        if not 1 <= s <= W:
            raise IndexError(f"s={s} outside the critical range 1..{W}")
        return self.values[W - s]

    def completed(self, s: int) -> mpmath.mpf:
        return self.at(s).value

    SCHEMA = "symrh.critical-values/1"

    def to_json(self, digits: int) -> dict:
        def num(x):
            return None if x is None else mpmath.nstr(x, digits, min_fixed=-1, max_fixed=-1)

        return {
            "schema": self.SCHEMA,
            "m": self.m, "k": self.k, "level": self.level, "label": self.label,
            "epsilon": self.epsilon, "precision": self.precision, "digits": digits,
            "target": mpmath.nstr(self.target, 20),
            "meta": dict(self.meta),
            "values": [
                {
                    "s": v.s, "value": num(v.value), "budget": v.budget.to_json(), "strategy": v.strategy,
                    "check_value": num(v.check_value),
                    "check_budget": None if v.check_budget is None else v.check_budget.to_json(),
                }
                for v in self.values
            ],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "CriticalValueSet":
        """Inverse of ``to_json``; the decimal rounding is added to each rounding budget."""
        if doc.get("schema") != cls.SCHEMA:
            raise ValueError("not a critical-value document")
        digits = int(doc["digits"])
        prec = int(doc["precision"])
        W = int(doc["m"]) * (int(doc["k"]) - 1)
        if len(doc["values"]) != W:
            raise ValueError(f"expected {W} values, found {len(doc['values'])}")
        vals = []
        with mpmath.workprec(prec + 32):
            ulp = mpmath.mpf(10) ** (1 - digits)
            for n, e in enumerate(doc["values"]):
                if int(e["s"]) != W - n:
                    raise ValueError("critical values out of order")
                v = mpmath.mpf(e["value"])
                b = ErrorBudget.from_json(e["budget"]) + ErrorBudget(rounding=abs(v) * ulp)
                cv = cb = None
                if e.get("check_value") is not None:
                    cv = mpmath.mpf(e["check_value"])
                    cb = ErrorBudget.from_json(e["check_budget"]) + ErrorBudget(rounding=abs(cv) * ulp)
                vals.append(CriticalValue(W - n, v, b, e["strategy"], cv, cb))
        return cls(
            int(doc["m"]), int(doc["k"]), int(doc["level"]), doc["label"], tuple(vals),
            int(doc["epsilon"]), prec, mpmath.mpf(doc["target"]), dict(doc.get("meta", {})),
        )

    def pairing_residuals(self) -> list[tuple[int, mpmath.mpf, mpmath.mpf]]:
        """``(s, |v(s) - eps v(W+1-s)|, allowed)`` over pairs with an independent low-side value."""
        W = self.weight
        out = []
        with mpmath.workprec(self.precision + 32):
            for s in range(1, W + 1):
                sp = W + 1 - s
                if sp < s:
                    continue
                low, high = self.at(s), self.at(sp)
                v_low = low.check_value if low.check_value is not None else low.value
                b_low = low.check_budget if low.check_budget is not None else low.budget
                res = abs(v_low - self.epsilon * high.value)
                out.append((s, res, b_low.total + high.budget.total))
        return out
