"""Certificate record for zero-location checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import mpmath

DISK_VERDICTS = ("all-inside", "not-all-inside", "indeterminate")
CIRCLE_VERDICTS = ("certified", "numeric-only", "failed")


def _s(x, digits):
    return mpmath.nstr(x, digits, min_fixed=-1, max_fixed=-1)


@dataclass
class ZeroCertificate:
    name: str
    params: dict
    degree: int
    roots: tuple = ()
    residuals: tuple = ()
    radii: tuple = ()
    max_circle_deviation: Optional[mpmath.mpf] = None
    sign_changes: Optional[int] = None
    grid_points: Optional[int] = None
    circle_verdict: Optional[str] = None
    disk_verdict: Optional[str] = None
    disk_method: Optional[str] = None
    rouche: Optional[dict] = None
    notes: list = field(default_factory=list)

    def __post_init__(self):
        if self.roots and len(self.roots) != self.degree:
            raise ValueError(f"{len(self.roots)} roots for degree {self.degree}")
        if self.circle_verdict is not None and self.circle_verdict not in CIRCLE_VERDICTS:
            raise ValueError(f"bad circle verdict {self.circle_verdict!r}")
        if self.circle_verdict == "certified" and self.sign_changes != self.degree:
            raise ValueError("certified circle verdict needs sign-change count = degree")
        if self.disk_verdict is not None and self.disk_verdict not in DISK_VERDICTS:
            raise ValueError(f"bad disk verdict {self.disk_verdict!r}")

    @property
    def max_radius(self):
        if not self.radii or any(r is None for r in self.radii):
            return None
        return max(self.radii)

    def to_json(self, digits: int = 30) -> dict:
        out = {
            "poly": self.name,
            "params": self.params,
            "degree": self.degree,
            "roots": [[_s(z.real, digits), _s(z.imag, digits)] for z in self.roots],
            "residuals": [_s(r, 6) for r in self.residuals],
            "radii": [None if r is None else _s(r, 6) for r in self.radii],
            "max_circle_deviation": None if self.max_circle_deviation is None else _s(self.max_circle_deviation, 6),
            "sign_changes": self.sign_changes,
            "grid_points": self.grid_points,
            "verdicts": {"circle": self.circle_verdict, "disk": self.disk_verdict, "disk_method": self.disk_method},
        }
        if self.rouche is not None:
            out["rouche_margin"] = self.rouche
        if self.notes:
            out["notes"] = list(self.notes)
        return out
