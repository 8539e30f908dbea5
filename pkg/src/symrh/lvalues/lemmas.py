"""Numerical checks of the two L-value estimates used in the Rouché arguments."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import mpmath

from ..symcoef import SymPowerCoefficients
from .afe import lseries_direct


# series accuracy relative to the bound under test: decisive unless |L - 1| sits
# within 2^-20 of the bound, and affordable from stored coefficients
LEMMA_TARGET_REL = mpmath.ldexp(1, -20)


def lemma_target(m: int, k: int) -> mpmath.mpf:
    return lemma_bound(m, k) * LEMMA_TARGET_REL


def default_lemma_points(m: int, k: int) -> list[int]:
    """``lo, lo+1, lo+3`` and the top critical point, kept inside ``[lo, m(k-1)]``."""
    lo = -(-(m + 1) * (k - 1) // 2)
    W = m * (k - 1)
    return sorted({s for s in (lo, lo + 1, lo + 3, W) if lo <= s <= W})


def lemma_cutoff(m: int, k: int, sample_points: Optional[Sequence[int]] = None, target=None,
                 cap: int = 200_000) -> int:
    """Coefficients needed by :func:`check_lemma_bounds` at these points."""
    from .afe import _direct_cutoff

    pts = list(sample_points) if sample_points is not None else default_lemma_points(m, k)
    if k < 6:
        return 1  # the check is skipped, nothing to sum
    target = lemma_target(m, k) if target is None else target
    need = 1
    for s in pts:
        sigma = s - m * (k - 1) / 2
        if 2 * s < (m + 1) * (k - 1) or sigma < 1.25:
            continue
        X = _direct_cutoff(m, sigma, mpmath.mpf(target) * mpmath.mpf("0.9"), cap)
        if X is None:
            raise ValueError(f"s={s}: direct series needs more than {cap} terms")
        need = max(need, X)
    return need


def lemma_bound(m: int, k: int) -> mpmath.mpf:
    """``(13/9) 2^{m - (k-1)/2}``."""
    return mpmath.mpf(13) / 9 * mpmath.mpf(2) ** (m - mpmath.mpf(k - 1) / 2)


@dataclass(frozen=True)
class LemmaEntry:
    s: int
    value: Optional[mpmath.mpf]
    deviation: Optional[mpmath.mpf]  # |L(s) - 1| + error bound
    bound: Optional[mpmath.mpf]
    passed: Optional[bool]  # None when the check was skipped
    log_ratio: Optional[mpmath.mpf]  # L(s) / log(...)^(m+1), reported only
    note: str = ""


@dataclass(frozen=True)
class LemmaReport:
    label: str
    m: int
    k: int
    entries: tuple = field(default_factory=tuple)
    skipped: Optional[str] = None

    @property
    def violations(self) -> list[LemmaEntry]:
        return [e for e in self.entries if e.passed is False]

    @property
    def ok(self) -> bool:
        return not self.violations


def check_lemma_bounds(
    coeffs: SymPowerCoefficients,
    fm,
    m: int,
    sample_points: Optional[Sequence[int]] = None,
    precision: int = 96,
    target=None,
) -> LemmaReport:
    """``|L(s) - 1| < (13/9) 2^{m-(k-1)/2}`` for ``s >= (m+1)(k-1)/2`` (only when ``k >= 6``).

    The size ratio ``L(s) / log(N(k-1)^m)^{m+1}`` is recorded alongside; its
    implicit constant is not known, so it is never asserted.
    """
    k, N = fm.weight, fm.level
    if coeffs.m != m:
        raise ValueError("coefficients were computed for another m")
    pts = list(sample_points) if sample_points is not None else default_lemma_points(m, k)
    skipped = None if k >= 6 else "hypothesis k >= 6 unmet"
    bound = lemma_bound(m, k)
    target = lemma_target(m, k) if target is None else target
    entries = []
    with mpmath.workprec(precision):
        denom = mpmath.log(N * mpmath.mpf(k - 1) ** m) ** (m + 1)
        for s in pts:
            if 2 * s < (m + 1) * (k - 1):
                entries.append(LemmaEntry(s, None, None, bound, None, None, "s below the lemma range"))
                continue
            if skipped:
                entries.append(LemmaEntry(s, None, None, None, None, None, skipped))
                continue
            val, b = lseries_direct(coeffs, s, target, precision)
            ratio = val / denom if denom > 0 else None
            dev = abs(val - 1) + b.total
            entries.append(LemmaEntry(s, val, dev, bound, bool(dev < bound), ratio))
    return LemmaReport(fm.label, m, k, tuple(entries), skipped)
