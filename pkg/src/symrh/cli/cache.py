"""On-disk caches for coefficient tables and critical values.

One file per key, written through a temporary file and an atomic rename;
anything that fails schema validation on load is treated as a miss.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Optional

import mpmath

from ..formsrc.newform import atomic_write_text
from ..lvalues import CriticalValueSet
from ..symcoef import SymPowerCoefficients
from .config import digits_for

log = logging.getLogger("symrh.cache")

COEFF_SCHEMA = "symrh.coeffs/1"


def _safe(label: str) -> str:
    return "".join(c if c.isalnum() or c in ".-_" else "_" for c in label)


def coeff_path(cache_dir: Path, label: str, m: int, precision: int) -> Path:
    return Path(cache_dir) / "coeffs" / f"{_safe(label)}.m{m}.p{precision}.json"


def lvalues_path(cache_dir: Path, label: str, m: int, precision: int, target) -> Path:
    tag = "default" if target is None else mpmath.nstr(mpmath.mpf(target), 6).replace(".", "p")
    return Path(cache_dir) / "lvalues" / f"{_safe(label)}.m{m}.p{precision}.t{tag}.json"


def coeffs_to_json(c: SymPowerCoefficients) -> dict:
    digits = digits_for(c.precision + 8)
    with mpmath.workprec(c.precision):
        lam = [mpmath.nstr(v, digits, min_fixed=-1, max_fixed=-1) for v in c.lam[1:]]
    return {
        "schema": COEFF_SCHEMA,
        "m": c.m, "k": c.k, "level": c.level, "label": c.label,
        "cutoff": c.cutoff, "precision": c.precision, "digits": digits,
        "max_imag": mpmath.nstr(c.max_imag, 10),
        "lam": lam,
    }


def coeffs_from_json(doc: dict) -> SymPowerCoefficients:
    if doc.get("schema") != COEFF_SCHEMA:
        raise ValueError("wrong schema")
    cutoff, prec = int(doc["cutoff"]), int(doc["precision"])
    if len(doc["lam"]) != cutoff:
        raise ValueError(f"{len(doc['lam'])} coefficients for cutoff {cutoff}")
    with mpmath.workprec(prec):
        lam = (mpmath.mpf(0),) + tuple(mpmath.mpf(x) for x in doc["lam"])
    return SymPowerCoefficients(
        int(doc["m"]), int(doc["k"]), int(doc["level"]), doc["label"], lam, cutoff, prec, mpmath.mpf(doc["max_imag"])
    )


def _read(path: Path) -> Optional[dict]:
    try:
        return json.loads(path.read_text())
    except FileNotFoundError:
        return None
    except (OSError, json.JSONDecodeError) as exc:
        log.warning("corrupt cache file %s (%s); recomputing", path, exc)
        return None


def load_coeffs(path: Path, need: int, precision: int) -> tuple[Optional[SymPowerCoefficients], str]:
    """``(coefficients or None, status)`` with status hit | miss | short | corrupt."""
    doc = _read(path)
    if doc is None:
        return None, ("corrupt" if path.exists() else "miss")
    try:
        c = coeffs_from_json(doc)
    except (KeyError, ValueError, TypeError) as exc:
        log.warning("invalid cache file %s (%s); recomputing", path, exc)
        return None, "corrupt"
    if c.cutoff < need or c.precision < precision:
        return None, "short"
    return (c.truncated(need) if c.cutoff > need else c), "hit"


def store_coeffs(path: Path, c: SymPowerCoefficients) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    atomic_write_text(path, json.dumps(coeffs_to_json(c)))


def load_lvalues(path: Path) -> tuple[Optional[CriticalValueSet], str]:
    doc = _read(path)
    if doc is None:
        return None, ("corrupt" if path.exists() else "miss")
    try:
        return CriticalValueSet.from_json(doc), "hit"
    except (KeyError, ValueError, TypeError) as exc:
        log.warning("invalid cache file %s (%s); recomputing", path, exc)
        return None, "corrupt"


def store_lvalues(path: Path, cvs: CriticalValueSet) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    atomic_write_text(path, json.dumps(cvs.to_json(digits_for(cvs.precision + 8))))
