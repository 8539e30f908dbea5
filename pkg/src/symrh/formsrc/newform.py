"""Newform containers: built-in level-1 eigenforms and the JSON coefficient files."""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

import mpmath

from .quadratic import QuadraticElement
from .series import IntegerSeries, eisenstein_series

Coefficient = Union[int, QuadraticElement]


class FormDataError(ValueError):
    """Base class for rejected newform input."""


class MalformedFileError(FormDataError):
    pass


class NotNormalizedError(FormDataError):
    pass


class LevelNotSquarefreeError(FormDataError):
    pass


class OddWeightError(FormDataError):
    pass


def factorize(n: int) -> dict[int, int]:
    """Trial division; fine for levels and for indices up to a few million."""
    if n < 1:
        raise ValueError("factorize needs a positive integer")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_squarefree(n: int) -> bool:
    return all(e == 1 for e in factorize(n).values())


@dataclass(frozen=True)
class NewformData:
    level: int
    weight: int
    label: str
    coeffs: tuple  # a(1), a(2), ... ; ints, or QuadraticElement over Q(sqrt field_sqrt)
    epsilon_hint_m1: Optional[int] = None
    source: str = "builtin"
    field_sqrt: Optional[int] = None
    embedding: int = 1

    def __post_init__(self):
        if self.level < 1:
            raise FormDataError("level must be positive")
        if not is_squarefree(self.level):
            raise LevelNotSquarefreeError(f"level {self.level} not squarefree")
        if self.weight < 2 or self.weight % 2:
            raise OddWeightError(f"weight {self.weight} must be even (trivial character)")
        if self.source not in ("builtin", "file"):
            raise FormDataError(f"unknown source {self.source!r}")
        if not self.coeffs:
            raise FormDataError("no coefficients")
        if self.coeffs[0] != 1:
            raise NotNormalizedError("not normalized: a(1) must be 1")
        if self.epsilon_hint_m1 not in (None, 1, -1):
            raise FormDataError("epsilon hint must be +1 or -1")
        if self.embedding not in (1, -1):
            raise FormDataError("embedding must be +1 or -1")
        for c in self.coeffs:
            if isinstance(c, QuadraticElement):
                if self.field_sqrt is None or c.D != self.field_sqrt:
                    raise FormDataError("quadratic coefficient outside the declared field")
            elif not isinstance(c, int):
                raise FormDataError(f"coefficient {c!r} is not exact")

    @property
    def coeff_cutoff(self) -> int:
        return len(self.coeffs)

    @property
    def is_rational(self) -> bool:
        return self.field_sqrt is None

    def a(self, n: int) -> Coefficient:
        if not 1 <= n <= len(self.coeffs):
            raise IndexError(f"a({n}) outside stored range 1..{len(self.coeffs)}")
        return self.coeffs[n - 1]

    def a_real(self, n: int):
        """``a(n)`` as an mpmath real under the chosen embedding."""
        c = self.a(n)
        if isinstance(c, QuadraticElement):
            return c.embed(self.embedding)
        return mpmath.mpf(c)

    def sign_of(self, value: Coefficient) -> int:
        if isinstance(value, QuadraticElement):
            return value.sign(self.embedding)
        return (value > 0) - (value < 0)

    def truncated(self, cutoff: int) -> "NewformData":
        if cutoff > self.coeff_cutoff:
            raise ValueError(f"need {cutoff} coefficients, only {self.coeff_cutoff} stored")
        return NewformData(
            self.level, self.weight, self.label, self.coeffs[:cutoff], self.epsilon_hint_m1,
            self.source, self.field_sqrt, self.embedding,
        )


# ------------------------------------------------------------------ built-ins

# Level-1 weights with a one-dimensional cusp space: Delta * E4^a * E6^b.
_BUILTIN_EXPONENTS = {12: (0, 0), 16: (1, 0), 18: (0, 1), 20: (2, 0), 22: (1, 1), 26: (2, 1)}
BUILTIN_WEIGHTS = tuple(sorted(_BUILTIN_EXPONENTS))


def delta_series(cutoff: int) -> IntegerSeries:
    e4 = eisenstein_series(4, cutoff)
    e6 = eisenstein_series(6, cutoff)
    return (e4**3 - e6 * e6).exact_div(1728)


def builtin_newform(weight: int, cutoff: int) -> NewformData:
    """The unique normalised eigenform of level 1 and weight in :data:`BUILTIN_WEIGHTS`."""
    if weight not in _BUILTIN_EXPONENTS:
        raise ValueError(
            f"weight {weight} is not a one-dimensional level-1 cusp space; supported: {BUILTIN_WEIGHTS}"
        )
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    a, b = _BUILTIN_EXPONENTS[weight]
    f = delta_series(cutoff)
    if a:
        f = f * eisenstein_series(4, cutoff) ** a
    if b:
        f = f * eisenstein_series(6, cutoff) ** b
    coeffs = f.coeffs[1 : cutoff + 1]
    if coeffs[0] != 1:
        raise ArithmeticError("built-in eigenform is not normalised")
    # the sign of the level-1 functional equation is i^k
    return NewformData(1, weight, f"1.{weight}.a.a", tuple(coeffs), (-1) ** (weight // 2), "builtin")


# ---------------------------------------------------------------- file format


def _parse_int(text, idx: int) -> int:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise MalformedFileError(f"coefficient {idx + 1} is not a decimal string")
    try:
        return int(text)
    except ValueError as exc:
        raise MalformedFileError(f"coefficient {idx + 1} is not a decimal integer: {text!r}") from exc


def newform_from_dict(doc: dict, source: str = "file") -> NewformData:
    if not isinstance(doc, dict):
        raise MalformedFileError("top level must be a JSON object")
    for key in ("level", "weight", "coefficients"):
        if key not in doc:
            raise MalformedFileError(f"missing field {key!r}")
    level, weight = doc["level"], doc["weight"]
    if not isinstance(level, int) or not isinstance(weight, int):
        raise MalformedFileError("level and weight must be integers")
    raw = doc["coefficients"]
    if not isinstance(raw, list) or not raw:
        raise MalformedFileError("coefficients must be a nonempty list")
    field = doc.get("field")
    D = None
    if field is not None:
        if not isinstance(field, dict) or not isinstance(field.get("sqrt"), int):
            raise MalformedFileError("field must look like {\"sqrt\": D}")
        D = field["sqrt"]
    coeffs: list[Coefficient] = []
    for i, c in enumerate(raw):
        if D is not None and isinstance(c, list):
            try:
                q = QuadraticElement.from_json(c, D)
            except (ValueError, ZeroDivisionError) as exc:
                raise MalformedFileError(f"coefficient {i + 1}: {exc}") from exc
            coeffs.append(q)
        elif D is not None:
            coeffs.append(QuadraticElement(Fraction(_parse_int(c, i)), Fraction(0), D))
        else:
            coeffs.append(_parse_int(c, i))
    eps = doc.get("epsilon_m1")
    if eps is not None and eps not in (1, -1):
        raise MalformedFileError("epsilon_m1 must be +1 or -1")
    if weight % 2:
        raise OddWeightError(f"weight {weight} is odd")
    if level < 1 or not is_squarefree(level):
        raise LevelNotSquarefreeError(f"level {level} not squarefree")
    if coeffs[0] != 1:
        raise NotNormalizedError("not normalized: a(1) must be 1")
    return NewformData(
        level, weight, str(doc.get("label", f"{level}.{weight}.?")), tuple(coeffs), eps, source,
        D, int(doc.get("embedding", 1)),
    )


def newform_to_dict(fm: NewformData) -> dict:
    doc = {"level": fm.level, "weight": fm.weight, "label": fm.label}
    if fm.field_sqrt is not None:
        doc["field"] = {"sqrt": fm.field_sqrt}
        doc["embedding"] = fm.embedding
        doc["coefficients"] = [
            c.to_json() if isinstance(c, QuadraticElement) else [str(c), "0"] for c in fm.coeffs
        ]
    else:
        doc["coefficients"] = [str(c) for c in fm.coeffs]
    if fm.epsilon_hint_m1 is not None:
        doc["epsilon_m1"] = fm.epsilon_hint_m1
    return doc


def load_newform(path: Union[str, Path]) -> NewformData:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedFileError(f"{path}: not valid JSON ({exc})") from exc
    return newform_from_dict(doc, "file")


def atomic_write_text(path: Union[str, Path], text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_newform(fm: NewformData, path: Union[str, Path]) -> None:
    atomic_write_text(path, json.dumps(newform_to_dict(fm)) + "\n")

