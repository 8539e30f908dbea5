"""Coefficient files shipped with the package (see scripts/make_forms.py)."""

from __future__ import annotations

from importlib import resources
from pathlib import Path


def forms_dir() -> Path:
    return Path(str(resources.files(__package__) / "forms"))


def shipped_form_paths() -> dict[str, Path]:
    return {p.stem: p for p in sorted(forms_dir().glob("*.json"))}
