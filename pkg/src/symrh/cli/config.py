"""Experiment configuration (JSON) and the instance grid it spans."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

from ..perpoly import H_VARIANTS


class ConfigError(ValueError):
    pass


def digits_for(bits: int) -> int:
    """Decimal digits used for every serialized number at ``bits`` of precision."""
    return math.ceil(bits * 0.302)


@dataclass
class ExperimentConfig:
    builtin_weights: list = field(default_factory=list)
    form_files: list = field(default_factory=list)
    m: list = field(default_factory=lambda: [1])
    precision: int = 128
    target: Optional[float] = None  # relative; None means 2^-(precision-24)
    rouche_samples: int = 64
    sign_grid: Optional[int] = None  # first grid size, doubled up to sign_grid_cap
    sign_grid_cap: int = 2**20
    cache_dir: str = "cache"
    out_dir: str = "out"
    formats: list = field(default_factory=lambda: ["json", "csv"])
    h_grid: Optional[dict] = None  # {"m": [...], "k": [...], "N": [...]} for form-free H checks
    h_variant: str = "printed"
    lemma_points: Optional[list] = None
    base_dir: str = "."

    def __post_init__(self):
        self.validate()

    def validate(self):
        if not isinstance(self.precision, int) or self.precision < 64:
            raise ConfigError("precision must be an integer >= 64")
        if not self.m or any(not isinstance(x, int) or x < 1 for x in self.m):
            raise ConfigError("m must be a nonempty list of integers >= 1")
        if any(not isinstance(w, int) for w in self.builtin_weights):
            raise ConfigError("builtin_weights must be integers")
        if self.rouche_samples < 64:
            raise ConfigError("rouche_samples must be >= 64")
        if self.sign_grid is not None and self.sign_grid < 8:
            raise ConfigError("sign_grid must be >= 8")
        if self.target is not None and not (0 < self.target < 1):
            raise ConfigError("target must lie in (0, 1)")
        bad = set(self.formats) - {"json", "csv"}
        if bad:
            raise ConfigError(f"unknown report formats {sorted(bad)}")
        if self.h_variant not in H_VARIANTS:
            raise ConfigError(f"h_variant must be one of {H_VARIANTS}")
        if self.h_grid is not None:
            for key in ("m", "k", "N"):
                vals = self.h_grid.get(key)
                if not vals or any(not isinstance(v, int) or v < 1 for v in vals):
                    raise ConfigError(f"h_grid.{key} must be a nonempty list of positive integers")
        if not (self.builtin_weights or self.form_files or self.h_grid):
            raise ConfigError("the grid is empty: give builtin_weights, form_files or h_grid")

    @classmethod
    def from_dict(cls, doc: dict, base_dir: str = ".") -> "ExperimentConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
        known = {f for f in cls.__dataclass_fields__ if f != "base_dir"}
        extra = set(doc) - known
        if extra:
            raise ConfigError(f"unknown config keys {sorted(extra)}")
        try:
            return cls(**doc, base_dir=base_dir)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        path = Path(path)
        try:
            doc = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        return cls.from_dict(doc, str(path.parent.resolve()))

    def resolve(self, p: str) -> Path:
        q = Path(p)
        return q if q.is_absolute() else Path(self.base_dir) / q

    @property
    def cache_path(self) -> Path:
        return self.resolve(self.cache_dir)

    @property
    def out_path(self) -> Path:
        return self.resolve(self.out_dir)

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("base_dir")
        return d

    def instances(self) -> list[dict]:
        """Form instances (every form x every m) followed by form-free H instances."""
        out = []
        for w in self.builtin_weights:
            for m in self.m:
                out.append({"kind": "form", "form": f"builtin:{w}", "m": m})
        for f in self.form_files:
            for m in self.m:
                out.append({"kind": "form", "form": f"file:{f}", "m": m})
        if self.h_grid:
            for m in self.h_grid["m"]:
                for k in self.h_grid["k"]:
                    for N in self.h_grid["N"]:
                        out.append({"kind": "h", "m": m, "k": k, "N": N})
        for i, inst in enumerate(out):
            inst["id"] = instance_id(inst)
            inst["index"] = i
        return out


def instance_id(inst: dict) -> str:
    if inst["kind"] == "h":
        return f"H.m{inst['m']}.k{inst['k']}.N{inst['N']}"
    src = inst["form"].split(":", 1)[1]
    return f"{Path(src).stem if inst['form'].startswith('file:') else 'w' + src}.m{inst['m']}"
