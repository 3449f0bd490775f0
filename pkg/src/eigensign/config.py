"""Pipeline settings and the ``key=value`` config file format."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields, replace

from .segmenter import SkinRange

__all__ = ["PipelineConfig", "load_config", "parse_config", "CONFIG_ENV"]

CONFIG_ENV = "EIGENSIGN_CONFIG"


@dataclass(frozen=True)
class PipelineConfig:
    skin: SkinRange = field(default_factory=SkinRange)
    smooth_radius: int = 2
    crop_side: int = 50
    eigen_count: int = 5
    level1_rule: str = "vote"

    def __post_init__(self):
        if self.smooth_radius < 0:
            raise ValueError("smooth_radius must be >= 0")
        if self.crop_side < 2:
            raise ValueError("crop_side must be >= 2")
        if not 1 <= self.eigen_count <= self.crop_side:
            raise ValueError(f"eigen_count must be in [1, crop_side={self.crop_side}]")
        if self.level1_rule not in ("vote", "first"):
            raise ValueError(f"level1_rule must be 'vote' or 'first', not {self.level1_rule!r}")

    def updated(self, **overrides) -> "PipelineConfig":
        """Copy with the non-None overrides applied.

        Keys ``hue_lo``, ``hue_hi``, ``sat_lo``, ``sat_hi`` adjust the skin range.
        """
        overrides = {k: v for k, v in overrides.items() if v is not None}
        skin_keys = {"hue_lo": "h_lo", "hue_hi": "h_hi", "sat_lo": "s_lo", "sat_hi": "s_hi"}
        skin_changes = {skin_keys[k]: float(overrides.pop(k)) for k in list(overrides) if k in skin_keys}
        unknown = set(overrides) - {f.name for f in fields(self)} - {"skin"}
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
        cfg = replace(self, **overrides)
        if skin_changes:
            cfg = replace(cfg, skin=replace(cfg.skin, **skin_changes))
        return cfg


_TYPES = {
    "hue_lo": float,
    "hue_hi": float,
    "sat_lo": float,
    "sat_hi": float,
    "smooth_radius": int,
    "crop_side": int,
    "eigen_count": int,
    "level1_rule": str,
}


def parse_config(text: str) -> dict:
    """Parse ``key=value`` lines; ``#`` comments and blank lines are skipped.

    Dashes in keys are accepted (``hue-lo`` == ``hue_lo``).
    """
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _TYPES:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        try:
            out[key] = _TYPES[key](value)
        except ValueError:
            raise ValueError(f"config line {lineno}: bad value {value!r} for {key}") from None
    return out


def load_config(path=None) -> dict:
    """Read settings from ``path``, else from $EIGENSIGN_CONFIG, else nothing."""
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
