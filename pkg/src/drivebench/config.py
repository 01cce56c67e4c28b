"""Engine configuration: one frozen object holding every tunable default,
plus a parser for plain ``key = value`` override files."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path

from .consistency import ConsistencyConfig
from .flicker import MmpConfig
from .frechet import FtdConfig
from .kinematics import QualityConfig


@dataclass(frozen=True)
class EngineConfig:
    """Every tunable the engine honours, with its published default."""

    ftd: FtdConfig = field(default_factory=FtdConfig)
    quality: QualityConfig = field(default_factory=QualityConfig)
    mmp: MmpConfig = field(default_factory=MmpConfig)
    consistency: ConsistencyConfig = field(default_factory=ConsistencyConfig)
    fvd_epsilon: float = 1e-6
    jitter_deg: float = 0.5

    def __post_init__(self):
        if not (self.fvd_epsilon > 0 and math.isfinite(self.fvd_epsilon)):
            raise ValueError("fvd_epsilon must be positive and finite")
        if not (self.jitter_deg >= 0 and math.isfinite(self.jitter_deg)):
            raise ValueError("jitter_deg must be non-negative and finite")

    def snapshot(self) -> dict:
        """Flat, JSON-ready view of every effective parameter."""
        return {
            "horizon": self.ftd.horizon,
            "stride": self.ftd.effective_stride,
            "ftd_epsilon": self.ftd.epsilon,
            "shrinkage_lambda": self.ftd.shrinkage_lambda,
            "fvd_epsilon": self.fvd_epsilon,
            "v_static": self.quality.v_static,
            "v_ref": self.quality.v_ref,
            "k": self.quality.k,
            "s_jerk": self.quality.s_jerk,
            "s_lat": self.quality.s_lat,
            "s_yaw": self.quality.s_yaw,
            "min_path": self.quality.min_path,
            "band_hz": self.mmp.band_hz,
            "thr": self.mmp.thr,
            "low_cut_hz": self.mmp.low_cut_hz,
            "mmp_epsilon": self.mmp.epsilon,
            "rate": self.mmp.rate,
            "target_flow": self.consistency.target_flow,
            "max_stride": self.consistency.max_stride,
            "blend_first": self.consistency.blend_first,
            "jitter_deg": self.jitter_deg,
        }


_INT_KEYS = {"horizon", "stride", "max_stride"}

_KEY_HOMES = {
    "horizon": ("ftd", "horizon"),
    "h": ("ftd", "horizon"),
    "stride": ("ftd", "stride"),
    "ftd_epsilon": ("ftd", "epsilon"),
    "shrinkage_lambda": ("ftd", "shrinkage_lambda"),
    "fvd_epsilon": (None, "fvd_epsilon"),
    "v_static": ("quality", "v_static"),
    "v_ref": ("quality", "v_ref"),
    "k": ("quality", "k"),
    "s_jerk": ("quality", "s_jerk"),
    "s_lat": ("quality", "s_lat"),
    "s_yaw": ("quality", "s_yaw"),
    "min_path": ("quality", "min_path"),
    "band_hz": ("mmp", "band_hz"),
    "thr": ("mmp", "thr"),
    "low_cut_hz": ("mmp", "low_cut_hz"),
    "mmp_epsilon": ("mmp", "epsilon"),
    "rate": ("mmp", "rate"),
    "fps": ("mmp", "rate"),
    "target_flow": ("consistency", "target_flow"),
    "max_stride": ("consistency", "max_stride"),
    "blend_first": ("consistency", "blend_first"),
    "jitter_deg": (None, "jitter_deg"),
}


def parse_overrides(text: str) -> dict[str, float | int]:
    """Parse ``key = value`` lines; '#' starts a comment, blanks ignored."""
    overrides: dict[str, float | int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().lower()
        if key not in _KEY_HOMES:
            raise ValueError(f"line {lineno}: unknown configuration key {key.strip()!r}")
        canonical = "horizon" if key == "h" else key
        try:
            parsed = int(value) if canonical in _INT_KEYS else float(value)
        except ValueError as exc:
            raise ValueError(f"line {lineno}: bad value for {key!r}: {value.strip()!r}") from exc
        overrides[key] = parsed
    return overrides


def apply_overrides(config: EngineConfig, overrides: dict[str, float | int]) -> EngineConfig:
    """Return a new EngineConfig with the given keys replaced."""
    grouped: dict[str | None, dict[str, float | int]] = {}
    for key, value in overrides.items():
        section, attr = _KEY_HOMES[key]
        grouped.setdefault(section, {})[attr] = value
    parts = {}
    for section in ("ftd", "quality", "mmp", "consistency"):
        current = getattr(config, section)
        changes = grouped.get(section)
        parts[section] = dataclasses.replace(current, **changes) if changes else current
    top = grouped.get(None, {})
    return EngineConfig(**parts, **{**{"fvd_epsilon": config.fvd_epsilon, "jitter_deg": config.jitter_deg}, **top})


def load_config(path: Path | str | None) -> EngineConfig:
    """EngineConfig from an override file, or pure defaults when ``path``
    is None."""
    config = EngineConfig()
    if path is None:
        return config
    text = Path(path).read_text(encoding="utf-8")
    return apply_overrides(config, parse_overrides(text))
