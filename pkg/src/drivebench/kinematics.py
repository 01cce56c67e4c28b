"""Kinematic profiling and rider-comfort style trajectory scores.

Derivatives use centred finite differences in the interior and one-sided
differences at the ends, so every derived signal keeps the trajectory's
length.  Scores map physical quantities through bounded squashing
functions and combine by geometric mean.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import Trajectory


@dataclass(frozen=True)
class QualityConfig:
    """Thresholds and scales for trajectory quality scoring."""

    v_static: float = 0.1
    v_ref: float = 6.0
    k: float = 2.5
    s_jerk: float = 1.0
    s_lat: float = 1.0
    s_yaw: float = 1.0
    min_path: float = 1.0

    def __post_init__(self):
        for name in ("v_static", "v_ref", "k", "s_jerk", "s_lat", "s_yaw", "min_path"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be positive and finite")


@dataclass(frozen=True)
class KinematicProfile:
    """Derived motion signals of a trajectory, all full-length arrays.

    ``curvature`` is NaN wherever speed falls below the static threshold;
    every other signal is finite everywhere.
    """

    velocity: np.ndarray
    speed: np.ndarray
    acceleration: np.ndarray
    jerk: np.ndarray
    heading: np.ndarray
    yaw_rate: np.ndarray
    curvature: np.ndarray
    path_length: float


def _derivative(values: np.ndarray, dt: float) -> np.ndarray:
    """Centred differences inside, one-sided at the ends; keeps length."""
    out = np.empty_like(values, dtype=float)
    out[1:-1] = (values[2:] - values[:-2]) / (2.0 * dt)
    out[0] = (values[1] - values[0]) / dt
    out[-1] = (values[-1] - values[-2]) / dt
    return out


def wrap_angle(angle):
    """Wrap angles into (-pi, pi].

    Values already inside the interval pass through bit-for-bit, so
    wrapping is idempotent and never perturbs stored headings.
    """
    arr = np.asarray(angle, dtype=float)
    scalar = arr.ndim == 0
    arr = np.array(np.atleast_1d(arr), dtype=float)
    outside = (arr > np.pi) | (arr <= -np.pi)
    if np.any(outside):
        wrapped = np.mod(arr[outside] + np.pi, 2.0 * np.pi) - np.pi
        wrapped[wrapped <= -np.pi] += 2.0 * np.pi
        arr[outside] = wrapped
    return float(arr[0]) if scalar else arr


def _angle_derivative(heading: np.ndarray, dt: float) -> np.ndarray:
    """Like :func:`_derivative` but differences are wrapped into (-pi, pi]."""
    out = np.empty_like(heading, dtype=float)
    out[1:-1] = wrap_angle(heading[2:] - heading[:-2]) / (2.0 * dt)
    out[0] = wrap_angle(heading[1] - heading[0]) / dt
    out[-1] = wrap_angle(heading[-1] - heading[-2]) / dt
    return out


def profile(trajectory: Trajectory, v_static: float = 0.1) -> KinematicProfile:
    """Differentiate a trajectory into velocity, accel, jerk, heading,
    yaw rate and curvature."""
    if len(trajectory) < 5:
        raise ValueError(f"kinematic profile needs at least 5 points, got {len(trajectory)}")
    dt = trajectory.dt
    velocity = _derivative(trajectory.xy, dt)
    speed = np.hypot(velocity[:, 0], velocity[:, 1])
    acceleration = _derivative(velocity, dt)
    jerk = _derivative(acceleration, dt)
    heading = np.arctan2(velocity[:, 1], velocity[:, 0])
    yaw_rate = _angle_derivative(heading, dt)
    with np.errstate(divide="ignore", invalid="ignore"):
        cross = np.abs(velocity[:, 0] * acceleration[:, 1] - velocity[:, 1] * acceleration[:, 0])
        curvature = cross / speed**3
    curvature = np.where(speed < v_static, np.nan, curvature)
    steps = np.diff(trajectory.xy, axis=0)
    path_length = float(np.hypot(steps[:, 0], steps[:, 1]).sum())
    return KinematicProfile(
        velocity=velocity,
        speed=speed,
        acceleration=acceleration,
        jerk=jerk,
        heading=heading,
        yaw_rate=yaw_rate,
        curvature=curvature,
        path_length=path_length,
    )


def _is_moving(prof: KinematicProfile, config: QualityConfig) -> bool:
    return bool(np.any(prof.speed >= config.v_static))


def comfort_score(trajectory: Trajectory, config: QualityConfig | None = None) -> float:
    """Geometric mean of squashed per-metre peaks of longitudinal jerk,
    lateral acceleration and yaw rate.

    NaN for trajectories that never move or cover less than ``min_path``
    metres; endpoint samples are excluded from the peaks.
    """
    config = config or QualityConfig()
    prof = profile(trajectory, config.v_static)
    if not _is_moving(prof, config) or prof.path_length <= config.min_path:
        return float("nan")
    inner = slice(1, -1)
    heading = prof.heading[inner]
    forward = np.stack([np.cos(heading), np.sin(heading)], axis=1)
    left = np.stack([-np.sin(heading), np.cos(heading)], axis=1)
    lon_jerk = np.abs(np.sum(prof.jerk[inner] * forward, axis=1))
    lat_accel = np.abs(np.sum(prof.acceleration[inner] * left, axis=1))
    yaw = np.abs(prof.yaw_rate[inner])
    peaks = (
        (lon_jerk.max() / prof.path_length, config.s_jerk),
        (lat_accel.max() / prof.path_length, config.s_lat),
        (yaw.max() / prof.path_length, config.s_yaw),
    )
    scores = [1.0 / (1.0 + q / s) for q, s in peaks]
    return float(np.prod(scores) ** (1.0 / len(scores)))


def motion_score(trajectory: Trajectory, config: QualityConfig | None = None) -> float:
    """Reward for actually going somewhere: ln-squashed mean speed against
    k * v_ref, clipped at 1.  Zero if the trajectory never moves."""
    config = config or QualityConfig()
    prof = profile(trajectory, config.v_static)
    if not _is_moving(prof, config):
        return 0.0
    mean_speed = float(prof.speed.mean())
    return min(1.0, math.log1p(mean_speed) / math.log1p(config.k * config.v_ref))


def curvature_score(trajectory: Trajectory, config: QualityConfig | None = None) -> float:
    """1 / (1 + RMS curvature) over the moving samples; NaN if never moving."""
    config = config or QualityConfig()
    prof = profile(trajectory, config.v_static)
    valid = prof.curvature[~np.isnan(prof.curvature)]
    if not _is_moving(prof, config) or len(valid) == 0:
        return float("nan")
    rms = float(np.sqrt(np.mean(valid**2)))
    return 1.0 / (1.0 + rms)


def trajectory_quality(trajectory: Trajectory, config: QualityConfig | None = None) -> float:
    """Geometric mean of comfort, motion and curvature scores, skipping
    undefined sub-scores.  Never-moving trajectories score 0."""
    config = config or QualityConfig()
    subs = [
        comfort_score(trajectory, config),
        motion_score(trajectory, config),
        curvature_score(trajectory, config),
    ]
    defined = [s for s in subs if not math.isnan(s)]
    if not defined:
        return float("nan")
    if any(s == 0.0 for s in defined):
        return 0.0
    return float(np.prod(defined) ** (1.0 / len(defined)))


def trajectory_consistency(trajectory: Trajectory) -> float:
    """Self-consistency of the speed profile.

    Mean of exp(-R_v) and exp(-R_a) where R_v is the coefficient of
    variation of speed and R_a of |dspeed/dt|; an essentially-zero mean
    |accel| (< 1e-8) counts as perfectly consistent.
    """
    if len(trajectory) < 5:
        raise ValueError(f"trajectory consistency needs at least 5 points, got {len(trajectory)}")
    prof = profile(trajectory)
    speed = prof.speed
    r_v = float(speed.std() / max(speed.mean(), 1e-8))
    s_v = math.exp(-r_v)
    accel = _derivative(speed, trajectory.dt)
    mean_abs_a = float(np.abs(accel).mean())
    if mean_abs_a < 1e-8:
        s_a = 1.0
    else:
        s_a = math.exp(-float(accel.std() / mean_abs_a))
    return (s_v + s_a) / 2.0
