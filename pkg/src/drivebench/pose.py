"""Constant-velocity pose completion for truncated ego tracks.

When an upstream pose estimator loses track before the clip ends, the
missing tail is extrapolated: each appended step repeats the last
observed per-step displacement, then perturbs the heading by a zero-mean
Gaussian draw that also steers the next displacement.  With zero jitter
the continuation is an exact straight line and the recorded heading is
carried forward bit-for-bit.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from .kinematics import wrap_angle
from .model import TIME_TOLERANCE, ManifestError, Trajectory, _freeze, _require_finite


@dataclass(frozen=True)
class PoseTrack:
    """A timed sequence of 2-D poses (position plus heading)."""

    times: np.ndarray
    xy: np.ndarray
    heading: np.ndarray
    rate: float = 10.0

    def __post_init__(self):
        times = _freeze(np.atleast_1d(self.times))
        xy = _freeze(np.atleast_2d(self.xy))
        heading = _freeze(wrap_angle(np.atleast_1d(self.heading)))
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "xy", xy)
        object.__setattr__(self, "heading", heading)
        n = len(times)
        if n < 1 or xy.shape != (n, 2) or heading.shape != (n,):
            raise ManifestError("pose track needs (n,) times, (n, 2) positions, (n,) headings")
        _require_finite(times, "times")
        _require_finite(xy, "xy")
        _require_finite(heading, "heading")
        if not (self.rate > 0 and math.isfinite(self.rate)):
            raise ManifestError("pose rate must be positive and finite", field="rate")
        if n > 1:
            steps = np.diff(times)
            if np.any(steps <= 0):
                raise ManifestError("pose timestamps must be strictly increasing", field="times")
            if np.max(np.abs(steps - 1.0 / self.rate)) > TIME_TOLERANCE:
                raise ManifestError("pose timestamps are not uniform at the stated rate", field="times")

    def __len__(self) -> int:
        return len(self.times)


def derive_seed(seed: int, video_id: str) -> int:
    """Per-video RNG seed: the run seed XORed with a 64-bit digest of the
    video id.  Stable across processes and platforms."""
    digest = hashlib.sha256(video_id.encode("utf-8")).digest()
    return (int(seed) ^ int.from_bytes(digest[:8], "big")) & 0xFFFFFFFFFFFFFFFF


def complete(track: PoseTrack, target_len: int, jitter_deg: float = 0.5, seed: int = 0) -> PoseTrack:
    """Extend a pose track to ``target_len`` poses by constant-velocity
    extrapolation with Gaussian heading jitter.

    The input poses are preserved bit-for-bit.  Each appended step moves
    by the last observed per-step displacement rotated by the accumulated
    jitter; the draw for step k perturbs the heading recorded at step k
    and steers step k+1.
    """
    if len(track) < 2:
        raise ValueError("pose completion needs at least 2 observed poses")
    if target_len < len(track):
        raise ValueError(f"target_len {target_len} is shorter than the track ({len(track)} poses)")
    if not (jitter_deg >= 0 and math.isfinite(jitter_deg)):
        raise ValueError("jitter_deg must be non-negative and finite")
    n_add = target_len - len(track)
    if n_add == 0:
        return track
    dt = 1.0 / track.rate
    vx, vy = track.xy[-1] - track.xy[-2]
    heading = float(track.heading[-1])
    rng = np.random.default_rng(seed)
    draws = rng.normal(0.0, math.radians(jitter_deg), size=n_add)
    times = list(track.times)
    xy = [tuple(p) for p in track.xy]
    headings = list(track.heading)
    t_last = float(track.times[-1])
    x, y = xy[-1]
    for k, delta in enumerate(draws):
        x += vx
        y += vy
        if delta != 0.0:
            heading = wrap_angle(heading + delta)
            c, s = math.cos(delta), math.sin(delta)
            vx, vy = c * vx - s * vy, s * vx + c * vy
        times.append(t_last + (k + 1) * dt)
        xy.append((x, y))
        headings.append(heading)
    return PoseTrack(times=np.array(times), xy=np.array(xy), heading=np.array(headings), rate=track.rate)


def to_trajectory(track: PoseTrack, extrapolated_from: int | None = None) -> Trajectory:
    """View a pose track as a plain trajectory."""
    return Trajectory(
        times=track.times, xy=track.xy, rate=track.rate, extrapolated_from=extrapolated_from
    )


def complete_trajectory(track: PoseTrack, target_len: int, jitter_deg: float = 0.5, seed: int = 0) -> Trajectory:
    """Complete a pose track and return it as a Trajectory whose
    ``extrapolated_from`` marks where observation ended."""
    original = len(track)
    full = complete(track, target_len, jitter_deg=jitter_deg, seed=seed)
    marker = original if target_len > original else None
    return to_trajectory(full, extrapolated_from=marker)
