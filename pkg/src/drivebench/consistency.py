"""Temporal feature-consistency metrics.

Video consistency follows frame features sampled at a stride adapted to
scene motion (slow scenes are sampled sparsely so stillness is not
rewarded); agent consistency tracks each agent's appearance against both
its previous and its first observation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .model import AgentTrack, FrameFeatures, Verdict, VideoRecord


@dataclass(frozen=True)
class ConsistencyConfig:
    """Adaptive sampling and blending knobs for feature consistency."""

    target_flow: float = 8.0
    max_stride: int = 16
    blend_first: float = 0.5

    def __post_init__(self):
        if not (self.target_flow > 0 and math.isfinite(self.target_flow)):
            raise ValueError("target_flow must be positive and finite")
        if self.max_stride < 1:
            raise ValueError("max_stride must be at least 1")
        if not 0.0 <= self.blend_first <= 1.0:
            raise ValueError("blend_first must lie in [0, 1]")


def _cosine(u: np.ndarray, v: np.ndarray) -> float:
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        raise ValueError("cosine similarity is undefined for zero-norm features")
    return float(np.dot(u, v) / (nu * nv))


def adaptive_stride(flow: np.ndarray, config: ConsistencyConfig | None = None, n_frames: int | None = None) -> int:
    """Frame stride proportional to target flow over observed median flow.

    Clamped to [1, min(max_stride, n_frames - 1)] so at least two frames
    are always compared.
    """
    config = config or ConsistencyConfig()
    flow = np.asarray(flow, dtype=float)
    if flow.size == 0:
        raise ValueError("adaptive stride needs at least one flow value")
    median = float(np.median(flow))
    raw = int(round(config.target_flow / max(median, 1e-6)))
    upper = config.max_stride
    if n_frames is not None:
        upper = min(upper, max(n_frames - 1, 1))
    return int(min(max(raw, 1), upper))


def video_consistency(features: FrameFeatures, config: ConsistencyConfig | None = None) -> float:
    """Mean cosine similarity between consecutive stride-sampled frame
    features, clamped below at 0."""
    config = config or ConsistencyConfig()
    stride = adaptive_stride(features.flow, config, n_frames=len(features))
    sampled = features.features[::stride]
    if len(sampled) < 2:
        raise ValueError("video consistency needs at least 2 sampled frames")
    sims = [_cosine(sampled[i], sampled[i + 1]) for i in range(len(sampled) - 1)]
    return max(0.0, float(np.mean(sims)))


def agent_consistency(agents: Sequence[AgentTrack], config: ConsistencyConfig | None = None) -> float:
    """Appearance stability of tracked agents.

    Per agent with >= 2 observations: blend of mean consecutive cosine
    similarity and mean similarity to the first observation, weighted by
    ``blend_first``.  NaN when no agent qualifies.
    """
    config = config or ConsistencyConfig()
    scores = []
    for agent in agents:
        if len(agent) < 2:
            continue
        feats = agent.features
        consecutive = [_cosine(feats[i], feats[i + 1]) for i in range(len(feats) - 1)]
        to_first = [_cosine(feats[i], feats[0]) for i in range(1, len(feats))]
        blend = config.blend_first
        scores.append((1.0 - blend) * float(np.mean(consecutive)) + blend * float(np.mean(to_first)))
    if not scores:
        return float("nan")
    return max(0.0, float(np.mean(scores)))


def video_is_clean(agents: Iterable[AgentTrack]) -> bool:
    """A video is clean iff no agent carries an Unnatural verdict."""
    return all(agent.verdict is not Verdict.UNNATURAL for agent in agents)


def disappearance_score(records: Sequence[VideoRecord]) -> float:
    """Fraction of videos whose agent exits all look natural.

    Videos without verdicts are vacuously clean; NaN for an empty set.
    """
    if not records:
        return float("nan")
    clean = [1.0 if video_is_clean(r.agents or ()) else 0.0 for r in records]
    return float(np.mean(clean))
