"""Gaussian Fréchet distances over embedding sets and trajectory windows.

The distribution distance between two embedding sets is the Fréchet
distance between Gaussians fitted to them:

    d^2 = ||mu_x - mu_y||^2 + Tr(Sx + Sy - 2 (Sx^1/2 Sy Sx^1/2)^1/2)

Trajectory sets use the same distance over per-trajectory embeddings built
from agent-centric windows (FTD); video feature sets use it directly (FVD).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import EmbeddingSet, GaussianMoments, ManifestError, Trajectory


@dataclass(frozen=True)
class FtdConfig:
    """Windowing and estimator settings for the trajectory distance.

    ``stride=None`` means non-overlapping windows (stride == horizon).
    """

    horizon: int = 10
    stride: int | None = None
    epsilon: float = 1e-6
    shrinkage_lambda: float = 0.0

    def __post_init__(self):
        if self.horizon < 2:
            raise ValueError("horizon must be at least 2 steps")
        if self.stride is not None and self.stride < 1:
            raise ValueError("stride must be at least 1 step")
        if not (self.epsilon > 0 and math.isfinite(self.epsilon)):
            raise ValueError("epsilon must be positive and finite")
        if not 0.0 <= self.shrinkage_lambda <= 1.0:
            raise ValueError("shrinkage_lambda must lie in [0, 1]")

    @property
    def effective_stride(self) -> int:
        return self.horizon if self.stride is None else self.stride


def estimate_moments(embeddings: EmbeddingSet, shrinkage_lambda: float = 0.0) -> GaussianMoments:
    """Fit a Gaussian to an embedding set.

    Uses the unbiased (n-1) covariance, symmetrized, optionally shrunk
    toward the scaled identity (trace/d) * I by ``shrinkage_lambda``.
    """
    if len(embeddings) < 2:
        raise ValueError("moment estimation needs at least 2 vectors")
    if not 0.0 <= shrinkage_lambda <= 1.0:
        raise ValueError("shrinkage_lambda must lie in [0, 1]")
    x = embeddings.vectors
    mean = x.mean(axis=0)
    centered = x - mean
    cov = centered.T @ centered / (len(x) - 1)
    cov = (cov + cov.T) / 2.0
    if shrinkage_lambda > 0.0:
        target = (np.trace(cov) / embeddings.dim) * np.eye(embeddings.dim)
        cov = (1.0 - shrinkage_lambda) * cov + shrinkage_lambda * target
    return GaussianMoments(mean=mean, cov=cov)


def psd_sqrt(m: np.ndarray) -> np.ndarray:
    """Symmetric square root of a (near-)PSD matrix via eigendecomposition.

    Negative eigenvalues from round-off are clamped to zero; the result is
    re-symmetrized.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    if np.max(np.abs(m - m.T), initial=0.0) > 1e-9:
        raise ValueError("matrix must be symmetric within 1e-9")
    eigvals, eigvecs = np.linalg.eigh((m + m.T) / 2.0)
    eigvals = np.clip(eigvals, 0.0, None)
    root = (eigvecs * np.sqrt(eigvals)) @ eigvecs.T
    return (root + root.T) / 2.0


def frechet_distance(a: GaussianMoments, b: GaussianMoments, epsilon: float = 1e-6) -> float:
    """Fréchet distance between two Gaussians.

    ``epsilon * I`` is added to both covariances before any square root so
    the matrix sqrt stays well-conditioned; products are symmetrized and
    round-off negatives clamp to zero.
    """
    if a.dim != b.dim:
        raise ValueError(f"moment dimensions disagree: {a.dim} vs {b.dim}")
    if not (epsilon > 0 and math.isfinite(epsilon)):
        raise ValueError("epsilon must be positive and finite")
    eye = epsilon * np.eye(a.dim)
    cov_a = a.cov + eye
    cov_b = b.cov + eye
    root_a = psd_sqrt(cov_a)
    inner = root_a @ cov_b @ root_a
    inner = (inner + inner.T) / 2.0
    cross = psd_sqrt(inner)
    diff = a.mean - b.mean
    value = float(diff @ diff + np.trace(cov_a) + np.trace(cov_b) - 2.0 * np.trace(cross))
    return max(value, 0.0)


def slice_windows(trajectory: Trajectory, config: FtdConfig | None = None) -> list[np.ndarray]:
    """Cut a trajectory into agent-centric windows.

    Windows are ``horizon`` steps long, taken every ``stride`` steps with
    any trailing remainder dropped.  Each window is translated so its
    first point sits at the origin and rotated so its initial heading
    (first non-zero displacement) points along +x; windows that never
    move are only translated.
    """
    config = config or FtdConfig()
    h = config.horizon
    if len(trajectory) < h:
        raise ValueError(f"trajectory too short for horizon {h}: {len(trajectory)} points")
    xy = trajectory.xy
    windows = []
    for start in range(0, len(xy) - h + 1, config.effective_stride):
        window = xy[start : start + h] - xy[start]
        steps = np.diff(window, axis=0)
        norms = np.hypot(steps[:, 0], steps[:, 1])
        moving = np.nonzero(norms > 0.0)[0]
        if len(moving):
            dx, dy = steps[moving[0]]
            theta = math.atan2(dy, dx)
            c, s = math.cos(theta), math.sin(theta)
            rot = np.array([[c, s], [-s, c]])
            window = window @ rot.T
        windows.append(window)
    return windows


def reference_featurize(window: np.ndarray, rate: float = 10.0) -> np.ndarray:
    """Embed one window as its flattened positions plus step velocities.

    For a horizon-H window this yields 2H + 2(H-1) values.
    """
    window = np.asarray(window, dtype=float)
    if window.ndim != 2 or window.shape[1] != 2 or len(window) < 2:
        raise ValueError("window must be an (H, 2) array with H >= 2")
    velocities = np.diff(window, axis=0) * rate
    return np.concatenate([window.ravel(), velocities.ravel()])


def trajectory_embedding(trajectory: Trajectory, config: FtdConfig | None = None, featurize=reference_featurize) -> np.ndarray:
    """Mean featurized window of one trajectory."""
    windows = slice_windows(trajectory, config)
    feats = np.stack([featurize(w, trajectory.rate) for w in windows])
    return feats.mean(axis=0)


def ftd(
    generated: list[Trajectory],
    reference: list[Trajectory],
    config: FtdConfig | None = None,
    featurize=reference_featurize,
) -> float:
    """Fréchet trajectory distance between two sets of trajectories."""
    config = config or FtdConfig()
    if len(generated) < 2 or len(reference) < 2:
        raise ValueError("each trajectory set needs at least 2 trajectories")
    gen = EmbeddingSet(np.stack([trajectory_embedding(t, config, featurize) for t in generated]))
    ref = EmbeddingSet(np.stack([trajectory_embedding(t, config, featurize) for t in reference]))
    if gen.dim != ref.dim:
        raise ValueError(f"embedding dimensions disagree: {gen.dim} vs {ref.dim}")
    return frechet_distance(
        estimate_moments(gen, config.shrinkage_lambda),
        estimate_moments(ref, config.shrinkage_lambda),
        config.epsilon,
    )


def ftd_from_embeddings(
    generated: EmbeddingSet,
    reference: EmbeddingSet,
    config: FtdConfig | None = None,
) -> float:
    """Fréchet trajectory distance from pre-computed per-trajectory embeddings."""
    config = config or FtdConfig()
    if len(generated) < 2 or len(reference) < 2:
        raise ValueError("each embedding set needs at least 2 vectors")
    if generated.dim != reference.dim:
        raise ValueError(f"embedding dimensions disagree: {generated.dim} vs {reference.dim}")
    return frechet_distance(
        estimate_moments(generated, config.shrinkage_lambda),
        estimate_moments(reference, config.shrinkage_lambda),
        config.epsilon,
    )


def fvd(generated: EmbeddingSet, reference: EmbeddingSet, epsilon: float = 1e-6) -> float:
    """Fréchet distance between video-level embedding sets."""
    if len(generated) < 2 or len(reference) < 2:
        raise ValueError("each embedding set needs at least 2 vectors")
    if generated.dim != reference.dim:
        raise ValueError(f"embedding dimensions disagree: {generated.dim} vs {reference.dim}")
    return frechet_distance(estimate_moments(generated), estimate_moments(reference), epsilon)
