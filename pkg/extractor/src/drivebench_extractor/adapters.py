"""Per-output adapters and their bundled null implementations.

Each engine-facing output is produced by a named adapter.  Real
deployments plug in learned backbones (optical flow, feature encoders,
detectors/trackers, depth+pose recovery, a vision-language judge); the
null adapters below need no weights, are fully deterministic, and emit
schema-valid data:

- luminance ``pixel-mean``: per-frame mean of the raw pixels.
- features ``pooled-pixels``: average-pooled raw-pixel vectors, with a
  zero per-step median flow (no motion estimate).
- agents ``none``: reports no agents.
- embedding ``pooled-video``: mean of the pooled-pixel frame vectors.
- subjective ``luminance-spread``: a bounded score from the dispersion
  of frame means.
- trajectory ``marked-incomplete``: two stationary poses flagged for
  engine-side pose completion -- a null adapter has no motion evidence,
  so it marks the track incomplete instead of fabricating poses.
- vlm ``constant-natural``: answers every disappearance query with
  ``Natural``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .frames import Frame


class AdapterError(RuntimeError):
    """An adapter failed on an otherwise decodable video."""


@dataclass(frozen=True)
class Tracklet:
    """One tracked agent: observed frames, boxes, and crop features."""

    agent_id: str
    frames: tuple[int, ...]
    boxes: tuple[tuple[float, float, float, float], ...]
    features: tuple[tuple[float, ...], ...]


def luminance_pixel_mean(frames: Sequence[Frame]) -> list[dict]:
    """Mean raw-pixel intensity per frame."""
    return [
        {"frame": f.index, "mean_luminance": float(np.mean(f.pixels, dtype=np.float64))}
        for f in frames
    ]


def pooled_pixel_vector(pixels: np.ndarray, grid: int) -> list[float]:
    """Average-pool a frame onto a ``grid`` x ``grid`` raster, flattened.

    Cell edges come from rounded equal splits, so every pixel belongs to
    exactly one cell whatever the frame size.
    """
    h, w = pixels.shape
    ys = np.linspace(0, h, grid + 1).round().astype(int)
    xs = np.linspace(0, w, grid + 1).round().astype(int)
    cells = []
    for gy in range(grid):
        for gx in range(grid):
            block = pixels[ys[gy] : ys[gy + 1], xs[gx] : xs[gx + 1]]
            if block.size == 0:
                raise AdapterError(f"pooling grid {grid} too fine for a {w}x{h} frame")
            cells.append(float(np.mean(block, dtype=np.float64)))
    return cells


def features_pooled_pixels(frames: Sequence[Frame], grid: int) -> tuple[list[dict], list[dict]]:
    """Per-frame pooled-pixel vectors plus a zero median-flow series."""
    feature_rows = [
        {"frame": f.index, "feature": pooled_pixel_vector(f.pixels, grid)} for f in frames
    ]
    flow_rows = [{"frame": f.index, "median_flow": 0.0} for f in frames[1:]]
    return feature_rows, flow_rows


def agents_none(frames: Sequence[Frame]) -> list[Tracklet]:
    """The null detector/tracker: no agents."""
    return []


def embedding_pooled_video(frames: Sequence[Frame], grid: int) -> list[dict]:
    """One embedding row: the mean of the pooled-pixel frame vectors."""
    stacked = np.array([pooled_pixel_vector(f.pixels, grid) for f in frames])
    return [{"feature": [float(v) for v in np.mean(stacked, axis=0)]}]


def subjective_luminance_spread(frames: Sequence[Frame]) -> float:
    """A [0, 1] stand-in score: steadier luminance scores higher."""
    means = np.array([np.mean(f.pixels, dtype=np.float64) for f in frames])
    return float(1.0 / (1.0 + np.std(means)))


def trajectory_marked_incomplete(frames: Sequence[Frame], rate: float) -> list[dict]:
    """Two stationary poses, flagged for engine-side completion."""
    if len(frames) < 2:
        raise AdapterError("trajectory stub needs at least 2 frames")
    dt = 1.0 / rate
    return [
        {
            "t": 0.0,
            "x": 0.0,
            "y": 0.0,
            "heading": 0.0,
            "incomplete": True,
            "target_len": len(frames),
        },
        {"t": dt, "x": 0.0, "y": 0.0, "heading": 0.0},
    ]


def vlm_constant_natural(prompt: str, frame_images: Sequence[np.ndarray]) -> str:
    """The null judge: every disappearance reads as natural."""
    return "Natural"


#: adapter registries, keyed by output then adapter name
LUMINANCE_ADAPTERS: dict[str, Callable] = {"pixel-mean": luminance_pixel_mean}
FEATURE_ADAPTERS: dict[str, Callable] = {"pooled-pixels": features_pooled_pixels}
AGENT_ADAPTERS: dict[str, Callable] = {"none": agents_none}
EMBEDDING_ADAPTERS: dict[str, Callable] = {"pooled-video": embedding_pooled_video}
SUBJECTIVE_ADAPTERS: dict[str, Callable] = {"luminance-spread": subjective_luminance_spread}
TRAJECTORY_ADAPTERS: dict[str, Callable] = {"marked-incomplete": trajectory_marked_incomplete}
VLM_ADAPTERS: dict[str, Callable] = {"constant-natural": vlm_constant_natural}

REGISTRY: dict[str, dict[str, Callable]] = {
    "luminance": LUMINANCE_ADAPTERS,
    "features": FEATURE_ADAPTERS,
    "agents": AGENT_ADAPTERS,
    "embedding": EMBEDDING_ADAPTERS,
    "subjective": SUBJECTIVE_ADAPTERS,
    "trajectory": TRAJECTORY_ADAPTERS,
    "vlm": VLM_ADAPTERS,
}


def null_adapter_names() -> dict[str, str]:
    """The bundled weight-free adapter for every registry slot."""
    return {slot: next(iter(names)) for slot, names in REGISTRY.items()}
