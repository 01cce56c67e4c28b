"""Core value types shared by every metric module.

All record types are frozen dataclasses wrapping read-only numpy arrays, so
they can be shared freely across worker threads.  Validation happens at
construction: a record that exists is a record the metric code can trust.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

TIME_TOLERANCE = 1e-9
"""Maximum deviation (seconds) of a timestamp step from the nominal 1/rate."""


class ManifestError(ValueError):
    """Raised when a manifest or artifact file violates the input schema."""

    def __init__(self, message: str, *, video_id: str | None = None, field: str | None = None):
        parts = []
        if video_id is not None:
            parts.append(f"video {video_id!r}")
        if field is not None:
            parts.append(f"field {field!r}")
        if parts:
            message = f"{message} ({', '.join(parts)})"
        super().__init__(message)
        self.video_id = video_id
        self.field = field


class Track(enum.Enum):
    """Evaluation track a video belongs to."""

    OPEN_DOMAIN = "OpenDomain"
    EGO_CONDITIONED = "EgoConditioned"


class Verdict(enum.Enum):
    """Judged plausibility of an agent's exit from the scene."""

    NATURAL = "Natural"
    UNNATURAL = "Unnatural"


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=float, copy=True)
    out.flags.writeable = False
    return out


def _freeze_int(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=np.int64, copy=True)
    out.flags.writeable = False
    return out


def _require_finite(arr: np.ndarray, name: str) -> None:
    if not np.all(np.isfinite(arr)):
        raise ManifestError(f"{name} contains non-finite values", field=name)


@dataclass(frozen=True)
class Trajectory:
    """A 2-D path sampled on a uniform time grid.

    ``times`` are seconds, ``xy`` are metres in a fixed ground frame.
    ``extrapolated_from`` marks the index where constant-velocity pose
    completion took over, if it did.
    """

    times: np.ndarray
    xy: np.ndarray
    rate: float = 10.0
    extrapolated_from: int | None = None

    def __post_init__(self):
        times = _freeze(np.atleast_1d(self.times))
        xy = _freeze(np.atleast_2d(self.xy))
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "xy", xy)
        if times.ndim != 1 or xy.ndim != 2 or xy.shape[1] != 2:
            raise ManifestError("trajectory arrays must be (n,) times and (n, 2) positions", field="xy")
        if len(times) != len(xy):
            raise ManifestError("trajectory times and positions disagree in length", field="times")
        if len(times) < 1:
            raise ManifestError("trajectory is empty", field="times")
        _require_finite(times, "times")
        _require_finite(xy, "xy")
        if not (self.rate > 0 and math.isfinite(self.rate)):
            raise ManifestError("trajectory rate must be positive and finite", field="rate")
        if len(times) > 1:
            steps = np.diff(times)
            if np.any(steps <= 0):
                raise ManifestError("trajectory timestamps must be strictly increasing", field="times")
            if np.max(np.abs(steps - 1.0 / self.rate)) > TIME_TOLERANCE:
                raise ManifestError("trajectory timestamps are not uniform at the stated rate", field="times")
        if self.extrapolated_from is not None:
            if not 0 < self.extrapolated_from <= len(times):
                raise ManifestError("extrapolated_from is out of range", field="extrapolated_from")

    def __len__(self) -> int:
        return len(self.times)

    @property
    def dt(self) -> float:
        return 1.0 / self.rate


@dataclass(frozen=True)
class EmbeddingSet:
    """A bag of fixed-dimension feature vectors, e.g. one per video."""

    vectors: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        vectors = _freeze(np.atleast_2d(self.vectors))
        object.__setattr__(self, "vectors", vectors)
        if vectors.ndim != 2 or vectors.shape[0] < 1 or vectors.shape[1] < 1:
            raise ManifestError("embedding set must be a non-empty (n, d) array", field="vectors")
        _require_finite(vectors, "vectors")
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            object.__setattr__(self, "labels", labels)
            if len(labels) != len(vectors):
                raise ManifestError("embedding labels disagree with vector count", field="labels")

    def __len__(self) -> int:
        return len(self.vectors)

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])


@dataclass(frozen=True)
class GaussianMoments:
    """Sample mean and covariance of an embedding set."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = _freeze(np.atleast_1d(self.mean))
        cov = _freeze(np.atleast_2d(self.cov))
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)
        d = len(mean)
        if mean.ndim != 1 or cov.shape != (d, d):
            raise ManifestError("moments must be a (d,) mean and (d, d) covariance", field="cov")
        _require_finite(mean, "mean")
        _require_finite(cov, "cov")
        if np.max(np.abs(cov - cov.T), initial=0.0) > 1e-12:
            raise ManifestError("covariance must be symmetric within 1e-12", field="cov")

    @property
    def dim(self) -> int:
        return int(len(self.mean))


@dataclass(frozen=True)
class LuminanceSeries:
    """Per-frame mean luminance of a video, sampled at ``rate`` fps."""

    values: np.ndarray
    rate: float = 10.0

    def __post_init__(self):
        values = _freeze(np.atleast_1d(self.values))
        object.__setattr__(self, "values", values)
        if values.ndim != 1 or len(values) < 1:
            raise ManifestError("luminance series must be a non-empty 1-D array", field="values")
        _require_finite(values, "values")
        if np.min(values) < 0.0 or np.max(values) > 255.0:
            raise ManifestError("luminance values must lie in [0, 255]", field="values")
        if not (self.rate > 0 and math.isfinite(self.rate)):
            raise ManifestError("luminance rate must be positive and finite", field="rate")

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class FrameFeatures:
    """Per-frame feature vectors plus the median optical flow per step.

    ``frames`` index the frames the features were taken from; ``flow``
    holds the median flow magnitude (pixels/frame) between consecutive
    frames, indexed by ``flow_frames``.
    """

    frames: np.ndarray
    features: np.ndarray
    flow_frames: np.ndarray
    flow: np.ndarray

    def __post_init__(self):
        frames = _freeze_int(np.atleast_1d(self.frames))
        features = _freeze(np.atleast_2d(self.features))
        flow_frames = _freeze_int(np.atleast_1d(self.flow_frames))
        flow = _freeze(np.atleast_1d(self.flow))
        object.__setattr__(self, "frames", frames)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "flow_frames", flow_frames)
        object.__setattr__(self, "flow", flow)
        if len(frames) != len(features) or features.ndim != 2:
            raise ManifestError("frame features must be (F,) indices and (F, d) vectors", field="features")
        if len(flow_frames) != len(flow):
            raise ManifestError("flow frames and flow values disagree in length", field="flow")
        for name, idx in (("frames", frames), ("flow_frames", flow_frames)):
            if len(idx) > 1 and np.any(np.diff(idx) <= 0):
                raise ManifestError(f"{name} must be strictly increasing", field=name)
        _require_finite(features, "features")
        _require_finite(flow, "flow")
        if len(flow) and np.min(flow) < 0.0:
            raise ManifestError("flow magnitudes must be non-negative", field="flow")

    def __len__(self) -> int:
        return len(self.frames)


@dataclass(frozen=True)
class AgentTrack:
    """One tracked agent: where it appears and how it looks."""

    agent_id: str
    frames: np.ndarray
    boxes: np.ndarray
    features: np.ndarray
    verdict: Verdict | None = None

    def __post_init__(self):
        frames = _freeze_int(np.atleast_1d(self.frames))
        boxes = _freeze(np.atleast_2d(self.boxes))
        features = _freeze(np.atleast_2d(self.features))
        object.__setattr__(self, "frames", frames)
        object.__setattr__(self, "boxes", boxes)
        object.__setattr__(self, "features", features)
        k = len(frames)
        if k < 1:
            raise ManifestError("agent track is empty", field="frames")
        if boxes.shape != (k, 4) or len(features) != k or features.ndim != 2:
            raise ManifestError(
                "agent track needs (K,) frames, (K, 4) boxes and (K, d) features", field="boxes"
            )
        if k > 1 and np.any(np.diff(frames) <= 0):
            raise ManifestError("agent frames must be strictly increasing", field="frames")
        _require_finite(boxes, "boxes")
        _require_finite(features, "features")
        if np.any(boxes[:, 2] <= 0) or np.any(boxes[:, 3] <= 0):
            raise ManifestError("agent boxes must have positive width and height", field="boxes")

    def __len__(self) -> int:
        return len(self.frames)


@dataclass(frozen=True)
class VideoRecord:
    """Everything the engine knows about one generated video."""

    video_id: str
    model_id: str
    track: Track
    trajectory: Trajectory | None = None
    reference_trajectory: Trajectory | None = None
    luminance: LuminanceSeries | None = None
    frame_features: FrameFeatures | None = None
    agents: tuple[AgentTrack, ...] | None = None
    video_embedding: np.ndarray | None = None
    subjective_quality: float | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.video_id:
            raise ManifestError("video_id must be non-empty")
        if not self.model_id:
            raise ManifestError("model_id must be non-empty", video_id=self.video_id)
        if not isinstance(self.track, Track):
            raise ManifestError("track must be a Track value", video_id=self.video_id, field="track")
        if self.track is Track.EGO_CONDITIONED and self.reference_trajectory is None:
            raise ManifestError(
                "EgoConditioned records must carry a reference_trajectory",
                video_id=self.video_id,
                field="reference_trajectory",
            )
        if self.agents is not None:
            object.__setattr__(self, "agents", tuple(self.agents))
        if self.video_embedding is not None:
            emb = _freeze(np.atleast_1d(self.video_embedding))
            if emb.ndim != 1 or len(emb) < 1:
                raise ManifestError(
                    "video_embedding must be a 1-D vector", video_id=self.video_id, field="video_embedding"
                )
            _require_finite(emb, "video_embedding")
            object.__setattr__(self, "video_embedding", emb)
        if self.subjective_quality is not None:
            s = float(self.subjective_quality)
            if not (math.isfinite(s) and 0.0 <= s <= 1.0):
                raise ManifestError(
                    "subjective_quality must lie in [0, 1]",
                    video_id=self.video_id,
                    field="subjective_quality",
                )
            object.__setattr__(self, "subjective_quality", s)


@dataclass(frozen=True)
class ValidationIssue:
    """One problem found while pre-flighting a metric run."""

    video_id: str
    metric: str
    message: str
    fatal: bool = True

    def __str__(self) -> str:
        kind = "error" if self.fatal else "note"
        return f"[{kind}] {self.metric}: {self.message} (video {self.video_id!r})"


@dataclass(frozen=True)
class ValidationReport:
    """All issues from a validation pass, in deterministic order."""

    issues: tuple[ValidationIssue, ...] = ()

    @property
    def fatal(self) -> tuple[ValidationIssue, ...]:
        return tuple(i for i in self.issues if i.fatal)

    @property
    def notes(self) -> tuple[ValidationIssue, ...]:
        return tuple(i for i in self.issues if not i.fatal)

    @property
    def ok(self) -> bool:
        return not self.fatal

    def __str__(self) -> str:
        if not self.issues:
            return "validation clean"
        return "\n".join(str(i) for i in self.issues)
