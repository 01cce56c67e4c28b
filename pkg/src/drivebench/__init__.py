"""drivebench: deterministic metric engine for driving world-model video
benchmarks.

Distribution distances (FVD/FTD), trajectory kinematics and consistency,
luminance-flicker detection, feature consistency, pose completion and a
ranked leaderboard report — all seeded, all reproducible.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .alignment import ade, dtw, dtw_backend
from .config import EngineConfig, load_config
from .consistency import (
    ConsistencyConfig,
    adaptive_stride,
    agent_consistency,
    disappearance_score,
    video_consistency,
)
from .flicker import MmpConfig, luminance_from_frames, mmp, objective_quality, periodogram
from .frechet import (
    FtdConfig,
    estimate_moments,
    frechet_distance,
    ftd,
    fvd,
    psd_sqrt,
    reference_featurize,
    slice_windows,
)
from .kinematics import (
    KinematicProfile,
    QualityConfig,
    comfort_score,
    curvature_score,
    motion_score,
    profile,
    trajectory_consistency,
    trajectory_quality,
)
from .manifest import load_manifest, load_manifest_bundle, validate
from .model import (
    AgentTrack,
    EmbeddingSet,
    FrameFeatures,
    GaussianMoments,
    LuminanceSeries,
    ManifestError,
    Track,
    Trajectory,
    ValidationIssue,
    ValidationReport,
    Verdict,
    VideoRecord,
)
from .pose import PoseTrack, complete, complete_trajectory, derive_seed
from .report import (
    MetricReport,
    MetricSpec,
    average_ranks,
    emit,
    load_report,
    run,
)

__all__ = [
    "__version__",
    "ade",
    "adaptive_stride",
    "agent_consistency",
    "AgentTrack",
    "average_ranks",
    "comfort_score",
    "complete",
    "complete_trajectory",
    "ConsistencyConfig",
    "curvature_score",
    "derive_seed",
    "disappearance_score",
    "dtw",
    "dtw_backend",
    "EmbeddingSet",
    "emit",
    "EngineConfig",
    "estimate_moments",
    "frechet_distance",
    "FrameFeatures",
    "ftd",
    "FtdConfig",
    "fvd",
    "GaussianMoments",
    "KinematicProfile",
    "load_config",
    "load_manifest",
    "load_manifest_bundle",
    "load_report",
    "luminance_from_frames",
    "LuminanceSeries",
    "ManifestError",
    "MetricReport",
    "MetricSpec",
    "mmp",
    "MmpConfig",
    "motion_score",
    "objective_quality",
    "periodogram",
    "PoseTrack",
    "profile",
    "psd_sqrt",
    "QualityConfig",
    "reference_featurize",
    "run",
    "slice_windows",
    "Track",
    "Trajectory",
    "trajectory_consistency",
    "trajectory_quality",
    "ValidationIssue",
    "ValidationReport",
    "validate",
    "Verdict",
    "video_consistency",
    "VideoRecord",
]
