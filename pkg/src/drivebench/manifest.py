"""Manifest and artifact ingestion.

A run is described by one manifest JSON naming the candidate videos, the
models that produced them, and per-track reference data.  Every bulky
artifact (trajectories, features, luminance, agents, embeddings) lives in
its own JSONL file next to the manifest; rows are validated into the
frozen record types on load, so downstream metric code never sees raw
dictionaries.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from . import flicker, pose
from .config import EngineConfig
from .model import (
    AgentTrack,
    EmbeddingSet,
    FrameFeatures,
    LuminanceSeries,
    ManifestError,
    Track,
    Trajectory,
    ValidationIssue,
    ValidationReport,
    Verdict,
    VideoRecord,
)

MANIFEST_SCHEMA = "drivebench-manifest@1"

#: Metric identifiers in report column order.
METRICS = (
    "fvd",
    "ftd",
    "subjective_quality",
    "objective_quality",
    "trajectory_quality",
    "video_consistency",
    "agent_consistency",
    "disappearance",
    "trajectory_consistency",
    "ade",
    "dtw",
)

#: Metrics that compare a generated trajectory against the conditioning one.
ALIGNMENT_METRICS = ("ade", "dtw")

#: Metrics computed over whole per-model sets rather than single videos.
SET_METRICS = ("fvd", "ftd", "disappearance")


def read_jsonl(path: Path) -> list[dict]:
    """Read a JSONL file into row dicts, with line numbers on errors."""
    rows = []
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ManifestError(f"cannot read {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            row = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ManifestError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
        if not isinstance(row, dict):
            raise ManifestError(f"{path}:{lineno}: row must be a JSON object")
        rows.append(row)
    return rows


def write_jsonl(path: Path, rows: Iterable[dict]) -> None:
    """Write rows as one sorted-key JSON object per line."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, sort_keys=True) + "\n")


def _row_number(row: dict, key: str, path: Path, lineno: int) -> float:
    value = row.get(key)
    if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
        raise ManifestError(f"{path}:{lineno}: {key!r} must be a finite number")
    return float(value)


def _row_vector(row: dict, key: str, path: Path, lineno: int) -> list[float]:
    value = row.get(key)
    if not isinstance(value, list) or not value:
        raise ManifestError(f"{path}:{lineno}: {key!r} must be a non-empty list of numbers")
    out = []
    for item in value:
        if not isinstance(item, (int, float)) or isinstance(item, bool) or not math.isfinite(item):
            raise ManifestError(f"{path}:{lineno}: {key!r} must contain only finite numbers")
        out.append(float(item))
    return out


def _infer_rate(times: np.ndarray, path: Path) -> float:
    span = float(times[-1] - times[0])
    if span <= 0:
        raise ManifestError(f"{path}: timestamps must be strictly increasing")
    return round((len(times) - 1) / span, 9)


@dataclass(frozen=True)
class IncompleteTrack:
    """A trajectory file that asks the engine to finish it."""

    poses: pose.PoseTrack
    target_len: int


def read_trajectory(path: Path) -> Trajectory | IncompleteTrack:
    """Read a trajectory JSONL file.

    Rows carry ``t``, ``x``, ``y`` and optionally ``heading``.  The first
    row may mark the file as already-extrapolated (``extrapolated_from``)
    or as needing completion (``incomplete`` plus ``target_len``, with
    headings on every row).
    """
    rows = read_jsonl(path)
    if len(rows) < 2:
        raise ManifestError(f"{path}: trajectory too short ({len(rows)} points, need at least 2)")
    times, xs, ys, headings = [], [], [], []
    for lineno, row in enumerate(rows, start=1):
        times.append(_row_number(row, "t", path, lineno))
        xs.append(_row_number(row, "x", path, lineno))
        ys.append(_row_number(row, "y", path, lineno))
        if "heading" in row:
            headings.append(_row_number(row, "heading", path, lineno))
    if headings and len(headings) != len(rows):
        raise ManifestError(f"{path}: heading must appear on every row or none")
    times_arr = np.array(times)
    xy = np.column_stack([xs, ys])
    rate = _infer_rate(times_arr, path)
    first = rows[0]
    if first.get("incomplete"):
        target_len = first.get("target_len")
        if not isinstance(target_len, int) or target_len < len(rows):
            raise ManifestError(f"{path}: incomplete trajectory needs target_len >= its length")
        if not headings:
            raise ManifestError(f"{path}: incomplete trajectory needs a heading on every row")
        poses = pose.PoseTrack(times=times_arr, xy=xy, heading=np.array(headings), rate=rate)
        return IncompleteTrack(poses=poses, target_len=target_len)
    extrapolated_from = first.get("extrapolated_from")
    if extrapolated_from is not None and not isinstance(extrapolated_from, int):
        raise ManifestError(f"{path}: extrapolated_from must be an integer")
    return Trajectory(times=times_arr, xy=xy, rate=rate, extrapolated_from=extrapolated_from)


def read_poses(path: Path) -> pose.PoseTrack:
    """Read a pose JSONL file (t/x/y/heading rows) as a PoseTrack."""
    rows = read_jsonl(path)
    if len(rows) < 2:
        raise ManifestError(f"{path}: trajectory too short ({len(rows)} points, need at least 2)")
    times, xs, ys, headings = [], [], [], []
    for lineno, row in enumerate(rows, start=1):
        times.append(_row_number(row, "t", path, lineno))
        xs.append(_row_number(row, "x", path, lineno))
        ys.append(_row_number(row, "y", path, lineno))
        headings.append(_row_number(row, "heading", path, lineno))
    times_arr = np.array(times)
    return pose.PoseTrack(
        times=times_arr,
        xy=np.column_stack([xs, ys]),
        heading=np.array(headings),
        rate=_infer_rate(times_arr, path),
    )


def trajectory_rows(trajectory: Trajectory) -> list[dict]:
    """Serialize a trajectory back into its JSONL row form."""
    rows = []
    for i, (t, (x, y)) in enumerate(zip(trajectory.times, trajectory.xy)):
        row = {"t": float(t), "x": float(x), "y": float(y)}
        if i == 0 and trajectory.extrapolated_from is not None:
            row["extrapolated_from"] = int(trajectory.extrapolated_from)
        rows.append(row)
    return rows


def read_luminance(path: Path, rate: float) -> LuminanceSeries:
    """Read per-frame mean luminance, either from JSONL rows
    (``frame``/``mean_luminance``) or from a directory of PGM frames."""
    if path.is_dir():
        return flicker.luminance_from_frames(path, rate=rate)
    rows = read_jsonl(path)
    if not rows:
        raise ManifestError(f"{path}: luminance file is empty")
    frames, values = [], []
    for lineno, row in enumerate(rows, start=1):
        frames.append(int(_row_number(row, "frame", path, lineno)))
        values.append(_row_number(row, "mean_luminance", path, lineno))
    if any(b - a != 1 for a, b in zip(frames, frames[1:])):
        raise ManifestError(f"{path}: luminance frames must be consecutive")
    return LuminanceSeries(values=np.array(values), rate=rate)


def luminance_rows(series: LuminanceSeries) -> list[dict]:
    return [
        {"frame": i, "mean_luminance": float(v)} for i, v in enumerate(series.values)
    ]


def read_frame_features(features_path: Path, flow_path: Path) -> FrameFeatures:
    """Read per-frame features and per-step median flow."""
    feat_rows = read_jsonl(features_path)
    if not feat_rows:
        raise ManifestError(f"{features_path}: frame feature file is empty")
    frames, features = [], []
    for lineno, row in enumerate(feat_rows, start=1):
        frames.append(int(_row_number(row, "frame", features_path, lineno)))
        features.append(_row_vector(row, "feature", features_path, lineno))
    widths = {len(f) for f in features}
    if len(widths) != 1:
        raise ManifestError(f"{features_path}: feature vectors must share one dimension")
    flow_rows = read_jsonl(flow_path)
    if not flow_rows:
        raise ManifestError(f"{flow_path}: flow file is empty")
    flow_frames, flow = [], []
    for lineno, row in enumerate(flow_rows, start=1):
        flow_frames.append(int(_row_number(row, "frame", flow_path, lineno)))
        flow.append(_row_number(row, "median_flow", flow_path, lineno))
    return FrameFeatures(
        frames=np.array(frames),
        features=np.array(features),
        flow_frames=np.array(flow_frames),
        flow=np.array(flow),
    )


def frame_feature_rows(features: FrameFeatures) -> tuple[list[dict], list[dict]]:
    feat = [
        {"frame": int(f), "feature": [float(x) for x in vec]}
        for f, vec in zip(features.frames, features.features)
    ]
    flow = [
        {"frame": int(f), "median_flow": float(v)}
        for f, v in zip(features.flow_frames, features.flow)
    ]
    return feat, flow


def read_agents(path: Path) -> tuple[AgentTrack, ...]:
    """Read agent observation rows into per-agent tracks.

    Agents appear in first-observation order; a ``verdict`` may sit on
    any row of an agent but must not conflict.
    """
    rows = read_jsonl(path)
    order: list[str] = []
    frames: dict[str, list[int]] = {}
    boxes: dict[str, list[list[float]]] = {}
    features: dict[str, list[list[float]]] = {}
    verdicts: dict[str, Verdict] = {}
    for lineno, row in enumerate(rows, start=1):
        agent_id = row.get("agent_id")
        if not isinstance(agent_id, str) or not agent_id:
            raise ManifestError(f"{path}:{lineno}: 'agent_id' must be a non-empty string")
        if agent_id not in frames:
            order.append(agent_id)
            frames[agent_id] = []
            boxes[agent_id] = []
            features[agent_id] = []
        frames[agent_id].append(int(_row_number(row, "frame", path, lineno)))
        box = _row_vector(row, "bbox", path, lineno)
        if len(box) != 4:
            raise ManifestError(f"{path}:{lineno}: 'bbox' must be [x, y, w, h]")
        boxes[agent_id].append(box)
        features[agent_id].append(_row_vector(row, "feature", path, lineno))
        if "verdict" in row:
            verdict = _parse_verdict(row["verdict"], path, lineno)
            if agent_id in verdicts and verdicts[agent_id] is not verdict:
                raise ManifestError(f"{path}:{lineno}: conflicting verdicts for agent {agent_id!r}")
            verdicts[agent_id] = verdict
    return tuple(
        AgentTrack(
            agent_id=agent_id,
            frames=np.array(frames[agent_id]),
            boxes=np.array(boxes[agent_id]),
            features=np.array(features[agent_id]),
            verdict=verdicts.get(agent_id),
        )
        for agent_id in order
    )


def _parse_verdict(value: Any, path: Path, lineno: int) -> Verdict:
    try:
        return Verdict(value)
    except ValueError:
        raise ManifestError(
            f"{path}:{lineno}: verdict must be 'Natural' or 'Unnatural', got {value!r}"
        ) from None


def agent_rows(agents: Sequence[AgentTrack]) -> list[dict]:
    rows = []
    for agent in agents:
        for i, (frame, box, feat) in enumerate(zip(agent.frames, agent.boxes, agent.features)):
            row = {
                "agent_id": agent.agent_id,
                "frame": int(frame),
                "bbox": [float(v) for v in box],
                "feature": [float(v) for v in feat],
            }
            if i == len(agent.frames) - 1 and agent.verdict is not None:
                row["verdict"] = agent.verdict.value
            rows.append(row)
    return rows


def read_embedding_set(path: Path) -> EmbeddingSet:
    """Read an embedding-set JSONL file (one ``feature`` row per vector)."""
    rows = read_jsonl(path)
    if not rows:
        raise ManifestError(f"{path}: embedding file is empty")
    vectors = [_row_vector(row, "feature", path, lineno) for lineno, row in enumerate(rows, start=1)]
    widths = {len(v) for v in vectors}
    if len(widths) != 1:
        raise ManifestError(f"{path}: embedding vectors must share one dimension")
    return EmbeddingSet(np.array(vectors))


def read_video_embedding(path: Path) -> np.ndarray:
    """Read a single-vector embedding file."""
    embeddings = read_embedding_set(path)
    if len(embeddings) != 1:
        raise ManifestError(f"{path}: expected exactly 1 embedding row, got {len(embeddings)}")
    return embeddings.vectors[0]


def read_window_embeddings(path: Path) -> dict[str, np.ndarray]:
    """Read externally-computed per-window trajectory embeddings.

    Rows carry ``video_id``, ``window`` and ``feature``; windows of one
    video are averaged into its trajectory embedding.
    """
    rows = read_jsonl(path)
    if not rows:
        raise ManifestError(f"{path}: window embedding file is empty")
    grouped: dict[str, list[tuple[int, list[float]]]] = {}
    for lineno, row in enumerate(rows, start=1):
        video_id = row.get("video_id")
        if not isinstance(video_id, str) or not video_id:
            raise ManifestError(f"{path}:{lineno}: 'video_id' must be a non-empty string")
        window = int(_row_number(row, "window", path, lineno))
        grouped.setdefault(video_id, []).append((window, _row_vector(row, "feature", path, lineno)))
    out = {}
    for video_id, entries in grouped.items():
        entries.sort(key=lambda pair: pair[0])
        out[video_id] = np.mean([vec for _, vec in entries], axis=0)
    return out


@dataclass(frozen=True)
class ReferenceData:
    """Per-track reference artifacts the candidates are scored against."""

    embeddings: EmbeddingSet | None = None
    trajectories: tuple[Trajectory, ...] = ()


@dataclass(frozen=True)
class ManifestBundle:
    """A fully-loaded manifest: records, references, model order."""

    path: Path
    sha256: str
    records: tuple[VideoRecord, ...]
    references: dict[Track, ReferenceData]
    models: tuple[str, ...]


def _parse_track(value: Any, video_id: str | None = None) -> Track:
    try:
        return Track(value)
    except ValueError:
        raise ManifestError(
            f"track must be one of {[t.value for t in Track]}, got {value!r}", video_id=video_id
        ) from None


def _resolve(base: Path, rel: Any, video_id: str, field: str) -> Path:
    if not isinstance(rel, str) or not rel:
        raise ManifestError("file entries must be non-empty path strings", video_id=video_id, field=field)
    return base / rel


def load_manifest_bundle(
    path: Path | str, config: EngineConfig | None = None, seed: int = 0
) -> ManifestBundle:
    """Load a manifest and every artifact it references.

    Incomplete trajectories are finished here, with the run seed and the
    video id fixing the jitter draws, so every consumer sees the same
    completed data.
    """
    path = Path(path)
    config = config or EngineConfig()
    try:
        raw_bytes = path.read_bytes()
    except OSError as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc}") from exc
    try:
        doc = json.loads(raw_bytes)
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ManifestError(f"{path}: manifest must be a JSON object")
    if doc.get("schema") != MANIFEST_SCHEMA:
        raise ManifestError(f"{path}: expected schema {MANIFEST_SCHEMA!r}, got {doc.get('schema')!r}")
    base = path.parent

    references: dict[Track, ReferenceData] = {}
    for entry in doc.get("tracks", []):
        if not isinstance(entry, dict):
            raise ManifestError(f"{path}: track entries must be objects")
        track = _parse_track(entry.get("name"))
        if track in references:
            raise ManifestError(f"{path}: duplicate track entry {track.value!r}")
        ref = entry.get("reference", {})
        if not isinstance(ref, dict):
            raise ManifestError(f"{path}: track reference must be an object")
        embeddings = None
        if "video_embeddings" in ref:
            embeddings = read_embedding_set(_resolve(base, ref["video_embeddings"], "*", "video_embeddings"))
        trajectories = []
        for rel in ref.get("trajectories", []):
            loaded = read_trajectory(_resolve(base, rel, "*", "trajectories"))
            if isinstance(loaded, IncompleteTrack):
                raise ManifestError(f"{path}: reference trajectories must be complete", field="trajectories")
            trajectories.append(loaded)
        references[track] = ReferenceData(embeddings=embeddings, trajectories=tuple(trajectories))

    declared_models: list[str] = []
    for entry in doc.get("models", []):
        model_id = entry.get("model_id") if isinstance(entry, dict) else entry
        if not isinstance(model_id, str) or not model_id:
            raise ManifestError(f"{path}: model entries must carry a non-empty model_id")
        if model_id in declared_models:
            raise ManifestError(f"{path}: duplicate model {model_id!r}")
        declared_models.append(model_id)

    videos = doc.get("videos")
    if not isinstance(videos, list) or not videos:
        raise ManifestError(f"{path}: manifest lists no videos")
    records: list[VideoRecord] = []
    seen_ids: set[str] = set()
    models: list[str] = list(declared_models)
    for entry in videos:
        if not isinstance(entry, dict):
            raise ManifestError(f"{path}: video entries must be objects")
        video_id = entry.get("video_id")
        if not isinstance(video_id, str) or not video_id:
            raise ManifestError(f"{path}: video entries must carry a non-empty video_id")
        if video_id in seen_ids:
            raise ManifestError(f"{path}: duplicate video", video_id=video_id)
        seen_ids.add(video_id)
        model_id = entry.get("model_id")
        if not isinstance(model_id, str) or not model_id:
            raise ManifestError("video entry must carry a model_id", video_id=video_id)
        if declared_models and model_id not in declared_models:
            raise ManifestError(f"model {model_id!r} is not declared in 'models'", video_id=video_id)
        if model_id not in models:
            models.append(model_id)
        track = _parse_track(entry.get("track"), video_id)
        files = entry.get("files", {})
        if not isinstance(files, dict):
            raise ManifestError("'files' must be an object", video_id=video_id, field="files")
        known = {
            "trajectory",
            "reference_trajectory",
            "luminance",
            "frame_features",
            "flow",
            "agents",
            "video_embedding",
        }
        for key in files:
            if key not in known:
                raise ManifestError(f"unknown file kind {key!r}", video_id=video_id, field=key)

        def _load_traj(field: str) -> Trajectory | None:
            if field not in files:
                return None
            loaded = read_trajectory(_resolve(base, files[field], video_id, field))
            if isinstance(loaded, IncompleteTrack):
                if field != "trajectory":
                    raise ManifestError(
                        "only the generated trajectory may be incomplete", video_id=video_id, field=field
                    )
                return pose.complete_trajectory(
                    loaded.poses,
                    loaded.target_len,
                    jitter_deg=config.jitter_deg,
                    seed=pose.derive_seed(seed, video_id),
                )
            return loaded

        trajectory = _load_traj("trajectory")
        reference_trajectory = _load_traj("reference_trajectory")
        luminance = None
        if "luminance" in files:
            luminance = read_luminance(_resolve(base, files["luminance"], video_id, "luminance"), rate=config.mmp.rate)
        frame_features = None
        if "frame_features" in files or "flow" in files:
            if "frame_features" not in files or "flow" not in files:
                raise ManifestError(
                    "'frame_features' and 'flow' must be declared together", video_id=video_id, field="frame_features"
                )
            frame_features = read_frame_features(
                _resolve(base, files["frame_features"], video_id, "frame_features"),
                _resolve(base, files["flow"], video_id, "flow"),
            )
        agents = None
        if "agents" in files:
            agents = read_agents(_resolve(base, files["agents"], video_id, "agents"))
        video_embedding = None
        if "video_embedding" in files:
            video_embedding = read_video_embedding(_resolve(base, files["video_embedding"], video_id, "video_embedding"))
        subjective = entry.get("subjective_quality")
        meta = entry.get("meta", {})
        if not isinstance(meta, dict):
            raise ManifestError("'meta' must be an object", video_id=video_id, field="meta")
        records.append(
            VideoRecord(
                video_id=video_id,
                model_id=model_id,
                track=track,
                trajectory=trajectory,
                reference_trajectory=reference_trajectory,
                luminance=luminance,
                frame_features=frame_features,
                agents=agents,
                video_embedding=video_embedding,
                subjective_quality=subjective,
                meta=meta,
            )
        )
    return ManifestBundle(
        path=path,
        sha256=hashlib.sha256(raw_bytes).hexdigest(),
        records=tuple(records),
        references=references,
        models=tuple(models),
    )


def load_manifest(path: Path | str, config: EngineConfig | None = None, seed: int = 0) -> list[VideoRecord]:
    """Load just the candidate records of a manifest."""
    return list(load_manifest_bundle(path, config=config, seed=seed).records)


def _metric_issues(
    record: VideoRecord, metric: str, config: EngineConfig
) -> list[ValidationIssue]:
    issues: list[ValidationIssue] = []

    def fatal(message: str) -> None:
        issues.append(ValidationIssue(record.video_id, metric, message, fatal=True))

    def note(message: str) -> None:
        issues.append(ValidationIssue(record.video_id, metric, message, fatal=False))

    if metric == "fvd":
        if record.video_embedding is None:
            fatal("missing video_embedding")
    elif metric == "ftd":
        if record.trajectory is None:
            fatal("missing trajectory")
        elif len(record.trajectory) < config.ftd.horizon:
            fatal(
                f"trajectory has {len(record.trajectory)} points; "
                f"horizon {config.ftd.horizon} needs at least that many"
            )
    elif metric == "subjective_quality":
        if record.subjective_quality is None:
            fatal("missing subjective_quality score")
    elif metric == "objective_quality":
        if record.luminance is None:
            fatal("missing luminance series")
        elif len(record.luminance) < 8:
            fatal(f"luminance series has {len(record.luminance)} samples; spectral analysis needs 8")
    elif metric in ("trajectory_quality", "trajectory_consistency"):
        if record.trajectory is None:
            fatal("missing trajectory")
        elif len(record.trajectory) < 5:
            fatal(f"trajectory has {len(record.trajectory)} points; kinematics needs 5")
    elif metric == "video_consistency":
        if record.frame_features is None:
            fatal("missing frame features")
        else:
            if len(record.frame_features) < 2:
                fatal("frame features need at least 2 frames")
            if len(record.frame_features.flow) < 1:
                fatal("missing flow values")
    elif metric == "agent_consistency":
        eligible = [a for a in (record.agents or ()) if len(a) >= 2]
        if not eligible:
            note("no agent observed twice; metric will be undefined")
    elif metric == "disappearance":
        pass
    elif metric in ALIGNMENT_METRICS:
        if record.track is not Track.EGO_CONDITIONED:
            fatal("alignment metrics need the EgoConditioned track")
        elif record.reference_trajectory is None:
            fatal("missing reference_trajectory")
    else:
        raise ValueError(f"unknown metric {metric!r}")
    return issues


def validate(
    records: Sequence[VideoRecord],
    requested_metrics: Sequence[str],
    *,
    references: dict[Track, ReferenceData] | None = None,
    config: EngineConfig | None = None,
) -> ValidationReport:
    """Pre-flight a metric run: every problem the run would hit, up front.

    Fatal issues abort a run; notes mark metrics that will come back
    undefined.
    """
    config = config or EngineConfig()
    issues: list[ValidationIssue] = []
    for metric in requested_metrics:
        if metric not in METRICS:
            raise ValueError(f"unknown metric {metric!r}")
    for record in records:
        for metric in requested_metrics:
            issues.extend(_metric_issues(record, metric, config))
    by_group: dict[tuple[str, Track], int] = {}
    for record in records:
        by_group[(record.model_id, record.track)] = by_group.get((record.model_id, record.track), 0) + 1
    for (model_id, track), count in sorted(by_group.items(), key=lambda kv: (kv[0][0], kv[0][1].value)):
        for metric in ("fvd", "ftd"):
            if metric in requested_metrics and count < 2:
                issues.append(
                    ValidationIssue(
                        "*",
                        metric,
                        f"model {model_id!r} has {count} {track.value} video(s); set metrics need 2",
                        fatal=True,
                    )
                )
    if references is not None:
        tracks = sorted({r.track for r in records}, key=lambda t: t.value)
        for track in tracks:
            ref = references.get(track, ReferenceData())
            if "fvd" in requested_metrics and ref.embeddings is None:
                issues.append(
                    ValidationIssue("*", "fvd", f"track {track.value} declares no reference embeddings", fatal=True)
                )
            if "ftd" in requested_metrics and len(ref.trajectories) < 2:
                issues.append(
                    ValidationIssue("*", "ftd", f"track {track.value} declares fewer than 2 reference trajectories", fatal=True)
                )
    return ValidationReport(issues=tuple(issues))
