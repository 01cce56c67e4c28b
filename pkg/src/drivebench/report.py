"""Metric orchestration, aggregation, ranking and report emission.

``run`` turns a manifest into a MetricReport: per-video values, per-model
aggregates, and an average-rank leaderboard per track.  Reports are
deterministic — values are rounded to six significant digits at
construction, serialization sorts every key, and re-running with the same
seed reproduces the bytes exactly.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import alignment, consistency, flicker, frechet, kinematics
from .config import EngineConfig
from .manifest import (
    ALIGNMENT_METRICS,
    METRICS,
    SET_METRICS,
    ManifestBundle,
    ReferenceData,
    load_manifest_bundle,
    read_window_embeddings,
    validate,
)
from .model import EmbeddingSet, Track, ValidationReport, VideoRecord

REPORT_SCHEMA = "drivebench-report@1"
SEED_DERIVATION = "seed ^ sha256_64(video_id)"
RANK_NOTE = (
    "Average rank is a coarse convenience summary over heterogeneous metrics, "
    "not a definitive ordering; compare the individual columns before drawing conclusions."
)


@dataclass(frozen=True)
class MetricSpec:
    """How one metric behaves in reports."""

    metric_id: str
    label: str
    family: str
    lower_better: bool = False
    per_model: bool = False
    ego_only: bool = False

    @property
    def arrow(self) -> str:
        return "↓" if self.lower_better else "↑"


REGISTRY: dict[str, MetricSpec] = {
    spec.metric_id: spec
    for spec in (
        MetricSpec("fvd", "FVD", "Distribution", lower_better=True, per_model=True),
        MetricSpec("ftd", "FTD", "Distribution", lower_better=True, per_model=True),
        MetricSpec("subjective_quality", "Subjective", "Quality"),
        MetricSpec("objective_quality", "Objective", "Quality"),
        MetricSpec("trajectory_quality", "Traj. Quality", "Quality"),
        MetricSpec("video_consistency", "Video Cons.", "Temporal Consistency"),
        MetricSpec("agent_consistency", "Agent Cons.", "Temporal Consistency"),
        MetricSpec("disappearance", "Disappearance", "Temporal Consistency", per_model=True),
        MetricSpec("trajectory_consistency", "Traj. Cons.", "Temporal Consistency"),
        MetricSpec("ade", "ADE", "Trajectory Alignment", lower_better=True, ego_only=True),
        MetricSpec("dtw", "DTW", "Trajectory Alignment", lower_better=True, ego_only=True),
    )
}

FAMILIES = ("Distribution", "Quality", "Temporal Consistency", "Trajectory Alignment")


class ValidationFailure(Exception):
    """A run aborted by fatal validation issues."""

    def __init__(self, report: ValidationReport):
        super().__init__(str(report))
        self.report = report


class ComputationError(RuntimeError):
    """A metric computation failed on otherwise-valid input."""


def round_sig(value: float, digits: int = 6) -> float:
    """Round to ``digits`` significant digits (report precision)."""
    return float(f"{float(value):.{digits}g}")


def default_metrics(track: Track) -> tuple[str, ...]:
    """Every metric that applies to a track, in report order."""
    return tuple(
        m for m in METRICS if not (REGISTRY[m].ego_only and track is not Track.EGO_CONDITIONED)
    )


def fractional_ranks(values: Sequence[float], lower_better: bool) -> list[float]:
    """1-based ranks, ties averaged; best value gets rank 1."""
    keyed = [v if lower_better else -v for v in values]
    order = sorted(range(len(values)), key=lambda i: keyed[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and keyed[order[j + 1]] == keyed[order[i]]:
            j += 1
        shared = (i + j + 2) / 2.0
        for k in range(i, j + 1):
            ranks[order[k]] = shared
        i = j + 1
    return ranks


def average_ranks(table: dict[str, dict[str, float]], metrics: Sequence[str]) -> dict[str, float]:
    """Mean fractional rank over ``metrics`` for each model in ``table``."""
    models = list(table)
    if not models:
        return {}
    per_model = {m: [] for m in models}
    for metric in metrics:
        values = [table[m][metric] for m in models]
        for model, rank in zip(models, fractional_ranks(values, REGISTRY[metric].lower_better)):
            per_model[model].append(rank)
    return {m: float(np.mean(per_model[m])) for m in models}


@dataclass(frozen=True)
class TrackReport:
    """All results for one track."""

    track: str
    metrics: tuple[str, ...]
    per_video: dict
    per_model: dict
    ranks: dict
    unranked: dict
    undefined: tuple


@dataclass(frozen=True)
class MetricReport:
    """One full evaluation run, ready to serialize."""

    manifest_path: str
    manifest_sha256: str
    seed: int
    config: dict
    models: tuple[str, ...]
    tracks: dict[str, TrackReport]
    schema: str = REPORT_SCHEMA
    seed_derivation: str = SEED_DERIVATION
    rank_note: str = RANK_NOTE


def _video_metric(record: VideoRecord, metric: str, config: EngineConfig) -> float:
    if metric == "subjective_quality":
        return float(record.subjective_quality)
    if metric == "objective_quality":
        return flicker.objective_quality(record.luminance, config.mmp)
    if metric == "trajectory_quality":
        return kinematics.trajectory_quality(record.trajectory, config.quality)
    if metric == "video_consistency":
        return consistency.video_consistency(record.frame_features, config.consistency)
    if metric == "agent_consistency":
        return consistency.agent_consistency(record.agents or (), config.consistency)
    if metric == "trajectory_consistency":
        return kinematics.trajectory_consistency(record.trajectory)
    if metric == "ade":
        return alignment.ade(record.trajectory, record.reference_trajectory)
    if metric == "dtw":
        return alignment.dtw(record.trajectory, record.reference_trajectory)
    raise ValueError(f"unknown per-video metric {metric!r}")


def _video_metrics(record: VideoRecord, metrics: Sequence[str], config: EngineConfig) -> dict[str, float]:
    out = {}
    for metric in metrics:
        if REGISTRY[metric].per_model:
            continue
        try:
            out[metric] = _video_metric(record, metric, config)
        except Exception as exc:
            raise ComputationError(f"computing {metric} for video {record.video_id!r}: {exc}") from exc
    return out


def _model_set_metric(
    metric: str,
    model_records: Sequence[VideoRecord],
    reference: ReferenceData,
    config: EngineConfig,
    window_embeddings: dict[str, np.ndarray] | None,
    track: Track,
) -> float:
    if metric == "disappearance":
        return consistency.disappearance_score(model_records)
    if metric == "fvd":
        generated = EmbeddingSet(np.stack([r.video_embedding for r in model_records]))
        return frechet.fvd(generated, reference.embeddings, config.fvd_epsilon)
    if metric == "ftd":
        if window_embeddings is not None:
            try:
                gen = EmbeddingSet(np.stack([window_embeddings[r.video_id] for r in model_records]))
            except KeyError as exc:
                raise ComputationError(f"no window embeddings for video {exc.args[0]!r}") from exc
            prefix = f"ref:{track.value}:"
            ref_keys = sorted(
                (k for k in window_embeddings if k.startswith(prefix)),
                key=lambda k: int(k.rsplit(":", 1)[1]),
            )
            if len(ref_keys) < 2:
                raise ComputationError(f"window embedding file lists fewer than 2 {prefix}* references")
            ref = EmbeddingSet(np.stack([window_embeddings[k] for k in ref_keys]))
            return frechet.ftd_from_embeddings(gen, ref, config.ftd)
        return frechet.ftd([r.trajectory for r in model_records], list(reference.trajectories), config.ftd)
    raise ValueError(f"unknown set metric {metric!r}")


def _clean_value(value: float) -> float | None:
    value = float(value)
    return None if math.isnan(value) else round_sig(value)


def preflight(
    bundle: ManifestBundle,
    metrics: Sequence[str] | None = None,
    config: EngineConfig | None = None,
) -> tuple[dict[Track, tuple[str, ...]], ValidationReport]:
    """Resolve the metric set per track and validate every record.

    With ``metrics=None`` each track gets its applicable defaults;
    explicit metrics are demanded of every record on every track.
    """
    config = config or EngineConfig()
    tracks = [t for t in Track if any(r.track is t for r in bundle.records)]
    metrics_by_track: dict[Track, tuple[str, ...]] = {}
    issues = []
    for track in tracks:
        if metrics is None:
            chosen = default_metrics(track)
        else:
            chosen = tuple(m for m in METRICS if m in metrics)
            if len(chosen) != len(set(metrics)):
                unknown = sorted(set(metrics) - set(METRICS))
                raise ValueError(f"unknown metrics requested: {unknown}")
        metrics_by_track[track] = chosen
        records = [r for r in bundle.records if r.track is track]
        report = validate(records, chosen, references=bundle.references, config=config)
        issues.extend(report.issues)
    return metrics_by_track, ValidationReport(issues=tuple(issues))


def run(
    manifest_path: Path | str,
    metrics: Sequence[str] | None = None,
    config: EngineConfig | None = None,
    seed: int = 0,
    workers: int | None = None,
    window_embeddings_path: Path | str | None = None,
) -> MetricReport:
    """Evaluate a manifest into a MetricReport.

    ``metrics=None`` selects every metric applicable to each track;
    explicit metrics must be computable for every record.  Raises
    ValidationFailure on fatal pre-flight issues and ComputationError if
    a metric fails mid-run.
    """
    config = config or EngineConfig()
    bundle = load_manifest_bundle(manifest_path, config=config, seed=seed)
    window_embeddings = (
        read_window_embeddings(Path(window_embeddings_path)) if window_embeddings_path else None
    )
    tracks = [t for t in Track if any(r.track is t for r in bundle.records)]
    by_track = {t: [r for r in bundle.records if r.track is t] for t in tracks}
    metrics_by_track, validation = preflight(bundle, metrics, config)
    if not validation.ok:
        raise ValidationFailure(validation)

    track_reports: dict[str, TrackReport] = {}
    for track in tracks:
        records = by_track[track]
        chosen = metrics_by_track[track]
        video_metrics = [m for m in chosen if not REGISTRY[m].per_model]
        if workers and workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(lambda r: _video_metrics(r, video_metrics, config), records))
        else:
            results = [_video_metrics(r, video_metrics, config) for r in records]

        models = [m for m in bundle.models if any(r.model_id == m for r in records)]
        per_video: dict[str, dict[str, dict[str, float | None]]] = {m: {} for m in models}
        undefined: list[tuple[str, str, str]] = []
        for record, values in zip(records, results):
            row = {}
            for metric in video_metrics:
                cleaned = _clean_value(values[metric])
                row[metric] = cleaned
                if cleaned is None:
                    undefined.append((record.model_id, record.video_id, metric))
            per_video[record.model_id][record.video_id] = row

        reference = bundle.references.get(track, ReferenceData())
        per_model: dict[str, dict[str, float | None]] = {}
        for model in models:
            model_records = [r for r in records if r.model_id == model]
            aggregates: dict[str, float | None] = {}
            for metric in chosen:
                if REGISTRY[metric].per_model:
                    try:
                        value = _model_set_metric(
                            metric, model_records, reference, config, window_embeddings, track
                        )
                    except ComputationError:
                        raise
                    except Exception as exc:
                        raise ComputationError(
                            f"computing {metric} for model {model!r} on {track.value}: {exc}"
                        ) from exc
                    aggregates[metric] = _clean_value(value)
                else:
                    defined = [
                        per_video[model][r.video_id][metric]
                        for r in model_records
                        if per_video[model][r.video_id][metric] is not None
                    ]
                    aggregates[metric] = round_sig(float(np.mean(defined))) if defined else None
            per_model[model] = aggregates

        rankable = {
            model: values
            for model, values in per_model.items()
            if all(values[m] is not None for m in chosen)
        }
        ranks = {m: round_sig(v) for m, v in average_ranks(rankable, chosen).items()}
        unranked = {
            model: tuple(m for m in chosen if values[m] is None)
            for model, values in per_model.items()
            if model not in rankable
        }
        track_reports[track.value] = TrackReport(
            track=track.value,
            metrics=chosen,
            per_video=per_video,
            per_model=per_model,
            ranks=ranks,
            unranked=unranked,
            undefined=tuple(undefined),
        )

    return MetricReport(
        manifest_path=str(manifest_path),
        manifest_sha256=bundle.sha256,
        seed=int(seed),
        config=config.snapshot(),
        models=bundle.models,
        tracks=track_reports,
    )


def report_to_doc(report: MetricReport) -> dict:
    """JSON-ready dict form of a report."""
    return {
        "schema": report.schema,
        "manifest": {"path": report.manifest_path, "sha256": report.manifest_sha256},
        "seed": report.seed,
        "seed_derivation": report.seed_derivation,
        "rank_note": report.rank_note,
        "config": report.config,
        "models": list(report.models),
        "tracks": {
            name: {
                "metrics": list(tr.metrics),
                "per_video": tr.per_video,
                "per_model": tr.per_model,
                "ranks": tr.ranks,
                "unranked": {m: list(v) for m, v in tr.unranked.items()},
                "undefined": [
                    {"model": m, "video": v, "metric": x} for m, v, x in tr.undefined
                ],
            }
            for name, tr in report.tracks.items()
        },
    }


def report_from_doc(doc: dict) -> MetricReport:
    """Rebuild a MetricReport from its JSON form."""
    if doc.get("schema") != REPORT_SCHEMA:
        raise ValueError(f"expected schema {REPORT_SCHEMA!r}, got {doc.get('schema')!r}")
    tracks = {
        name: TrackReport(
            track=name,
            metrics=tuple(td["metrics"]),
            per_video=td["per_video"],
            per_model=td["per_model"],
            ranks=td["ranks"],
            unranked={m: tuple(v) for m, v in td["unranked"].items()},
            undefined=tuple((u["model"], u["video"], u["metric"]) for u in td["undefined"]),
        )
        for name, td in doc["tracks"].items()
    }
    return MetricReport(
        manifest_path=doc["manifest"]["path"],
        manifest_sha256=doc["manifest"]["sha256"],
        seed=doc["seed"],
        config=doc["config"],
        models=tuple(doc["models"]),
        tracks=tracks,
        schema=doc["schema"],
        seed_derivation=doc["seed_derivation"],
        rank_note=doc["rank_note"],
    )


def load_report(path: Path | str) -> MetricReport:
    """Read a previously emitted JSON report."""
    return report_from_doc(json.loads(Path(path).read_text(encoding="utf-8")))


def _fmt(value: float | None) -> str:
    return "—" if value is None else f"{value:g}"


def render_markdown(report: MetricReport) -> str:
    """Human-readable leaderboard, one ranked table per track."""
    lines = ["# Metric report", ""]
    lines.append(f"- manifest: `{report.manifest_path}` (sha256 `{report.manifest_sha256[:16]}…`)")
    lines.append(f"- seed: {report.seed} (per-video: {report.seed_derivation})")
    lines.append(f"- models: {', '.join(report.models)}")
    lines.append("")
    canonical = [t.value for t in Track if t.value in report.tracks]
    for name in canonical:
        tr = report.tracks[name]
        specs = [REGISTRY[m] for m in tr.metrics]
        families = []
        for spec in specs:
            if spec.family not in families:
                families.append(spec.family)
        groups = " · ".join(
            f"{fam}: " + ", ".join(s.label for s in specs if s.family == fam) for fam in families
        )
        lines.append(f"## {name}")
        lines.append("")
        lines.append(f"Column groups — {groups}")
        lines.append("")
        header = ["Model"] + [f"{s.label} {s.arrow}" for s in specs] + ["Avg. Rank"]
        lines.append("| " + " | ".join(header) + " |")
        lines.append("|" + "---|" * len(header))
        ordered = sorted(
            tr.per_model,
            key=lambda m: (tr.ranks.get(m, math.inf), list(report.models).index(m)),
        )
        for model in ordered:
            cells = [model] + [_fmt(tr.per_model[model][m]) for m in tr.metrics]
            cells.append(_fmt(tr.ranks.get(model)))
            lines.append("| " + " | ".join(cells) + " |")
        lines.append("")
        if tr.unranked:
            for model, missing in tr.unranked.items():
                lines.append(f"- unranked: {model} (undefined: {', '.join(missing)})")
            lines.append("")
        if tr.undefined:
            lines.append("Undefined values:")
            for model, video, metric in tr.undefined:
                lines.append(f"- {model} / {video} / {metric}")
            lines.append("")
    lines.append(f"*{report.rank_note}*")
    lines.append("")
    return "\n".join(lines)


def emit(report: MetricReport, out_dir: Path | str, formats: Sequence[str] = ("json", "markdown")) -> dict[str, Path]:
    """Write the report in the requested formats; returns written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: dict[str, Path] = {}
    for fmt in formats:
        if fmt == "json":
            path = out_dir / "report.json"
            text = json.dumps(report_to_doc(report), sort_keys=True, indent=2, allow_nan=False) + "\n"
        elif fmt == "markdown":
            path = out_dir / "report.md"
            text = render_markdown(report)
        else:
            raise ValueError(f"unknown report format {fmt!r}")
        path.write_text(text, encoding="utf-8")
        written[fmt] = path
    return written
