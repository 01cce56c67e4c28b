"""Extraction orchestration: adapters in, interchange files out.

``extract`` decodes one video, runs the requested per-output adapters,
and writes the artifact files the metric engine consumes, plus a
manifest covering them and an ``extraction.json`` summary.  Every file
is written atomically (temp file + rename), so a failure never leaves a
partial artifact behind.  One adapter failing is recorded against its
output; the remaining outputs are still produced.

Everything lands under ``out_dir/<video_id>/``, so extracting many
videos into one output directory from parallel processes is safe.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Collection

from .adapters import REGISTRY, Tracklet, null_adapter_names
from .disappearance import judge_tracklet
from .frames import VideoDecodeError, decode_frames, pgm_bytes

#: Outputs ``extract`` can be asked for, in production order.
OUTPUTS = ("luminance", "features", "trajectory", "agents", "embedding", "subjective", "disappearance")

_MANIFEST_SCHEMA = "drivebench-manifest@1"
_TRACKS = ("OpenDomain", "EgoConditioned")


@dataclass(frozen=True)
class ExtractorConfig:
    """Extraction settings: frame rate, identity, and adapter choices.

    ``adapters`` names the backbone implementation per registry slot and
    ``weights`` the per-slot weights path where a learned adapter would
    load from (the bundled null adapters need none).  ``out_dir`` is the
    default output directory when ``extract`` is not given one.
    """

    rate: float = 10.0
    model_id: str = "extracted"
    track: str = "OpenDomain"
    grid: int = 4
    out_dir: str | None = None
    adapters: dict[str, str] = field(default_factory=null_adapter_names)
    weights: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.rate <= 0:
            raise ValueError(f"rate must be positive, got {self.rate}")
        if self.grid < 1:
            raise ValueError(f"grid must be at least 1, got {self.grid}")
        if self.track not in _TRACKS:
            raise ValueError(f"track must be one of {list(_TRACKS)}, got {self.track!r}")
        for slot, name in self.adapters.items():
            if slot not in REGISTRY:
                raise ValueError(f"unknown adapter slot {slot!r}")
            if name not in REGISTRY[slot]:
                raise ValueError(
                    f"slot {slot!r} names no available adapter {name!r} "
                    f"(have {sorted(REGISTRY[slot])})"
                )
        for slot in REGISTRY:
            if slot not in self.adapters:
                raise ValueError(f"adapter slot {slot!r} is unset")
        for slot in self.weights:
            if slot not in REGISTRY:
                raise ValueError(f"weights name unknown adapter slot {slot!r}")

    def adapter(self, slot: str):
        return REGISTRY[slot][self.adapters[slot]]


def parse_config(path: Path | str) -> ExtractorConfig:
    """Read ``key = value`` override lines over the defaults.

    Adapter slots are set as ``<slot>_adapter`` keys and their weights
    as ``<slot>_weights``, e.g. ``luminance_adapter = pixel-mean``.
    """
    path = Path(path)
    values: dict = {}
    adapters = null_adapter_names()
    weights: dict[str, str] = {}
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {line.strip()!r}")
        key, _, value = stripped.partition("=")
        key, value = key.strip(), value.strip()
        if key.endswith("_adapter"):
            slot = key[: -len("_adapter")]
            if slot not in REGISTRY:
                raise ValueError(f"{path}:{lineno}: unknown adapter slot {slot!r}")
            adapters[slot] = value
        elif key.endswith("_weights"):
            slot = key[: -len("_weights")]
            if slot not in REGISTRY:
                raise ValueError(f"{path}:{lineno}: unknown adapter slot {slot!r}")
            weights[slot] = value
        elif key == "rate":
            values["rate"] = float(value)
        elif key == "grid":
            values["grid"] = int(value)
        elif key in ("model_id", "track", "out_dir"):
            values[key] = value
        else:
            raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
    try:
        return ExtractorConfig(adapters=adapters, weights=weights, **values)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from exc


@dataclass(frozen=True)
class ExtractionResult:
    """What one extraction produced, per output."""

    video_id: str
    out_dir: Path
    produced: dict[str, list[str]]
    errors: dict[str, str]
    subjective_quality: float | None
    manifest_path: Path | None
    summary_path: Path


def _atomic_write(path: Path, data: bytes) -> None:
    tmp = path.with_name(path.name + f".tmp{os.getpid()}")
    tmp.write_bytes(data)
    os.replace(tmp, path)


def _jsonl(rows: list[dict]) -> bytes:
    return b"".join(json.dumps(row, sort_keys=True).encode() + b"\n" for row in rows)


def _agent_rows(tracklets: list[Tracklet], verdicts: dict[str, str]) -> list[dict]:
    rows = []
    for t in tracklets:
        for i, (frame, box, feat) in enumerate(zip(t.frames, t.boxes, t.features)):
            row = {
                "agent_id": t.agent_id,
                "frame": int(frame),
                "bbox": [float(v) for v in box],
                "feature": [float(v) for v in feat],
            }
            if i == len(t.frames) - 1 and t.agent_id in verdicts:
                row["verdict"] = verdicts[t.agent_id]
            rows.append(row)
    return rows


def extract(
    video: Path | str,
    outputs: Collection[str],
    out_dir: Path | str | None = None,
    config: ExtractorConfig | None = None,
) -> ExtractionResult:
    """Extract the requested outputs of one video into ``out_dir``.

    ``out_dir`` falls back to ``config.out_dir`` when omitted.
    """
    config = config or ExtractorConfig()
    if out_dir is None:
        out_dir = config.out_dir
    if out_dir is None:
        raise ValueError("no output directory: pass out_dir or set it in the config")
    for name in outputs:
        if name not in OUTPUTS:
            raise ValueError(f"unknown output {name!r} (have {list(OUTPUTS)})")
    if not outputs:
        raise ValueError("no outputs requested")
    requested = [name for name in OUTPUTS if name in outputs]

    video = Path(video)
    video_id = video.name
    vid_dir = Path(out_dir) / video_id
    vid_dir.mkdir(parents=True, exist_ok=True)

    produced: dict[str, list[str]] = {}
    errors: dict[str, str] = {}
    subjective: float | None = None

    try:
        frames = decode_frames(video)
    except VideoDecodeError as exc:
        for name in requested:
            errors[name] = str(exc)
        frames = None

    tracklets: list[Tracklet] | None = None

    def tracked_agents() -> list[Tracklet]:
        nonlocal tracklets
        if tracklets is None:
            tracklets = list(config.adapter("agents")(frames))
        return tracklets

    if frames is not None:
        # Judge disappearances first so verdicts land on the agent rows.
        verdicts: dict[str, str] = {}
        if "disappearance" in requested:
            try:
                audit_rows = []
                frame_files: list[str] = []
                for t in tracked_agents():
                    run = judge_tracklet(t, frames, config.adapter("vlm"))
                    if run is None:
                        continue
                    names = []
                    for p in run.frames:
                        suffix = "_boxed" if p.boxed else ""
                        names.append(f"protocol/{t.agent_id}_frame{p.frame_index:04d}{suffix}.pgm")
                    (vid_dir / "protocol").mkdir(exist_ok=True)
                    for name, p in zip(names, run.frames):
                        _atomic_write(vid_dir / name, pgm_bytes(p.pixels))
                    frame_files.extend(names)
                    audit_rows.append({**run.row, "frame_files": names})
                    verdicts[t.agent_id] = run.row["verdict"]
                _atomic_write(vid_dir / "disappearance.jsonl", _jsonl(audit_rows))
                produced["disappearance"] = ["disappearance.jsonl", *frame_files]
            except Exception as exc:
                errors["disappearance"] = str(exc) or type(exc).__name__

        for name in requested:
            if name == "disappearance" or name in errors:
                continue
            try:
                if name == "luminance":
                    _atomic_write(vid_dir / "luminance.jsonl", _jsonl(config.adapter("luminance")(frames)))
                    produced[name] = ["luminance.jsonl"]
                elif name == "features":
                    feature_rows, flow_rows = config.adapter("features")(frames, config.grid)
                    feature_bytes, flow_bytes = _jsonl(feature_rows), _jsonl(flow_rows)
                    _atomic_write(vid_dir / "frame_features.jsonl", feature_bytes)
                    _atomic_write(vid_dir / "flow.jsonl", flow_bytes)
                    produced[name] = ["frame_features.jsonl", "flow.jsonl"]
                elif name == "trajectory":
                    _atomic_write(
                        vid_dir / "trajectory.jsonl",
                        _jsonl(config.adapter("trajectory")(frames, config.rate)),
                    )
                    produced[name] = ["trajectory.jsonl"]
                elif name == "agents":
                    _atomic_write(vid_dir / "agents.jsonl", _jsonl(_agent_rows(tracked_agents(), verdicts)))
                    produced[name] = ["agents.jsonl"]
                elif name == "embedding":
                    _atomic_write(
                        vid_dir / "video_embedding.jsonl",
                        _jsonl(config.adapter("embedding")(frames, config.grid)),
                    )
                    produced[name] = ["video_embedding.jsonl"]
                elif name == "subjective":
                    subjective = float(config.adapter("subjective")(frames))
                    produced[name] = []
            except Exception as exc:
                errors[name] = str(exc) or type(exc).__name__

    manifest_path = None
    files = {}
    if "luminance" in produced:
        files["luminance"] = "luminance.jsonl"
    if "features" in produced:
        files["frame_features"] = "frame_features.jsonl"
        files["flow"] = "flow.jsonl"
    if "trajectory" in produced:
        files["trajectory"] = "trajectory.jsonl"
    if "agents" in produced:
        files["agents"] = "agents.jsonl"
    if "embedding" in produced:
        files["video_embedding"] = "video_embedding.jsonl"
    if files or subjective is not None:
        entry: dict = {
            "video_id": video_id,
            "model_id": config.model_id,
            "track": config.track,
            "files": files,
        }
        if subjective is not None:
            entry["subjective_quality"] = subjective
        manifest = {
            "schema": _MANIFEST_SCHEMA,
            "models": [{"model_id": config.model_id}],
            "videos": [entry],
        }
        manifest_path = vid_dir / "manifest.json"
        _atomic_write(manifest_path, json.dumps(manifest, indent=2, sort_keys=True).encode() + b"\n")

    summary: dict = {
        "video_id": video_id,
        "outputs": {
            name: ({"files": produced[name]} if name in produced else {"error": errors[name]})
            for name in requested
        },
    }
    if subjective is not None:
        summary["subjective_quality"] = subjective
    if manifest_path is not None:
        summary["manifest"] = manifest_path.name
    summary_path = vid_dir / "extraction.json"
    _atomic_write(summary_path, json.dumps(summary, indent=2, sort_keys=True).encode() + b"\n")

    return ExtractionResult(
        video_id=video_id,
        out_dir=vid_dir,
        produced=produced,
        errors=errors,
        subjective_quality=subjective,
        manifest_path=manifest_path,
        summary_path=summary_path,
    )
