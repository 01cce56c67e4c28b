"""Seeded synthetic fixture: three models of graded quality on two tracks.

The fixture fabricates every artifact the engine ingests — trajectories,
luminance, frame features, flow, agents, embeddings — for a dominant
model ("cruiser"), a middling one ("wobbler") and a weak one
("jitterbug"), constructed so the dominant model wins every metric on
every track by a comfortable margin.  Generation is fully determined by
the seed, so repeated generation is byte-identical.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from . import manifest as mf
from .model import AgentTrack, FrameFeatures, LuminanceSeries, Trajectory

RATE = 10.0
N_STEPS = 100
N_VIDEOS = 4
N_REFS = 8
FEATURE_DIM = 16
AGENT_DIM = 8
EMBED_DIM = 8

MODELS = ("cruiser", "wobbler", "jitterbug")

# speed base / slow amp / noise, yaw amp / noise, ego offset scale / noise,
# feature drift, agent drift, embedding shift, unnatural exits, flicker videos
_STYLE = {
    "cruiser": dict(
        base=8.0, amp=0.3, noise=0.0, yaw=0.02, yaw_noise=0.0,
        offset=0.15, pos_noise=0.0, feat_drift=0.02, agent_drift=0.01,
        shift=0.3, unnatural=0, flicker=0, subjective=0.85,
    ),
    "wobbler": dict(
        base=6.0, amp=2.0, noise=0.1, yaw=0.15, yaw_noise=0.02,
        offset=2.0, pos_noise=0.05, feat_drift=0.15, agent_drift=0.08,
        shift=2.0, unnatural=2, flicker=2, subjective=0.60,
    ),
    "jitterbug": dict(
        base=4.0, amp=2.5, noise=0.8, yaw=0.30, yaw_noise=0.15,
        offset=6.0, pos_noise=0.30, feat_drift=0.45, agent_drift=0.30,
        shift=5.0, unnatural=3, flicker=4, subjective=0.35,
    ),
}

_REF_STYLE = dict(base=7.5, amp=0.4, noise=0.0, yaw=0.03, yaw_noise=0.0)


def _integrate(rng: np.random.Generator, style: dict, phase: float) -> Trajectory:
    """Integrate a speed/yaw profile into a trajectory."""
    t = np.arange(N_STEPS) / RATE
    dt = 1.0 / RATE
    speed = style["base"] + style["amp"] * np.sin(2 * np.pi * 0.3 * t + phase)
    if style["noise"]:
        speed = speed + style["noise"] * rng.standard_normal(N_STEPS)
    speed = np.clip(speed, 0.2, None)
    yaw = style["yaw"] * np.sin(2 * np.pi * 0.1 * t + phase)
    if style["yaw_noise"]:
        yaw = yaw + style["yaw_noise"] * rng.standard_normal(N_STEPS)
    heading = np.cumsum(yaw) * dt + phase / 4.0
    vel = np.column_stack([speed * np.cos(heading), speed * np.sin(heading)])
    xy = np.vstack([[0.0, 0.0], np.cumsum(vel[:-1] * dt, axis=0)])
    return Trajectory(times=t, xy=xy, rate=RATE)


def _ego_generation(rng: np.random.Generator, reference: Trajectory, style: dict, phase: float) -> Trajectory:
    """A model's attempt at following a conditioning trajectory."""
    t = reference.times
    wave = 2 * np.pi * 0.08 * np.asarray(t) + phase
    offset = style["offset"] * np.column_stack([np.sin(wave), np.cos(wave) - math.cos(phase)])
    xy = reference.xy + offset
    if style["pos_noise"]:
        xy = xy + style["pos_noise"] * rng.standard_normal(xy.shape)
    return Trajectory(times=t, xy=xy, rate=RATE)


def _luminance(video_index: int, flickering: bool) -> LuminanceSeries:
    t = np.arange(N_STEPS) / RATE
    values = 120.0 + 3.0 * np.sin(2 * np.pi * 0.1 * t)
    if flickering:
        values = values + 5.0 * np.sin(2 * np.pi * (1.8 + 0.1 * video_index) * t)
    return LuminanceSeries(values=values, rate=RATE)


def _rotating_features(dim: int, n: int, step: float) -> np.ndarray:
    theta = step * np.arange(n)
    feats = np.zeros((n, dim))
    feats[:, 0] = np.cos(theta)
    feats[:, 1] = np.sin(theta)
    return feats


def _frame_features(style: dict, video_index: int) -> FrameFeatures:
    step = style["feat_drift"] * (1.0 + 0.05 * video_index)
    feats = _rotating_features(FEATURE_DIM, N_STEPS, step)
    return FrameFeatures(
        frames=np.arange(N_STEPS),
        features=feats,
        flow_frames=np.arange(1, N_STEPS),
        flow=np.full(N_STEPS - 1, 8.0),
    )


def _agents(style: dict, video_index: int, unnatural: bool) -> tuple[AgentTrack, ...]:
    from .model import Verdict

    step = style["agent_drift"] * (1.0 + 0.05 * video_index)
    tracks = []
    for a, (first, last) in enumerate(((0, 19), (30, 49))):
        frames = np.arange(first, last + 1)
        feats = _rotating_features(AGENT_DIM, len(frames), step * (1.0 + 0.1 * a))
        boxes = np.column_stack(
            [10.0 + frames, np.full(len(frames), 20.0), np.full(len(frames), 30.0), np.full(len(frames), 40.0)]
        )
        verdict = Verdict.UNNATURAL if (unnatural and a == 0) else Verdict.NATURAL
        tracks.append(
            AgentTrack(agent_id=f"agent-{a}", frames=frames, boxes=boxes, features=feats, verdict=verdict)
        )
    return tuple(tracks)


def _write_video(
    root: Path,
    rel_dir: str,
    trajectory: Trajectory,
    luminance: LuminanceSeries,
    features: FrameFeatures,
    agents: tuple[AgentTrack, ...],
    embedding: np.ndarray,
) -> dict[str, str]:
    directory = root / rel_dir
    files = {
        "trajectory": f"{rel_dir}/trajectory.jsonl",
        "luminance": f"{rel_dir}/luminance.jsonl",
        "frame_features": f"{rel_dir}/frame_features.jsonl",
        "flow": f"{rel_dir}/flow.jsonl",
        "agents": f"{rel_dir}/agents.jsonl",
        "video_embedding": f"{rel_dir}/embedding.jsonl",
    }
    mf.write_jsonl(directory / "trajectory.jsonl", mf.trajectory_rows(trajectory))
    mf.write_jsonl(directory / "luminance.jsonl", mf.luminance_rows(luminance))
    feat_rows, flow_rows = mf.frame_feature_rows(features)
    mf.write_jsonl(directory / "frame_features.jsonl", feat_rows)
    mf.write_jsonl(directory / "flow.jsonl", flow_rows)
    mf.write_jsonl(directory / "agents.jsonl", mf.agent_rows(agents))
    mf.write_jsonl(directory / "embedding.jsonl", [{"feature": [float(x) for x in embedding]}])
    return files


def _write_manifest(path: Path, tracks: list[dict], videos: list[dict]) -> None:
    doc = {
        "schema": mf.MANIFEST_SCHEMA,
        "tracks": tracks,
        "models": [{"model_id": m} for m in MODELS],
        "videos": videos,
    }
    path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def generate_fixture(out_dir: Path | str, seed: int = 7) -> dict[str, Path]:
    """Write the synthetic benchmark into ``out_dir``.

    Returns the manifest paths keyed by 'OpenDomain', 'EgoConditioned'
    and 'all'.
    """
    root = Path(out_dir)
    root.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)

    track_entries: dict[str, dict] = {}
    videos_by_track: dict[str, list[dict]] = {"OpenDomain": [], "EgoConditioned": []}

    # Per-track reference data: embeddings plus example trajectories.
    ref_mu = {}
    for track, slug in (("OpenDomain", "open"), ("EgoConditioned", "ego")):
        ref_dir = f"ref/{slug}"
        mu = rng.normal(0.0, 1.0, EMBED_DIM)
        ref_mu[track] = mu
        rows = [
            {"feature": [float(x) for x in mu + 0.2 * rng.standard_normal(EMBED_DIM)]}
            for _ in range(N_REFS)
        ]
        mf.write_jsonl(root / ref_dir / "embeddings.jsonl", rows)
        traj_paths = []
        for i in range(N_REFS):
            traj = _integrate(rng, _REF_STYLE, phase=0.7 * i)
            rel = f"{ref_dir}/traj_{i:03d}.jsonl"
            mf.write_jsonl(root / rel, mf.trajectory_rows(traj))
            traj_paths.append(rel)
        track_entries[track] = {
            "name": track,
            "reference": {"video_embeddings": f"{ref_dir}/embeddings.jsonl", "trajectories": traj_paths},
        }

    # Shared conditioning trajectories for the ego track, one per video slot.
    conditioning = []
    for i in range(N_VIDEOS):
        traj = _integrate(rng, _REF_STYLE, phase=0.3 + 0.5 * i)
        rel = f"conditioning/ref_{i:03d}.jsonl"
        mf.write_jsonl(root / rel, mf.trajectory_rows(traj))
        conditioning.append((traj, rel))

    shift_dir = rng.normal(0.0, 1.0, EMBED_DIM)
    shift_dir /= np.linalg.norm(shift_dir)

    for model in MODELS:
        style = _STYLE[model]
        for track, slug in (("OpenDomain", "open"), ("EgoConditioned", "ego")):
            for v in range(N_VIDEOS):
                video_id = f"{slug}/{model}/{v:03d}"
                phase = 0.9 * v + (0.2 if slug == "ego" else 0.0)
                if slug == "open":
                    trajectory = _integrate(rng, style, phase=phase)
                    reference_rel = None
                else:
                    ref_traj, reference_rel = conditioning[v]
                    trajectory = _ego_generation(rng, ref_traj, style, phase=phase)
                luminance = _luminance(v, flickering=v < style["flicker"])
                features = _frame_features(style, v)
                agents = _agents(style, v, unnatural=v < style["unnatural"])
                embedding = ref_mu[track] + style["shift"] * shift_dir + 0.2 * rng.standard_normal(EMBED_DIM)
                files = _write_video(
                    root, f"videos/{video_id}", trajectory, luminance, features, agents, embedding
                )
                if reference_rel is not None:
                    files["reference_trajectory"] = reference_rel
                videos_by_track[track].append(
                    {
                        "video_id": video_id,
                        "model_id": model,
                        "track": track,
                        "files": files,
                        "subjective_quality": round(style["subjective"] + 0.002 * v, 6),
                    }
                )

    paths = {}
    for track, name in (("OpenDomain", "manifest_open.json"), ("EgoConditioned", "manifest_ego.json")):
        path = root / name
        _write_manifest(path, [track_entries[track]], videos_by_track[track])
        paths[track] = path
    all_path = root / "manifest_all.json"
    _write_manifest(
        all_path,
        [track_entries["OpenDomain"], track_entries["EgoConditioned"]],
        videos_by_track["OpenDomain"] + videos_by_track["EgoConditioned"],
    )
    paths["all"] = all_path
    return paths
