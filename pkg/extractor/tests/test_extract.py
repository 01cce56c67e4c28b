"""Extraction pipeline tests: schema validity, determinism, atomicity."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from drivebench_extractor.adapters import (
    LUMINANCE_ADAPTERS,
    REGISTRY,
    null_adapter_names,
    pooled_pixel_vector,
)
from drivebench_extractor.cli import main
from drivebench_extractor.extract import OUTPUTS, ExtractorConfig, extract, parse_config

from video_fixture import HEIGHT, N_FRAMES, WIDTH, frame_pixels

ALL_OUTPUTS = ",".join(OUTPUTS)


def read_jsonl(path: Path) -> list[dict]:
    return [json.loads(line) for line in path.read_text().splitlines() if line.strip()]


def test_null_extraction_passes_engine_validation(sample_video, tmp_path, engine_validate):
    assert N_FRAMES == 10
    result = extract(sample_video, OUTPUTS, tmp_path / "out")
    assert result.errors == {}
    assert result.manifest_path is not None

    proc = engine_validate(result.manifest_path)
    assert proc.returncode == 0, proc.stderr
    assert "validation clean" in proc.stdout
    assert proc.stderr.strip() == ""  # zero validation entries, notes included


def test_luminance_matches_independent_decoder(sample_video, tmp_path):
    Image = pytest.importorskip("PIL.Image")
    result = extract(sample_video, ["luminance"], tmp_path / "out")
    rows = read_jsonl(result.out_dir / "luminance.jsonl")
    assert [row["frame"] for row in rows] == list(range(N_FRAMES))
    for row, frame_path in zip(rows, sorted(sample_video.iterdir())):
        with Image.open(frame_path) as img:
            independent = float(np.asarray(img, dtype=np.float64).mean())
        assert abs(row["mean_luminance"] - independent) <= 1e-6


def test_two_runs_are_byte_identical(sample_video, tmp_path):
    extract(sample_video, OUTPUTS, tmp_path / "a")
    extract(sample_video, OUTPUTS, tmp_path / "b")
    files_a = sorted(p.relative_to(tmp_path / "a") for p in (tmp_path / "a").rglob("*") if p.is_file())
    files_b = sorted(p.relative_to(tmp_path / "b") for p in (tmp_path / "b").rglob("*") if p.is_file())
    assert files_a == files_b and files_a
    for rel in files_a:
        assert (tmp_path / "a" / rel).read_bytes() == (tmp_path / "b" / rel).read_bytes(), rel


def test_features_are_downsampled_raw_pixels(sample_video, tmp_path):
    result = extract(sample_video, ["features"], tmp_path / "out", ExtractorConfig(grid=4))
    rows = read_jsonl(result.out_dir / "frame_features.jsonl")
    assert len(rows) == N_FRAMES
    # 24x32 frames split exactly into a 4x4 grid of 6x8 blocks.
    for row in rows:
        pixels = frame_pixels(row["frame"])
        expected = [
            float(pixels[gy * 6 : gy * 6 + 6, gx * 8 : gx * 8 + 8].mean())
            for gy in range(4)
            for gx in range(4)
        ]
        assert row["feature"] == expected
    flow_rows = read_jsonl(result.out_dir / "flow.jsonl")
    assert [r["frame"] for r in flow_rows] == list(range(1, N_FRAMES))
    assert all(r["median_flow"] == 0.0 for r in flow_rows)


def test_embedding_is_mean_of_frame_vectors(sample_video, tmp_path):
    result = extract(sample_video, ["embedding"], tmp_path / "out")
    rows = read_jsonl(result.out_dir / "video_embedding.jsonl")
    assert len(rows) == 1
    stacked = np.array([pooled_pixel_vector(frame_pixels(i), 4) for i in range(N_FRAMES)])
    assert rows[0]["feature"] == [float(v) for v in stacked.mean(axis=0)]


def test_trajectory_is_marked_incomplete_not_fabricated(sample_video, tmp_path):
    result = extract(sample_video, ["trajectory"], tmp_path / "out")
    rows = read_jsonl(result.out_dir / "trajectory.jsonl")
    assert len(rows) == 2  # only what the null adapter can honestly claim
    assert rows[0]["incomplete"] is True
    assert rows[0]["target_len"] == N_FRAMES
    assert all("heading" in row for row in rows)
    assert rows[1]["t"] == pytest.approx(0.1)


def test_agents_null_adapter_reports_no_agents(sample_video, tmp_path):
    result = extract(sample_video, ["agents"], tmp_path / "out")
    assert (result.out_dir / "agents.jsonl").read_bytes() == b""


def test_truncated_video_records_error_without_partial_files(sample_video, tmp_path):
    truncated = b"P5\n%d %d\n255\n" % (WIDTH, HEIGHT) + frame_pixels(7).tobytes()[: WIDTH * 3]
    (sample_video / "frame0007.pgm").write_bytes(truncated)
    out = tmp_path / "out"
    code = main(["--video", str(sample_video), "--outputs", ALL_OUTPUTS, "--out", str(out)])
    assert code == 2
    summary = json.loads((out / sample_video.name / "extraction.json").read_text())
    for name in OUTPUTS:
        assert "truncated frame" in summary["outputs"][name]["error"]
    leftovers = [p for p in out.rglob("*") if p.is_file() and p.name != "extraction.json"]
    assert leftovers == []  # no partial artifacts, no temp files


def test_adapter_failure_keeps_remaining_outputs(sample_video, tmp_path, monkeypatch):
    def boom(frames):
        raise RuntimeError("backbone weights missing")

    monkeypatch.setitem(LUMINANCE_ADAPTERS, "boom", boom)
    config = ExtractorConfig(adapters={**null_adapter_names(), "luminance": "boom"})
    result = extract(sample_video, ["luminance", "features", "subjective"], tmp_path / "out", config)
    assert result.errors == {"luminance": "backbone weights missing"}
    assert sorted(result.produced) == ["features", "subjective"]
    assert not (result.out_dir / "luminance.jsonl").exists()
    manifest = json.loads(result.manifest_path.read_text())
    files = manifest["videos"][0]["files"]
    assert "luminance" not in files
    assert files["frame_features"] == "frame_features.jsonl"


def test_missing_video_records_error_per_output(tmp_path):
    result = extract(tmp_path / "nope", ["luminance", "features"], tmp_path / "out")
    assert sorted(result.errors) == ["features", "luminance"]
    assert all("not a directory of frames" in msg for msg in result.errors.values())
    assert result.produced == {}
    assert result.manifest_path is None


def test_unknown_output_rejected(sample_video, tmp_path):
    with pytest.raises(ValueError, match="unknown output 'optical'"):
        extract(sample_video, ["optical"], tmp_path / "out")
    with pytest.raises(ValueError, match="no outputs requested"):
        extract(sample_video, [], tmp_path / "out")


def test_subjective_score_lands_in_manifest(sample_video, tmp_path):
    result = extract(sample_video, ["subjective", "luminance"], tmp_path / "out")
    manifest = json.loads(result.manifest_path.read_text())
    score = manifest["videos"][0]["subjective_quality"]
    assert 0.0 <= score <= 1.0
    assert score == result.subjective_quality
    lum = [row["mean_luminance"] for row in read_jsonl(result.out_dir / "luminance.jsonl")]
    assert score == pytest.approx(1.0 / (1.0 + np.std(lum)))


def test_every_slot_has_a_null_adapter():
    names = null_adapter_names()
    assert set(names) == set(REGISTRY)
    for slot, name in names.items():
        assert name in REGISTRY[slot]
    # every requestable output resolves to registry slots
    needed = {"luminance", "features", "trajectory", "agents", "embedding", "subjective", "vlm"}
    assert needed <= set(REGISTRY)


def test_config_file_round_trip(tmp_path):
    cfg_path = tmp_path / "x.cfg"
    cfg_path.write_text(
        "# extractor overrides\n"
        "rate = 20\n"
        "grid = 2\n"
        "model_id = wayfarer\n"
        "track = EgoConditioned\n"
        "luminance_adapter = pixel-mean\n"
        "vlm_weights = weights/judge.bin\n"
        "out_dir = extracted\n"
    )
    config = parse_config(cfg_path)
    assert config.rate == 20.0
    assert config.grid == 2
    assert config.model_id == "wayfarer"
    assert config.track == "EgoConditioned"
    assert config.adapters["luminance"] == "pixel-mean"
    assert config.weights == {"vlm": "weights/judge.bin"}
    assert config.out_dir == "extracted"


def test_out_dir_falls_back_to_config(sample_video, tmp_path):
    config = ExtractorConfig(out_dir=str(tmp_path / "from_config"))
    result = extract(sample_video, ["luminance"], config=config)
    assert result.out_dir == tmp_path / "from_config" / sample_video.name
    assert (result.out_dir / "luminance.jsonl").is_file()
    with pytest.raises(ValueError, match="no output directory"):
        extract(sample_video, ["luminance"])


def test_config_rejects_bad_input(tmp_path):
    bad_key = tmp_path / "bad.cfg"
    bad_key.write_text("rate = 10\nwheels = 4\n")
    with pytest.raises(ValueError, match=r"bad\.cfg:2: unknown config key 'wheels'"):
        parse_config(bad_key)
    bad_adapter = tmp_path / "ad.cfg"
    bad_adapter.write_text("luminance_adapter = resnet\n")
    with pytest.raises(ValueError, match="names no available adapter 'resnet'"):
        parse_config(bad_adapter)
    with pytest.raises(ValueError, match="track must be one of"):
        ExtractorConfig(track="Freeway")
    with pytest.raises(ValueError, match="rate must be positive"):
        ExtractorConfig(rate=0.0)
    with pytest.raises(ValueError, match="weights name unknown adapter slot"):
        ExtractorConfig(weights={"wheels": "w.bin"})


def test_cli_full_run(sample_video, tmp_path, capsys):
    out = tmp_path / "out"
    code = main(["--video", str(sample_video), "--outputs", ALL_OUTPUTS, "--out", str(out)])
    captured = capsys.readouterr()
    assert code == 0
    assert captured.out.strip().endswith("manifest.json")
    assert "luminance: ok luminance.jsonl" in captured.err


def test_cli_rejects_unknown_output(sample_video, tmp_path, capsys):
    code = main(["--video", str(sample_video), "--outputs", "luminance,optical", "--out", str(tmp_path / "o")])
    assert code == 1
    assert "error: unknown output 'optical'" in capsys.readouterr().err


def test_cli_version():
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
