"""Acceptance gate: one test per published acceptance criterion.

Each test records one ``[acceptance] <criterion>: PASS|FAIL`` verdict;
the conftest terminal-summary hook prints them at the end of every run,
outside pytest's output capture.  Every oracle here is computed
independently of the library code under test.
"""

from __future__ import annotations

import functools
import json
import math
import time

import numpy as np
import pytest

from drivebench import fixture as fixture_mod
from drivebench.alignment import ade, dtw_cost
from drivebench.config import EngineConfig
from drivebench.consistency import ConsistencyConfig, adaptive_stride, video_consistency
from drivebench.flicker import MmpConfig, mmp
from drivebench.frechet import frechet_distance, psd_sqrt
from drivebench.kinematics import (
    comfort_score,
    curvature_score,
    motion_score,
    profile,
    trajectory_consistency,
    trajectory_quality,
)
from drivebench.manifest import load_manifest_bundle
from drivebench.model import (
    FrameFeatures,
    GaussianMoments,
    LuminanceSeries,
    Trajectory,
)
from drivebench.pose import PoseTrack, complete
from drivebench.report import average_ranks, emit, preflight, run


#: (criterion, verdict) pairs, printed by the conftest terminal-summary hook.
RESULTS: list[tuple[str, str]] = []


def criterion(name: str):
    """Record the per-criterion verdict for the end-of-run summary."""

    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                RESULTS.append((name, "FAIL"))
                raise
            RESULTS.append((name, "PASS"))

        return wrapper

    return decorate


def make_trajectory(xy: np.ndarray, rate: float = 10.0) -> Trajectory:
    xy = np.asarray(xy, dtype=float)
    return Trajectory(times=np.arange(len(xy)) / rate, xy=xy, rate=rate)


# ---------------------------------------------------------------------------
# 1. Gaussian Fréchet distance against the diagonal closed form
# ---------------------------------------------------------------------------


@criterion("frechet distance matches diagonal closed form (abs 1e-8, <1s)")
def test_frechet_diagonal_closed_form():
    rng = np.random.default_rng(2024)
    start = time.perf_counter()
    for _ in range(50):
        d = int(rng.integers(1, 7))
        mu1, mu2 = rng.normal(size=d), rng.normal(size=d)
        s1, s2 = rng.uniform(0.5, 2.0, size=d), rng.uniform(0.5, 2.0, size=d)
        a = GaussianMoments(mean=mu1, cov=np.diag(s1**2))
        b = GaussianMoments(mean=mu2, cov=np.diag(s2**2))
        closed_form = float(np.sum((mu1 - mu2) ** 2) + np.sum((s1 - s2) ** 2))
        got = frechet_distance(a, b, epsilon=1e-12)
        assert got == pytest.approx(closed_form, abs=1e-8), (closed_form, got)
    # Identical moments: distance indistinguishable from zero.
    m = GaussianMoments(mean=mu1, cov=np.diag(s1**2))
    assert frechet_distance(m, m, epsilon=1e-12) < 1e-8
    assert time.perf_counter() - start < 1.0


# ---------------------------------------------------------------------------
# 2. PSD matrix square root reconstruction
# ---------------------------------------------------------------------------


@criterion("psd_sqrt reconstructs 100 random SPD matrices (rel 1e-6, <10s)")
def test_psd_sqrt_reconstruction():
    rng = np.random.default_rng(7)
    start = time.perf_counter()
    for _ in range(100):
        n = int(rng.integers(2, 65))
        a = rng.standard_normal((n, n))
        m = a @ a.T + 0.1 * np.eye(n)
        s = psd_sqrt(m)
        rel = np.linalg.norm(s @ s - m) / np.linalg.norm(m)
        assert rel <= 1e-6, rel
    assert time.perf_counter() - start < 10.0


# ---------------------------------------------------------------------------
# 3. DTW equals brute-force enumeration exactly
# ---------------------------------------------------------------------------


def enumerate_dtw(a: np.ndarray, b: np.ndarray) -> float:
    """Minimum cost over every monotone warping path, accumulated in the
    same association as the DP recurrence (cost + accumulator), so
    agreement is exact rather than approximate."""

    def cost(i: int, j: int) -> float:
        dx = a[i, 0] - b[j, 0]
        dy = a[i, 1] - b[j, 1]
        return math.sqrt(dx * dx + dy * dy)

    best = math.inf

    def walk(i: int, j: int, acc: float) -> None:
        nonlocal best
        acc = cost(i, j) + acc
        if i == len(a) - 1 and j == len(b) - 1:
            best = min(best, acc)
            return
        if i + 1 < len(a):
            walk(i + 1, j, acc)
        if j + 1 < len(b):
            walk(i, j + 1, acc)
        if i + 1 < len(a) and j + 1 < len(b):
            walk(i + 1, j + 1, acc)

    walk(0, 0, 0.0)
    return best


@criterion("dtw equals exhaustive enumeration on 200 random short pairs (exact)")
def test_dtw_exact_vs_enumeration():
    rng = np.random.default_rng(11)
    for _ in range(200):
        n, m = int(rng.integers(1, 7)), int(rng.integers(1, 7))
        a = rng.normal(size=(n, 2))
        b = rng.normal(size=(m, 2))
        assert dtw_cost(a, b) == enumerate_dtw(a, b)


# ---------------------------------------------------------------------------
# 4. ADE translation law
# ---------------------------------------------------------------------------


@criterion("ade of a (3,4)-translated trajectory is 5.0 (abs 1e-12)")
def test_ade_translation_law():
    rng = np.random.default_rng(3)
    base = np.cumsum(rng.normal(scale=0.3, size=(20, 2)), axis=0)
    ref = make_trajectory(base)
    gen = make_trajectory(base + np.array([3.0, 4.0]))
    assert ade(gen, ref) == pytest.approx(5.0, abs=1e-12)


# ---------------------------------------------------------------------------
# 5. Kinematic boundary cases
# ---------------------------------------------------------------------------


@criterion("kinematic boundary cases: static, straight line, R=10 circle")
def test_kinematic_boundary_cases():
    # Static: no motion, comfort and curvature undefined, motion zero.
    static = make_trajectory(np.tile([2.0, 3.0], (40, 1)))
    assert motion_score(static) == 0.0
    assert math.isnan(comfort_score(static))
    assert math.isnan(curvature_score(static))
    assert trajectory_quality(static) == 0.0
    # Constant-velocity straight line: perfect comfort, curvature, consistency.
    line = make_trajectory(np.column_stack([np.arange(40) * 0.5, np.zeros(40)]))
    assert comfort_score(line) == 1.0
    assert curvature_score(line) == 1.0
    assert trajectory_consistency(line) == 1.0
    # Circle of radius 10: curvature score 1/(1 + 0.1) within 2 percent.
    rate, speed, radius = 10.0, 5.0, 10.0
    t = np.arange(200) / rate
    theta = (speed / radius) * t
    circle = make_trajectory(np.column_stack([radius * np.cos(theta), radius * np.sin(theta)]))
    assert curvature_score(circle) == pytest.approx(1.0 / 1.1, rel=0.02)


# ---------------------------------------------------------------------------
# 6. Finite-difference convergence under time-step halving
# ---------------------------------------------------------------------------


@criterion("finite-difference error shrinks >=3.5x when the time step halves")
def test_derivative_convergence_rate():
    def max_interior_velocity_error(rate: float) -> float:
        t = np.arange(int(4 * rate) + 1) / rate
        xy = np.column_stack([np.sin(t), np.cos(0.7 * t)])
        prof = profile(make_trajectory(xy, rate=rate))
        analytic = np.column_stack([np.cos(t), -0.7 * np.sin(0.7 * t)])
        return float(np.max(np.abs(prof.velocity[1:-1] - analytic[1:-1])))

    coarse = max_interior_velocity_error(10.0)
    fine = max_interior_velocity_error(20.0)
    assert coarse / fine >= 3.5, (coarse, fine)


# ---------------------------------------------------------------------------
# 7. Luminance flicker decisions against a direct spectral oracle
# ---------------------------------------------------------------------------


def direct_dft_power(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """O(T^2) one-sided periodogram straight from the DFT definition."""
    x = np.asarray(values, dtype=float)
    big_t = len(x)
    n_bins = big_t // 2 + 1
    power = np.empty(n_bins)
    for k in range(n_bins):
        ang = -2.0 * math.pi * k * np.arange(big_t) / big_t
        re = float(np.sum(x * np.cos(ang)))
        im = float(np.sum(x * np.sin(ang)))
        power[k] = (re * re + im * im) / big_t
    freqs = np.arange(n_bins) * (10.0 / big_t)
    return freqs, power


def mmp_oracle(values: np.ndarray, cfg: MmpConfig) -> int:
    freqs, power = direct_dft_power(values)
    non_dc = power[1:]
    if np.all(non_dc < cfg.epsilon):
        return 1
    k_star = 1 + int(np.argmax(non_dc))
    if freqs[k_star] < cfg.low_cut_hz:
        return 1
    in_band = np.abs(freqs[1:] - freqs[k_star]) < cfg.band_hz
    concentration = float(np.sum(non_dc[in_band]) / (np.sum(non_dc) + cfg.epsilon))
    return 1 if concentration < cfg.thr else 0


@criterion("flicker decisions: constant/drift/flicker plus 20-case spectral grid")
def test_flicker_decisions():
    cfg = MmpConfig()
    rate, big_t = 10.0, 100
    t = np.arange(big_t) / rate

    def series(values):
        return LuminanceSeries(values=np.asarray(values, dtype=float), rate=rate)

    constant = series(np.full(big_t, 128.0))
    drift = series(128.0 + 3.0 * np.sin(2 * math.pi * 0.1 * t))
    flicker = series(128.0 + 6.0 * np.sin(2 * math.pi * 2.0 * t))
    assert mmp(constant, cfg) == 1
    assert mmp(drift, cfg) == 1
    assert mmp(flicker, cfg) == 0
    # DC-offset invariance of the decision.
    shifted = series(flicker.values + 37.0)
    assert mmp(shifted, cfg) == mmp(flicker, cfg)
    assert mmp(series(drift.values + 50.0)) == mmp(drift)
    # 20-case grid: every decision matches the direct-DFT oracle.
    grid_freqs = [0.1, 0.3, 0.7, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 4.9]
    agreements = 0
    for amp in (0.0, 4.0):
        for freq in grid_freqs:
            values = 128.0 + amp * np.sin(2 * math.pi * freq * t)
            got = mmp(series(values), cfg)
            want = mmp_oracle(values, cfg)
            assert got == want, (freq, amp, got, want)
            agreements += 1
    assert agreements == 20


# ---------------------------------------------------------------------------
# 8. Adaptive sampling removes the static-content advantage
# ---------------------------------------------------------------------------


@criterion("static video scores exactly equal to its motion-matched counterpart")
def test_static_video_gains_nothing():
    cfg = ConsistencyConfig()
    step = 0.25
    theta = step * np.arange(10)
    moving_feats = np.zeros((10, 8))
    moving_feats[:, 0] = np.cos(theta)
    moving_feats[:, 1] = np.sin(theta)
    moving = FrameFeatures(
        frames=np.arange(10),
        features=moving_feats,
        flow_frames=np.arange(1, 10),
        flow=np.full(9, 8.0),
    )
    n_static = 8 * 9 + 1
    slow_theta = (step / 8.0) * np.arange(n_static)
    static_feats = np.zeros((n_static, 8))
    static_feats[:, 0] = np.cos(slow_theta)
    static_feats[:, 1] = np.sin(slow_theta)
    static_feats[::8] = moving_feats  # sampled frames replay the moving video
    static = FrameFeatures(
        frames=np.arange(n_static),
        features=static_feats,
        flow_frames=np.arange(1, n_static),
        flow=np.full(n_static - 1, 1.0),
    )
    assert adaptive_stride(static.flow, cfg, n_static) == 8
    assert video_consistency(static, cfg) == video_consistency(moving, cfg)


# ---------------------------------------------------------------------------
# 9. Pose completion: exact prefix, exact zero-jitter line, calibrated jitter
# ---------------------------------------------------------------------------


@criterion("pose completion: byte-exact prefix/zero-jitter, jitter std within 10%")
def test_pose_completion_contract():
    track = PoseTrack(
        times=np.arange(3) / 10.0,
        xy=np.column_stack([np.arange(3) * 0.2, np.zeros(3)]),
        heading=np.zeros(3),
        rate=10.0,
    )
    out = complete(track, target_len=12, jitter_deg=0.5, seed=5)
    assert np.array_equal(out.xy[:3], track.xy)
    assert np.array_equal(out.times[:3], track.times)
    # Zero jitter: exact constant-displacement continuation.
    straight = complete(track, target_len=12, jitter_deg=0.0, seed=5)
    step = track.xy[-1] - track.xy[-2]
    p = track.xy[-1]
    for k in range(3, 12):
        p = p + step
        assert np.array_equal(straight.xy[k], p)
    assert np.array_equal(straight.heading, np.zeros(12))
    # Same seed, same bytes; jitter std calibrated over 10,000 steps.
    again = complete(track, target_len=12, jitter_deg=0.5, seed=5)
    assert np.array_equal(out.xy, again.xy)
    long = complete(track, target_len=10_003, jitter_deg=0.5, seed=99)
    deltas = np.diff(long.heading[2:])
    measured = math.degrees(float(np.std(deltas)))
    assert abs(measured - 0.5) / 0.5 < 0.10, measured


# ---------------------------------------------------------------------------
# 10. Fractional average ranking on a hand-computed table
# ---------------------------------------------------------------------------


@criterion("average ranks on a 3-model table with a tie are exact")
def test_ranking_hand_oracle():
    table = {
        "A": {"fvd": 1.0, "subjective_quality": 0.9, "ftd": 3.0, "objective_quality": 1.0},
        "B": {"fvd": 2.0, "subjective_quality": 0.9, "ftd": 2.0, "objective_quality": 2.0},
        "C": {"fvd": 3.0, "subjective_quality": 0.5, "ftd": 1.0, "objective_quality": 3.0},
    }
    ranks = average_ranks(table, ["fvd", "subjective_quality", "ftd", "objective_quality"])
    assert ranks == {"A": 2.125, "B": 1.875, "C": 2.0}


# ---------------------------------------------------------------------------
# 11. End to end: fixture -> validate -> run, deterministic and fast
# ---------------------------------------------------------------------------


@criterion("end-to-end fixture run: <60s, byte-identical reports, ranks 1/2/3")
def test_end_to_end_fixture_run(tmp_path):
    start = time.perf_counter()
    paths = fixture_mod.generate_fixture(tmp_path / "fixture")
    bundle = load_manifest_bundle(paths["all"])
    _, validation = preflight(bundle, None, EngineConfig())
    assert validation.ok, str(validation)
    report_a = run(paths["all"], seed=0)
    report_b = run(paths["all"], seed=0)
    out_a = emit(report_a, tmp_path / "a")
    out_b = emit(report_b, tmp_path / "b")
    for fmt in ("json", "markdown"):
        assert out_a[fmt].read_bytes() == out_b[fmt].read_bytes()
    doc = json.loads(out_a["json"].read_text())
    for track in ("OpenDomain", "EgoConditioned"):
        assert doc["tracks"][track]["ranks"] == {
            "cruiser": 1.0,
            "wobbler": 2.0,
            "jitterbug": 3.0,
        }
    assert time.perf_counter() - start < 60.0
