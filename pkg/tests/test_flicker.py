"""Spectral oracles for the luminance flicker detector.

The periodogram is checked against Parseval's identity and an explicit
O(T^2) discrete Fourier sum; MMP decisions against an independent
re-derivation of the band-concentration rule.
"""

from __future__ import annotations

import numpy as np
import pytest

from drivebench.flicker import MmpConfig, luminance_from_frames, mmp, objective_quality, periodogram, read_pgm
from drivebench.model import LuminanceSeries, ManifestError


def series(values, rate=10.0) -> LuminanceSeries:
    return LuminanceSeries(values=np.asarray(values, dtype=float), rate=rate)


def tone(freq: float, amp: float, base: float = 128.0, n: int = 100, rate: float = 10.0) -> LuminanceSeries:
    t = np.arange(n) / rate
    return series(base + amp * np.sin(2 * np.pi * freq * t), rate=rate)


def direct_dft_power(values: np.ndarray, rate: float):
    """Textbook DFT sum, one-sided, |X_k|^2 / T. Independent of np.fft."""
    t = len(values)
    ks = np.arange(t // 2 + 1)
    n = np.arange(t)
    freqs = ks * rate / t
    power = np.empty(len(ks))
    for idx, k in enumerate(ks):
        angle = -2.0 * np.pi * k * n / t
        re = float(np.sum(values * np.cos(angle)))
        im = float(np.sum(values * np.sin(angle)))
        power[idx] = (re * re + im * im) / t
    return freqs, power


def mmp_oracle(values: np.ndarray, rate: float, cfg: MmpConfig) -> int:
    """Re-derivation of the decision rule on the direct DFT."""
    freqs, power = direct_dft_power(values, rate)
    p = power[1:]
    f = freqs[1:]
    if not np.any(p >= cfg.epsilon):
        return 1
    f_star = f[int(np.argmax(p))]
    if f_star < cfg.low_cut_hz:
        return 1
    in_band = np.abs(f - f_star) < cfg.band_hz
    a = p[in_band].sum() / (p.sum() + cfg.epsilon)
    return 1 if a < cfg.thr else 0


def test_periodogram_needs_eight_samples():
    with pytest.raises(ValueError, match="8 samples"):
        periodogram(series(np.full(7, 100.0)))


def test_periodogram_matches_direct_dft(rng):
    values = 100.0 + 20.0 * rng.random(64)
    s = series(values)
    freqs, power = periodogram(s)
    oracle_freqs, oracle_power = direct_dft_power(s.values, s.rate)
    assert np.allclose(freqs, oracle_freqs, atol=1e-12)
    assert np.allclose(power, oracle_power, rtol=1e-9, atol=1e-6)


def test_periodogram_parseval(rng):
    """Two-sided non-DC power equals T * population variance."""
    for n in (64, 100, 101):
        values = 120.0 + 15.0 * rng.random(n)
        freqs, power = periodogram(series(values))
        twosided = 2.0 * power[1:].sum()
        if n % 2 == 0:
            twosided -= power[-1]  # the Nyquist bin appears once
        assert twosided == pytest.approx(n * values.var(), rel=1e-9)


def test_periodogram_tone_peak_location():
    freqs, power = periodogram(tone(2.0, 5.0))
    assert freqs[np.argmax(power[1:]) + 1] == pytest.approx(2.0)


def test_mmp_constant_series_passes():
    assert mmp(series(np.full(100, 77.0))) == 1


def test_mmp_slow_drift_passes():
    assert mmp(tone(0.1, 3.0)) == 1


def test_mmp_two_hz_flicker_fails():
    assert mmp(tone(2.0, 5.0)) == 0
    assert objective_quality(tone(2.0, 5.0)) == 0.0


def test_mmp_dc_offset_invariance_exact():
    cases = [tone(2.0, 5.0, base=100.0), tone(0.1, 3.0, base=100.0), series(np.full(100, 50.0))]
    for s in cases:
        shifted = series(s.values + 37.0, rate=s.rate)
        assert mmp(s) == mmp(shifted)


def test_mmp_diffuse_spectrum_passes(rng):
    """Power spread over many far-apart tones leaves every band below thr."""
    t = np.arange(200) / 10.0
    values = 128.0
    for f in np.arange(0.3, 5.0, 0.2):
        values = values + 0.8 * np.sin(2 * np.pi * f * t + f)
    s = series(values)
    cfg = MmpConfig(band_hz=0.05)
    assert mmp(s, cfg) == mmp_oracle(s.values, s.rate, cfg) == 1


def test_mmp_grid_agrees_with_direct_spectral_oracle():
    """20 synthetic cases x the independent oracle: 100% agreement."""
    cfg = MmpConfig()
    frequencies = [0.1, 0.3, 0.7, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 4.9]
    amplitudes = [0.0, 4.0]
    decisions = []
    for amp in amplitudes:
        for freq in frequencies:
            s = tone(freq, amp)
            got = mmp(s, cfg)
            want = mmp_oracle(s.values, s.rate, cfg)
            assert got == want, f"disagreement at f={freq}, amp={amp}"
            decisions.append(got)
    # Zero-amplitude tones are constants (pass); real tones pass only below low_cut.
    assert decisions[:10] == [1] * 10
    assert decisions[10:] == [1] + [0] * 9


def test_mmp_epsilon_floor_blocks_noise_triggered_peaks():
    values = np.full(128, 64.0)
    values[0] += 1e-7  # a single sub-epsilon wiggle
    assert mmp(series(values)) == 1


def test_mmp_config_validation():
    with pytest.raises(ValueError):
        MmpConfig(band_hz=0.0)
    with pytest.raises(ValueError, match="Nyquist"):
        MmpConfig(low_cut_hz=5.0, rate=10.0)


def _write_pgm(path, pixels: np.ndarray, comment: bool = False) -> None:
    h, w = pixels.shape
    header = b"P5\n"
    if comment:
        header += b"# synthetic test frame\n"
    header += f"{w} {h}\n255\n".encode()
    path.write_bytes(header + pixels.astype(np.uint8).tobytes())


def test_read_pgm_roundtrip(tmp_path, rng):
    pixels = rng.integers(0, 256, (12, 9), dtype=np.uint8)
    path = tmp_path / "frame.pgm"
    _write_pgm(path, pixels, comment=True)
    got = read_pgm(path)
    assert got.shape == (12, 9)
    assert np.array_equal(got, pixels)


def test_read_pgm_matches_independent_decoder(tmp_path, rng):
    PIL = pytest.importorskip("PIL.Image")
    pixels = rng.integers(0, 256, (16, 16), dtype=np.uint8)
    path = tmp_path / "frame.pgm"
    _write_pgm(path, pixels)
    with PIL.open(path) as img:
        reference = np.asarray(img)
    assert np.array_equal(read_pgm(path), reference)


def test_read_pgm_rejects_other_formats(tmp_path):
    path = tmp_path / "frame.pgm"
    path.write_bytes(b"P2\n2 2\n255\n0 1 2 3\n")
    with pytest.raises(ManifestError, match="P5"):
        read_pgm(path)


def test_luminance_from_frames_sorted_means(tmp_path):
    for i, value in enumerate([10, 200, 30]):
        _write_pgm(tmp_path / f"{i:04d}.pgm", np.full((4, 4), value, dtype=np.uint8))
    s = luminance_from_frames(tmp_path, rate=10.0)
    assert np.allclose(s.values, [10.0, 200.0, 30.0])
    assert s.rate == 10.0


def test_luminance_from_frames_empty_dir(tmp_path):
    with pytest.raises(ManifestError, match="no .pgm"):
        luminance_from_frames(tmp_path)
