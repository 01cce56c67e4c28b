"""Luminance flicker detection via the mean-luminance periodogram.

A video whose frame-mean luminance concentrates its spectral power in a
narrow band around a dominant frequency is flagged as flickering
(MMP = 0); diffuse or slow-drift spectra pass (MMP = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .model import LuminanceSeries, ManifestError


@dataclass(frozen=True)
class MmpConfig:
    """Band width, decision threshold and spectral floor for MMP."""

    band_hz: float = 0.5
    thr: float = 0.05
    low_cut_hz: float = 0.2
    epsilon: float = 1e-8
    rate: float = 10.0

    def __post_init__(self):
        for name in ("band_hz", "thr", "low_cut_hz", "epsilon", "rate"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be positive and finite")
        if self.low_cut_hz >= self.rate / 2.0:
            raise ValueError("low_cut_hz must lie below the Nyquist frequency")


def periodogram(series: LuminanceSeries) -> tuple[np.ndarray, np.ndarray]:
    """One-sided periodogram of a luminance series.

    Returns (frequencies in Hz, power |X(f)|^2 / T).  No detrending or
    windowing is applied; the DC bin is included.
    """
    if len(series) < 8:
        raise ValueError(f"periodogram needs at least 8 samples, got {len(series)}")
    values = series.values
    spectrum = np.fft.rfft(values)
    power = np.abs(spectrum) ** 2 / len(values)
    freqs = np.fft.rfftfreq(len(values), d=1.0 / series.rate)
    return freqs, power


def mmp(series: LuminanceSeries, config: MmpConfig | None = None) -> int:
    """Mean-luminance periodogram pass flag: 1 = clean, 0 = flicker.

    The dominant non-DC frequency f* is located; if the fraction of
    non-DC power inside |f - f*| < band_hz reaches ``thr`` the video is
    flagged.  Near-constant series and slow drifts (f* below
    ``low_cut_hz``) pass outright.
    """
    config = config or MmpConfig()
    freqs, power = periodogram(series)
    nondc = freqs > 0.0
    nondc_power = power[nondc]
    nondc_freqs = freqs[nondc]
    if not np.any(nondc_power >= config.epsilon):
        return 1
    peak = int(np.argmax(nondc_power))
    f_star = float(nondc_freqs[peak])
    if f_star < config.low_cut_hz:
        return 1
    band = np.abs(nondc_freqs - f_star) < config.band_hz
    concentration = float(nondc_power[band].sum() / (nondc_power.sum() + config.epsilon))
    return 1 if concentration < config.thr else 0


def objective_quality(series: LuminanceSeries, config: MmpConfig | None = None) -> float:
    """Objective quality of one video: its MMP flag as a float."""
    return float(mmp(series, config))


def read_pgm(path: Path | str) -> np.ndarray:
    """Read a binary 8-bit PGM (P5) image as a (h, w) uint8 array."""
    data = Path(path).read_bytes()
    pos = 0
    fields: list[int] = []

    def next_token() -> bytes:
        nonlocal pos
        while pos < len(data):
            if data[pos : pos + 1].isspace():
                pos += 1
            elif data[pos : pos + 1] == b"#":
                while pos < len(data) and data[pos : pos + 1] not in (b"\n", b"\r"):
                    pos += 1
            else:
                break
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        return data[start:pos]

    magic = next_token()
    if magic != b"P5":
        raise ManifestError(f"not a binary PGM (P5) file: {path}")
    try:
        for _ in range(3):
            fields.append(int(next_token()))
    except ValueError as exc:
        raise ManifestError(f"malformed PGM header: {path}") from exc
    width, height, maxval = fields
    if width < 1 or height < 1 or not 0 < maxval < 256:
        raise ManifestError(f"unsupported PGM dimensions or depth: {path}")
    pos += 1  # single whitespace byte separates header from pixel data
    pixels = np.frombuffer(data, dtype=np.uint8, count=width * height, offset=pos)
    if len(pixels) != width * height:
        raise ManifestError(f"truncated PGM pixel data: {path}")
    return pixels.reshape(height, width)


def luminance_from_frames(directory: Path | str, rate: float = 10.0) -> LuminanceSeries:
    """Build a luminance series from a directory of PGM frames.

    Frames are taken in sorted filename order; each contributes its pixel
    mean.
    """
    directory = Path(directory)
    frames = sorted(p for p in directory.iterdir() if p.suffix.lower() == ".pgm")
    if not frames:
        raise ManifestError(f"no .pgm frames found in {directory}")
    values = [float(read_pgm(p).mean()) for p in frames]
    return LuminanceSeries(values=np.array(values), rate=rate)
