"""Frame access for the extractor.

A "video" here is a directory of binary 8-bit PGM frames (``P5``),
played in sorted filename order.  That keeps the null pipeline free of
codec dependencies while exercising every contract that matters:
decoding can fail mid-stream (truncated frame), frames carry real pixel
data, and boxes can be burned into copies for the disappearance
protocol.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np


class VideoDecodeError(RuntimeError):
    """The video (or one of its frames) could not be decoded."""


@dataclass(frozen=True)
class Frame:
    """One decoded grayscale frame."""

    index: int
    pixels: np.ndarray  # uint8, shape (height, width)


def _read_pgm(path: Path) -> np.ndarray:
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise VideoDecodeError(f"{path}: cannot read frame: {exc}") from exc
    if not raw.startswith(b"P5"):
        raise VideoDecodeError(f"{path}: not a binary PGM (P5) file")
    # Header: magic, width, height, maxval -- whitespace separated, with
    # optional '#' comment lines -- then one whitespace byte of padding.
    fields: list[int] = []
    pos = 2
    while len(fields) < 3:
        while pos < len(raw) and raw[pos : pos + 1].isspace():
            pos += 1
        if pos < len(raw) and raw[pos : pos + 1] == b"#":
            while pos < len(raw) and raw[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(raw) and not raw[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise VideoDecodeError(f"{path}: malformed PGM header")
        try:
            fields.append(int(raw[start:pos]))
        except ValueError:
            raise VideoDecodeError(f"{path}: malformed PGM header") from None
    pos += 1  # the single whitespace byte after maxval
    width, height, maxval = fields
    if width <= 0 or height <= 0:
        raise VideoDecodeError(f"{path}: bad PGM dimensions {width}x{height}")
    if not 0 < maxval < 256:
        raise VideoDecodeError(f"{path}: only 8-bit PGM supported (maxval {maxval})")
    payload = raw[pos : pos + width * height]
    if len(payload) < width * height:
        raise VideoDecodeError(
            f"{path}: truncated frame ({len(payload)} of {width * height} pixel bytes)"
        )
    return np.frombuffer(payload, dtype=np.uint8).reshape(height, width)


def decode_frames(video: Path | str) -> list[Frame]:
    """Decode every frame of ``video`` (a directory of PGM files).

    Raises :class:`VideoDecodeError` if the directory is missing, holds
    no frames, or any frame is malformed or truncated.
    """
    video = Path(video)
    if not video.is_dir():
        raise VideoDecodeError(f"{video}: not a directory of frames")
    paths = sorted(p for p in video.iterdir() if p.suffix.lower() == ".pgm")
    if not paths:
        raise VideoDecodeError(f"{video}: no .pgm frames found")
    return [Frame(index=i, pixels=_read_pgm(p)) for i, p in enumerate(paths)]


def draw_box(pixels: np.ndarray, bbox: tuple[float, float, float, float]) -> np.ndarray:
    """Return a copy of ``pixels`` with a 1-px max-intensity box outline.

    ``bbox`` is ``[x, y, w, h]`` in pixel units; the outline is clipped
    to the frame.  Grayscale stands in for the protocol's green box.
    """
    out = np.array(pixels, copy=True)
    h, w = out.shape
    x0 = int(np.clip(round(bbox[0]), 0, w - 1))
    y0 = int(np.clip(round(bbox[1]), 0, h - 1))
    x1 = int(np.clip(round(bbox[0] + bbox[2]), 0, w - 1))
    y1 = int(np.clip(round(bbox[1] + bbox[3]), 0, h - 1))
    out[y0, x0 : x1 + 1] = 255
    out[y1, x0 : x1 + 1] = 255
    out[y0 : y1 + 1, x0] = 255
    out[y0 : y1 + 1, x1] = 255
    return out


def pgm_bytes(pixels: np.ndarray) -> bytes:
    """Serialize a grayscale array as a binary 8-bit PGM file."""
    arr = np.asarray(pixels, dtype=np.uint8)
    height, width = arr.shape
    return b"P5\n%d %d\n255\n" % (width, height) + arr.tobytes()


def write_pgm(path: Path, pixels: np.ndarray) -> None:
    """Write a grayscale array as a binary 8-bit PGM file."""
    path.write_bytes(pgm_bytes(pixels))
