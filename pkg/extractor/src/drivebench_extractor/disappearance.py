"""The fixed three-frame disappearance protocol.

For each tracked agent that vanishes before the video ends, exactly
three frames are assembled and shown to a vision-language judge:

1. the first frame where the agent is visible (its box drawn),
2. the last frame where it is visible (its box drawn),
3. the first frame after it vanishes (no box).

The judge answers with one word -- ``Natural`` or ``Unnatural`` -- and
both the raw response and the parsed verdict are kept for audit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .adapters import AdapterError, Tracklet
from .frames import Frame, draw_box

#: The fixed judging prompt.  Changing a word changes the protocol.
DISAPPEARANCE_PROMPT = (
    "Given three frames around the moment a green-boxed object disappears, "
    "classify the disappearance as Natural (e.g., occlusion or leaving the "
    "field of view) or Unnatural (abrupt or non-physical). Base your "
    "decision on visual and motion continuity and interactions with nearby "
    "objects. Output one word: Natural or Unnatural."
)


@dataclass(frozen=True)
class ProtocolFrame:
    """One of the three assembled frames."""

    frame_index: int
    boxed: bool
    pixels: np.ndarray


def assemble_protocol_frames(
    tracklet: Tracklet, frames: Sequence[Frame]
) -> tuple[ProtocolFrame, ProtocolFrame, ProtocolFrame] | None:
    """Assemble the protocol's three frames for one tracklet.

    Returns ``None`` when the agent is still visible in the final frame
    (it never disappears, so there is nothing to judge).
    """
    if not tracklet.frames:
        raise AdapterError(f"agent {tracklet.agent_id!r} has no observations")
    first_visible = tracklet.frames[0]
    last_visible = tracklet.frames[-1]
    after_vanish = last_visible + 1
    if after_vanish >= len(frames):
        return None
    if not 0 <= first_visible <= last_visible:
        raise AdapterError(f"agent {tracklet.agent_id!r} has out-of-order observations")
    return (
        ProtocolFrame(first_visible, True, draw_box(frames[first_visible].pixels, tracklet.boxes[0])),
        ProtocolFrame(last_visible, True, draw_box(frames[last_visible].pixels, tracklet.boxes[-1])),
        ProtocolFrame(after_vanish, False, np.array(frames[after_vanish].pixels, copy=True)),
    )


def parse_verdict(response: str) -> str:
    """Map a raw one-word response onto the verdict enum."""
    word = response.strip().strip(".").capitalize()
    if word not in ("Natural", "Unnatural"):
        raise AdapterError(f"judge answered {response!r}, expected 'Natural' or 'Unnatural'")
    return word


@dataclass(frozen=True)
class ProtocolRun:
    """One judged tracklet: the assembled frames and the audit row."""

    frames: tuple[ProtocolFrame, ProtocolFrame, ProtocolFrame]
    row: dict


def judge_tracklet(
    tracklet: Tracklet, frames: Sequence[Frame], vlm: Callable[[str, Sequence[np.ndarray]], str]
) -> ProtocolRun | None:
    """Run the protocol on one tracklet; ``None`` if it never vanishes.

    The audit row keeps the prompt, the judge's raw response, and the
    parsed verdict side by side.
    """
    assembled = assemble_protocol_frames(tracklet, frames)
    if assembled is None:
        return None
    response = vlm(DISAPPEARANCE_PROMPT, [p.pixels for p in assembled])
    row = {
        "agent_id": tracklet.agent_id,
        "frames": [p.frame_index for p in assembled],
        "boxed": [p.boxed for p in assembled],
        "prompt": DISAPPEARANCE_PROMPT,
        "response": response,
        "verdict": parse_verdict(response),
    }
    return ProtocolRun(frames=assembled, row=row)
