"""Adapter-based artifact extractor for the drivebench metric engine.

Turns a raw video into the interchange files the engine consumes
(luminance, frame features, optical flow, agent tracks, embeddings,
trajectories) through pluggable per-output adapters.  Deterministic
"null" adapters are bundled for every output so the full pipeline runs
without any learned backbone.
"""

from .adapters import AdapterError, null_adapter_names
from .disappearance import DISAPPEARANCE_PROMPT, assemble_protocol_frames
from .extract import ExtractionResult, ExtractorConfig, OUTPUTS, extract
from .frames import Frame, VideoDecodeError, decode_frames

__all__ = [
    "AdapterError",
    "DISAPPEARANCE_PROMPT",
    "ExtractionResult",
    "ExtractorConfig",
    "Frame",
    "OUTPUTS",
    "VideoDecodeError",
    "assemble_protocol_frames",
    "decode_frames",
    "extract",
    "null_adapter_names",
]

__version__ = "0.1.0"
