"""Shared fixtures: a synthetic sample video and engine access.

The metric engine is exercised strictly through its public command
line, never imported, so these tests hold the extractor to the same
interchange contract any external producer faces.
"""

from __future__ import annotations

import subprocess
import sys
from pathlib import Path

import pytest

from video_fixture import SUPPORTED_METRICS, write_sample_video


@pytest.fixture()
def sample_video(tmp_path: Path) -> Path:
    return write_sample_video(tmp_path / "video01")


@pytest.fixture()
def engine_validate():
    """Run the engine's manifest validation CLI on an emitted bundle."""

    def run(manifest: Path, metrics: str = SUPPORTED_METRICS) -> subprocess.CompletedProcess:
        return subprocess.run(
            [
                sys.executable,
                "-m",
                "drivebench.cli",
                "validate",
                "--manifest",
                str(manifest),
                "--metrics",
                metrics,
            ],
            capture_output=True,
            text=True,
        )

    return run
