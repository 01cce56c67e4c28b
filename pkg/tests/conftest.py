"""End-of-run acceptance summary hook and common fixtures."""

from __future__ import annotations

import sys

import numpy as np
import pytest


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Print one ``[acceptance] <criterion>: PASS|FAIL`` line per executed
    acceptance criterion, outside output capture."""
    module = next(
        (m for name, m in sys.modules.items() if name.rpartition(".")[2] == "test_acceptance"),
        None,
    )
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for name, verdict in results:
            terminalreporter.write_line(f"[acceptance] {name}: {verdict}")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)
