"""Trajectory-vs-reference alignment metrics: ADE and DTW.

DTW dispatches to the compiled Cython kernel when it was built, otherwise
to the pure-Python twin; both produce bit-identical costs.
"""

from __future__ import annotations

import numpy as np

from .model import Trajectory

try:
    from . import _dtw as _kernel

    DTW_BACKEND = "compiled"
except ImportError:  # pragma: no cover - depends on the build environment
    from . import _dtw_py as _kernel

    DTW_BACKEND = "python"


def dtw_backend() -> str:
    """Which DTW kernel is active: 'compiled' or 'python'."""
    return DTW_BACKEND


def dtw_cost(a: np.ndarray, b: np.ndarray) -> float:
    """Unnormalized DTW path cost between two raw (n, 2) arrays."""
    a = np.ascontiguousarray(a, dtype=float)
    b = np.ascontiguousarray(b, dtype=float)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != 2 or b.shape[1] != 2:
        raise ValueError("dtw expects (n, 2) point sequences")
    return float(_kernel.dtw_cost(a, b))


def dtw(generated: Trajectory, reference: Trajectory) -> float:
    """DTW path cost between a generated trajectory and its reference."""
    return dtw_cost(generated.xy, reference.xy)


def ade(generated: Trajectory, reference: Trajectory) -> float:
    """Average displacement error over the common horizon.

    The longer trajectory is truncated to the shorter one's length.
    """
    n = min(len(generated), len(reference))
    diff = generated.xy[:n] - reference.xy[:n]
    return float(np.hypot(diff[:, 0], diff[:, 1]).mean())
