"""Pure-Python DTW kernel, the fallback when the compiled one is absent.

Every arithmetic step matches drivebench._dtw exactly (same costs, same
additions in the same order), so switching backends never changes a
result, only its speed.
"""

from __future__ import annotations

from math import sqrt


def dtw_cost(a, b) -> float:
    """Unnormalized DTW path cost between two (n, 2) point sequences."""
    n, m = len(a), len(b)
    if n == 0 or m == 0:
        raise ValueError("dtw needs non-empty point sequences")
    if a.shape[1] != 2 or b.shape[1] != 2:
        raise ValueError("dtw expects (n, 2) point sequences")
    if m > n:
        a, b = b, a
        n, m = m, n
    px = a[:, 0].tolist()
    py = a[:, 1].tolist()
    qx = b[:, 0].tolist()
    qy = b[:, 1].tolist()
    dx = px[0] - qx[0]
    dy = py[0] - qy[0]
    prev = [0.0] * m
    prev[0] = sqrt(dx * dx + dy * dy)
    for j in range(1, m):
        dx = px[0] - qx[j]
        dy = py[0] - qy[j]
        prev[j] = sqrt(dx * dx + dy * dy) + prev[j - 1]
    for i in range(1, n):
        xi = px[i]
        yi = py[i]
        dx = xi - qx[0]
        dy = yi - qy[0]
        curr = [0.0] * m
        curr[0] = sqrt(dx * dx + dy * dy) + prev[0]
        for j in range(1, m):
            dx = xi - qx[j]
            dy = yi - qy[j]
            c = sqrt(dx * dx + dy * dy)
            best = prev[j - 1]
            if prev[j] < best:
                best = prev[j]
            if curr[j - 1] < best:
                best = curr[j - 1]
            curr[j] = c + best
        prev = curr
    return prev[m - 1]
