# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled dynamic-time-warping kernel.

Mirrors drivebench._dtw_py.dtw_cost operation for operation so both
backends return bit-identical sums: Euclidean step cost sqrt(dx*dx+dy*dy),
cost + min(three predecessors), rolling rows over the shorter side.
"""

from libc.math cimport sqrt
from libc.stdlib cimport free, malloc


def dtw_cost(const double[:, ::1] a, const double[:, ::1] b):
    """Unnormalized DTW path cost between two (n, 2) point sequences."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t m = b.shape[0]
    if n == 0 or m == 0:
        raise ValueError("dtw needs non-empty point sequences")
    if a.shape[1] != 2 or b.shape[1] != 2:
        raise ValueError("dtw expects (n, 2) point sequences")
    cdef const double[:, ::1] p = a
    cdef const double[:, ::1] q = b
    cdef Py_ssize_t swap
    if m > n:
        p = b
        q = a
        swap = n
        n = m
        m = swap
    cdef double *prev = <double *> malloc(m * sizeof(double))
    cdef double *curr = <double *> malloc(m * sizeof(double))
    if prev == NULL or curr == NULL:
        free(prev)
        free(curr)
        raise MemoryError()
    cdef double *hold
    cdef double dx, dy, c, best
    cdef Py_ssize_t i, j
    dx = p[0, 0] - q[0, 0]
    dy = p[0, 1] - q[0, 1]
    prev[0] = sqrt(dx * dx + dy * dy)
    for j in range(1, m):
        dx = p[0, 0] - q[j, 0]
        dy = p[0, 1] - q[j, 1]
        prev[j] = sqrt(dx * dx + dy * dy) + prev[j - 1]
    for i in range(1, n):
        dx = p[i, 0] - q[0, 0]
        dy = p[i, 1] - q[0, 1]
        curr[0] = sqrt(dx * dx + dy * dy) + prev[0]
        for j in range(1, m):
            dx = p[i, 0] - q[j, 0]
            dy = p[i, 1] - q[j, 1]
            c = sqrt(dx * dx + dy * dy)
            best = prev[j - 1]
            if prev[j] < best:
                best = prev[j]
            if curr[j - 1] < best:
                best = curr[j - 1]
            curr[j] = c + best
        hold = prev
        prev = curr
        curr = hold
    c = prev[m - 1]
    free(prev)
    free(curr)
    return c
