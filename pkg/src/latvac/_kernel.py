"""Compiled short-vector counter (numba)."""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def count_short_vectors(g, mu, diag, bound):
    """Count integer vectors by exact norm ``x^T g x <= bound``.

    ``mu``/``diag`` describe ``Q(x) = sum_i diag[i] (x_i + sum_{j>i} mu[i, j] x_j)^2``
    and are used only to prune, against a bound widened by a small slack.  The
    norm recorded for each leaf is accumulated in int64 from ``g`` and is exact.
    Only one of each pair ``±x`` is visited (first nonzero coordinate from the
    top is positive); the result is symmetrised before returning.
    """
    n = g.shape[0]
    counts = np.zeros(bound + 1, np.int64)
    x = np.zeros(n, np.int64)
    hi = np.zeros(n, np.int64)
    center = np.zeros(n)
    remain = np.zeros(n + 1)
    tail = np.zeros(n + 1, np.int64)
    remain[n] = bound + 1e-7 * (bound + 1)

    k = n - 1
    c = 0.0
    r = math.sqrt(remain[n] / diag[k])
    center[k] = 0.0
    x[k] = 0
    hi[k] = math.floor(r)
    while True:
        if x[k] > hi[k]:
            k += 1
            if k == n:
                break
            x[k] += 1
            continue
        y = x[k] - center[k]
        remain[k] = remain[k + 1] - diag[k] * y * y
        s = 0
        for j in range(k + 1, n):
            s += g[k, j] * x[j]
        tail[k] = tail[k + 1] + 2 * x[k] * s + g[k, k] * x[k] * x[k]
        if k == 0:
            nrm = tail[0]
            if nrm <= bound:
                counts[nrm] += 1
            x[0] += 1
            continue
        k -= 1
        c = 0.0
        for j in range(k + 1, n):
            c -= mu[k, j] * x[j]
        center[k] = c
        rem = remain[k + 1]
        if rem < 0.0:
            rem = 0.0
        r = math.sqrt(rem / diag[k])
        x[k] = math.ceil(c - r)
        if tail[k + 1] == 0 and x[k] < 0:
            x[k] = 0
        hi[k] = math.floor(c + r)
    for m in range(1, bound + 1):
        counts[m] *= 2
    return counts
