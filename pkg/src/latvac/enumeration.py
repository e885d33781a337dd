"""Short-vector enumeration in positive definite integral lattices.

Two routes share one coordinate convention (coefficient vectors in the
lattice basis, norm ``x^T G x``):

* :func:`enumerate_short` is the exact Fincke-Pohst recursion.  The
  completing-the-square decomposition is kept fraction free: with leading
  minors ``d_k`` and Bareiss rows ``A``, ``Q(x) = sum_k z_k^2 / (d_{k-1} d_k)``
  where ``z_k = sum_{j>=k} A[k][j] x_j`` is an integer.  All bounds are
  integer comparisons.
* :func:`count_by_norm` tallies vectors per norm without materialising them.
  Large inputs go to a compiled kernel which prunes in binary64 with a
  widened bound and decides every leaf by its exact int64 norm.
"""

from __future__ import annotations

import math
from math import isqrt
from typing import Iterator, Sequence

import numpy as np

from .linalg import lcm, leading_minors

_COMPILED_THRESHOLD = 200_000  # estimated leaves above which the kernel is used


def _bareiss_rows(gram: Sequence[Sequence[int]]) -> list[list[int]]:
    n = len(gram)
    a = [[int(x) for x in row] for row in gram]
    rows = [list(a[0])]
    prev = 1
    for k in range(n - 1):
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * akk - aik * a[k][j]) // prev
        prev = akk
        rows.append(list(a[k + 1]))
    return rows


def enumerate_short(
    gram: Sequence[Sequence[int]],
    bound: int,
    shift: Sequence[int] | None = None,
    modulus: int = 1,
) -> Iterator[tuple[tuple[int, ...], int]]:
    """Yield ``(y, norm)`` for integer ``y`` with ``y^T G y <= bound``.

    With ``shift`` and ``modulus`` only vectors with ``y ≡ shift (mod modulus)``
    coordinatewise are produced; this enumerates a coset ``(shift + modulus*Z^n)``
    and is how rational cosets ``mu + L`` are handled after scaling.
    The gram matrix must be positive definite.
    """
    n = len(gram)
    if n == 0:
        yield (), 0
        return
    minors = leading_minors(gram)
    if any(d <= 0 for d in minors):
        raise ValueError("lattice is not positive definite")
    delta = [1] + minors  # delta[k] = leading minor of size k
    rows = _bareiss_rows(gram)
    weight_den = [delta[k] * delta[k + 1] for k in range(n)]
    big_p = lcm(*weight_den)
    weight = [big_p // w for w in weight_den]
    total = bound * big_p
    if shift is None:
        shift = [0] * n
    res = [int(s) % modulus for s in shift]

    y = [0] * n

    def rec(k: int, budget: int):
        a_k = rows[k]
        s = 0
        for j in range(k + 1, n):
            s += a_k[j] * y[j]
        dk = delta[k + 1]
        wk = weight[k]
        t = isqrt(budget // wk)
        lo = -((t + s) // dk)  # ceil((-t - s) / dk)
        hi = (t - s) // dk
        if modulus != 1:
            lo += (res[k] - lo) % modulus
        for v in range(lo, hi + 1, modulus):
            z = dk * v + s
            rem = budget - wk * z * z
            if rem < 0:
                continue
            y[k] = v
            if k == 0:
                yield tuple(y), (total - rem) // big_p
            else:
                yield from rec(k - 1, rem)
        y[k] = 0

    yield from rec(n - 1, total)


def count_by_norm_exact(gram, bound: int, shift=None, modulus: int = 1) -> dict[int, int]:
    counts: dict[int, int] = {}
    for _, norm in enumerate_short(gram, bound, shift, modulus):
        counts[norm] = counts.get(norm, 0) + 1
    return counts


def _estimated_count(gram, bound: int) -> float:
    """Volume heuristic for the number of lattice points of norm <= bound."""
    n = len(gram)
    d = abs(float(np.linalg.det(np.asarray(gram, dtype=float))))
    ball = math.pi ** (n / 2) / math.gamma(n / 2 + 1) * bound ** (n / 2)
    return ball / math.sqrt(d)


def count_by_norm(gram, bound: int) -> dict[int, int]:
    """Number of lattice vectors of each norm ``<= bound`` (keys are norms)."""
    if len(gram) == 0:
        return {0: 1}
    if _estimated_count(gram, bound) < _COMPILED_THRESHOLD:
        return count_by_norm_exact(gram, bound)
    return _count_compiled(gram, bound)


# -- compiled kernel ---------------------------------------------------------


def _count_compiled(gram, bound: int) -> dict[int, int]:
    from ._kernel import count_short_vectors

    g = np.asarray(gram, dtype=np.int64)
    if np.abs(g).max() * len(gram) ** 2 * bound > 2**40:
        # keeps every intermediate exact-norm product far inside int64
        return count_by_norm_exact(gram, bound)
    chol = np.linalg.cholesky(g.astype(float)).T  # upper triangular, G = R^T R
    diag = np.diag(chol) ** 2
    mu = chol / np.diag(chol)[:, None]
    counts = count_short_vectors(g, mu, diag, int(bound))
    return {int(k): int(c) for k, c in enumerate(counts) if c}
