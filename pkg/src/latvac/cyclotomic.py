"""Exact arithmetic in Z[zeta_N] (and Z[zeta_N][1/m] by keeping denominators aside).

Elements are integer numpy arrays of length N holding coefficients on
``1, zeta, ..., zeta^(N-1)`` modulo ``x^N - 1``.  The representation is not
unique; equality is decided by reducing the difference modulo the N-th
cyclotomic polynomial.  Matrices are arrays of shape ``(k, k, N)``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import sympy

from .linalg import lcm


@lru_cache(maxsize=None)
def _phi_coeffs(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first."""
    x = sympy.Symbol("x")
    return tuple(int(c) for c in reversed(sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()))


def zero(n: int) -> np.ndarray:
    return np.zeros(n, dtype=np.int64)


def root(n: int, k: int, coeff: int = 1) -> np.ndarray:
    """``coeff * zeta_n^k``."""
    a = zero(n)
    a[k % n] = coeff
    return a


def from_phases(n: int, exponents) -> np.ndarray:
    """``sum_j zeta_n^{e_j}`` for integer exponents ``e_j``."""
    a = zero(n)
    np.add.at(a, np.asarray(list(exponents), dtype=np.int64) % n, 1)
    return a


def mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = len(a)
    full = np.convolve(a, b)
    out = full[:n].copy()
    out[: len(full) - n] += full[n:]
    return out


def lift(a: np.ndarray, m: int) -> np.ndarray:
    """Embed ``a`` from Q(zeta_n) into Q(zeta_m), n | m."""
    n = len(a)
    if m % n:
        raise ValueError("target field does not contain the source")
    out = zero(m)
    out[:: m // n] = a
    return out


def is_zero(a: np.ndarray) -> bool:
    n = len(a)
    phi = _phi_coeffs(n)
    deg = len(phi) - 1
    rem = [int(x) for x in a]
    for d in range(n - 1, deg - 1, -1):
        c = rem[d]
        if c:
            for i, p in enumerate(phi):
                rem[d - deg + i] -= c * p
    return not any(rem[:deg])


def equal(a: np.ndarray, b: np.ndarray) -> bool:
    return is_zero(a - b)


def sqrt_conductor(m: int) -> int:
    """Smallest N (multiple of 8) with sqrt(m) in Q(zeta_N)."""
    n = 8
    for p in sympy.factorint(m):
        if p != 2:
            n = lcm(n, p)
    return n


def sqrt_int(m: int, n: int) -> np.ndarray:
    """The positive square root of ``m >= 1`` as an element of Z[zeta_n]."""
    if n % sqrt_conductor(m):
        raise ValueError(f"sqrt({m}) is not in Q(zeta_{n})")
    out = root(n, 0)
    for p, e in sympy.factorint(m).items():
        k, odd = divmod(e, 2)
        out = out * p**k
        if not odd:
            continue
        if p == 2:
            s = root(n, n // 8) + root(n, -(n // 8))  # zeta8 + zeta8^-1
        else:
            # quadratic Gauss sum g = sum zeta_p^{x^2}: g = sqrt p (p = 1 mod 4) or i sqrt p
            step = n // p
            g = from_phases(n, (step * x * x for x in range(p)))
            s = g if p % 4 == 1 else mul(g, root(n, -(n // 4)))
        out = mul(out, s)
    return out


def to_complex(a: np.ndarray) -> complex:
    n = len(a)
    return complex(np.sum(a * np.exp(2j * np.pi * np.arange(n) / n)))


# -- matrices ---------------------------------------------------------------


def mat_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of (k, k, N) matrices over Z[zeta_N]."""
    k, _, n = a.shape
    prod = np.einsum("ils,ljt->ijst", a, b)
    out = np.zeros((k, b.shape[1], n), dtype=np.int64)
    idx = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    for r in range(n):
        mask = idx == r
        out[:, :, r] = prod[:, :, mask].sum(axis=2)
    return out


def mat_scale(a: np.ndarray, c: np.ndarray) -> np.ndarray:
    return np.stack([[mul(a[i, j], c) for j in range(a.shape[1])] for i in range(a.shape[0])])


def mat_equal(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and all(
        is_zero(a[i, j] - b[i, j]) for i in range(a.shape[0]) for j in range(a.shape[1])
    )


def field_for(*denominators: int) -> int:
    return lcm(*[d for d in denominators if d]) if denominators else 1

