"""Shared generators and brute-force oracles for the test suite."""

import itertools
import math
import random
from fractions import Fraction

import numpy as np
from hypothesis import strategies as st

from latvac.lattice import Lattice


def random_even_gram(rng: random.Random, n: int, off: int = 2) -> list[list[int]]:
    """Strictly diagonally dominant even Gram matrix (hence positive definite)."""
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            g[i][j] = g[j][i] = rng.randint(-off, off)
    for i in range(n):
        s = sum(abs(g[i][j]) for j in range(n) if j != i)
        g[i][i] = 2 * (s // 2 + 1) + 2 * rng.randint(0, 1)
    return g


@st.composite
def even_grams(draw, max_rank=4, off=2):
    n = draw(st.integers(1, max_rank))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_even_gram(random.Random(seed), n, off)


def box_vectors(gram, bound: int):
    """All integer x with x^T G x <= bound, by scanning a box (no cleverness)."""
    g = np.array(gram, dtype=float)
    lam = float(np.linalg.eigvalsh(g).min())
    r = int(math.floor(math.sqrt(bound / lam) + 1e-9))
    n = len(gram)
    out = []
    for x in itertools.product(range(-r, r + 1), repeat=n):
        nrm = sum(gram[i][j] * x[i] * x[j] for i in range(n) for j in range(n))
        if nrm <= bound:
            out.append((x, nrm))
    return out


def box_counts(gram, bound: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for _, nrm in box_vectors(gram, bound):
        out[nrm] = out.get(nrm, 0) + 1
    return dict(sorted(out.items()))


def dual_quotient_q_values(gram) -> list[Fraction]:
    """q-values of L^dual/L: close the columns of G^-1 under addition mod Z^n."""
    import sympy

    n = len(gram)
    inv = sympy.Matrix(gram).inv()
    gens = [tuple(Fraction(int(inv[i, j].p), int(inv[i, j].q)) % 1 for i in range(n)) for j in range(n)]
    zero = tuple(Fraction(0) for _ in range(n))
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple((u + v) % 1 for u, v in zip(x, g))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    out = []
    for x in seen:
        nrm = sum(gram[i][j] * x[i] * x[j] for i in range(n) for j in range(n))
        out.append((nrm / 2) % 1)
    return sorted(out)


def lattice_of(gram) -> Lattice:
    return Lattice.from_rows(gram)
