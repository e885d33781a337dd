"""Integral lattices given by Gram matrices, and their automorphisms."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import sympy

from . import linalg
from .enumeration import count_by_norm, enumerate_short
from .errors import LatvacError

LatticeVector = tuple  # coordinates in the lattice basis (ints, or Fractions for Q⊗L)


@dataclass(frozen=True)
class Lattice:
    """A nondegenerate integral lattice.

    ``gram[i][j]`` is ``(e_i, e_j)``.  ``basis_in_parent`` records the basis
    rows in the coordinates of a parent lattice when this lattice was derived
    from one.
    """

    gram: tuple[tuple[int, ...], ...]
    basis_in_parent: tuple[tuple[Fraction, ...], ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if any(len(row) != n for row in g):
            raise LatvacError("Gram matrix is not square")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(i)):
            raise LatvacError("Gram matrix is not symmetric")
        if linalg.det(g) == 0:
            raise LatvacError("Gram matrix is degenerate")
        if self.basis_in_parent is not None:
            b = tuple(tuple(Fraction(x) for x in row) for row in self.basis_in_parent)
            object.__setattr__(self, "basis_in_parent", b)

    @classmethod
    def from_rows(cls, gram: Sequence[Sequence[int]], basis_in_parent=None) -> "Lattice":
        return cls(tuple(tuple(r) for r in gram), basis_in_parent)

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def det(self) -> int:
        return linalg.det(self.gram)

    @cached_property
    def is_positive_definite(self) -> bool:
        return linalg.is_positive_definite(self.gram)

    def inner(self, x: Sequence, y: Sequence):
        return linalg.bilinear(self.gram, x, y)

    def norm(self, x: Sequence):
        return linalg.bilinear(self.gram, x, x)

    def __repr__(self) -> str:
        return f"Lattice(rank={self.rank}, det={self.det})"


@dataclass(frozen=True)
class LatticeAutomorphism:
    """An isometry ``x -> U x`` (column coordinates) of finite order."""

    matrix: tuple[tuple[int, ...], ...]
    order: int

    @classmethod
    def of(cls, lattice: Lattice, matrix: Sequence[Sequence[int]], max_order: int = 10_000):
        u = [[int(x) for x in row] for row in matrix]
        n = lattice.rank
        if len(u) != n or any(len(row) != n for row in u):
            raise LatvacError(f"automorphism must be {n}x{n}")
        g = [list(row) for row in lattice.gram]
        if linalg.matmul(linalg.matmul(linalg.transpose(u), g), u) != g:
            raise LatvacError("matrix is not an isometry of the lattice")
        ident = linalg.identity(n)
        power = u
        order = 1
        while power != ident:
            power = linalg.matmul(power, u)
            order += 1
            if order > max_order:
                raise LatvacError("automorphism does not have finite order")
        return cls(tuple(tuple(r) for r in u), order)

    @classmethod
    def identity(cls, n: int) -> "LatticeAutomorphism":
        return cls(tuple(tuple(r) for r in linalg.identity(n)), 1)

    @classmethod
    def negation(cls, n: int) -> "LatticeAutomorphism":
        m = tuple(tuple(-int(i == j) for j in range(n)) for i in range(n))
        return cls(m, 1 if n == 0 else 2)

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def power(self, k: int) -> "LatticeAutomorphism":
        k %= self.order
        n = self.rank
        m = linalg.identity(n)
        for _ in range(k):
            m = linalg.matmul(m, [list(r) for r in self.matrix])
        order = self.order // _gcd(self.order, k) if k else 1
        return LatticeAutomorphism(tuple(tuple(r) for r in m), order)

    def apply(self, x: Sequence) -> tuple:
        return tuple(linalg.matvec(self.matrix, x))


def _gcd(a, b):
    from math import gcd

    return gcd(a, b)


# -- basic predicates ----------------------------------------------------------


def is_even(lattice: Lattice) -> bool:
    return all(lattice.gram[i][i] % 2 == 0 for i in range(lattice.rank))


def is_self_dual(lattice: Lattice) -> bool:
    return abs(lattice.det) == 1


def dual_basis(lattice: Lattice) -> list[list[Fraction]]:
    """Rows are the coordinates of the dual basis of L^∨ (this is gram^-1)."""
    return linalg.inverse(lattice.gram)


def in_dual(lattice: Lattice, x: Sequence) -> bool:
    return all(Fraction(v).denominator == 1 for v in linalg.matvec(lattice.gram, x))


# -- derived lattices ----------------------------------------------------------


def sublattice(lattice: Lattice, rows: Sequence[Sequence]) -> Lattice:
    """The lattice spanned by ``rows`` (independent, parent coordinates)."""
    g = linalg.congruent(rows, lattice.gram)
    if any(Fraction(x).denominator != 1 for r in g for x in r):
        raise LatvacError("induced Gram matrix is not integral")
    return Lattice(tuple(tuple(int(x) for x in r) for r in g), tuple(tuple(r) for r in rows))


def direct_sum(*lattices: Lattice) -> Lattice:
    n = sum(l.rank for l in lattices)
    g = [[0] * n for _ in range(n)]
    off = 0
    for l in lattices:
        for i in range(l.rank):
            g[off + i][off : off + l.rank] = l.gram[i]
        off += l.rank
    return Lattice.from_rows(g)


def rescale(lattice: Lattice, c) -> Lattice:
    c = Fraction(c)
    if c <= 0:
        raise LatvacError("scale factor must be positive")
    g = [[c * x for x in row] for row in lattice.gram]
    if any(x.denominator != 1 for row in g for x in row):
        raise LatvacError("rescaling not integral")
    return Lattice(tuple(tuple(int(x) for x in row) for row in g), lattice.basis_in_parent)


def _rank0(lattice: Lattice) -> Lattice:
    return Lattice((), ())


def sublattices_M_N(lattice: Lattice, sigma: LatticeAutomorphism) -> tuple[Lattice, Lattice, Lattice]:
    """Return ``(M, N, L^sigma)`` for ``M = (1 - sigma)L``, ``N = L ∩ (M ⊗ Q)``."""
    n = lattice.rank
    u = sigma.matrix
    one_minus = [[int(i == j) - u[i][j] for j in range(n)] for i in range(n)]
    m_rows = linalg.hnf(linalg.transpose(one_minus), n)
    n_rows = linalg.saturate(m_rows, n)
    fixed_rows = linalg.kernel_int([[-x for x in row] for row in one_minus], n)
    out = []
    for rows in (m_rows, n_rows, fixed_rows):
        out.append(sublattice(lattice, rows) if rows else _rank0(lattice))
    return tuple(out)


# -- enumeration -----------------------------------------------------------------


@dataclass(frozen=True)
class _Reduced:
    gram: list
    transform: list  # rows: reduced basis in original coordinates


_reduced_cache: dict = {}


def _reduced(lattice: Lattice) -> _Reduced:
    key = lattice.gram
    hit = _reduced_cache.get(key)
    if hit is None:
        g, t = linalg.lll_gram(lattice.gram)
        hit = _Reduced(g, t)
        if len(_reduced_cache) > 256:
            _reduced_cache.clear()
        _reduced_cache[key] = hit
    return hit


def _require_definite(lattice: Lattice) -> None:
    if not lattice.is_positive_definite:
        raise LatvacError("lattice is not positive definite")


def short_vectors(lattice: Lattice, bound: int) -> list[tuple[int, ...]]:
    """All vectors with norm ``<= bound``, sorted lexicographically."""
    _require_definite(lattice)
    if lattice.rank == 0:
        return [()]
    red = _reduced(lattice)
    tt = linalg.transpose(red.transform)
    out = [tuple(linalg.matvec(tt, y)) for y, _ in enumerate_short(red.gram, bound)]
    out.sort()
    return out


def vectors_of_norm(lattice: Lattice, m: int) -> list[tuple[int, ...]]:
    """All ``x`` with ``(x, x) == m``, lexicographically ordered."""
    if m < 0:
        raise LatvacError("norm must be nonnegative")
    _require_definite(lattice)
    if lattice.rank == 0:
        return [()] if m == 0 else []
    red = _reduced(lattice)
    tt = linalg.transpose(red.transform)
    out = [tuple(linalg.matvec(tt, y)) for y, nrm in enumerate_short(red.gram, m) if nrm == m]
    out.sort()
    return out


def norm_counts(lattice: Lattice, bound: int) -> dict[int, int]:
    """``{norm: number of vectors}`` for norms up to ``bound``."""
    _require_definite(lattice)
    if lattice.rank == 0:
        return {0: 1}
    return dict(sorted(count_by_norm(_reduced(lattice).gram, bound).items()))


def roots(lattice: Lattice) -> list[tuple[int, ...]]:
    return vectors_of_norm(lattice, 2)


def root_sublattice_det(lattice: Lattice, root_list=None) -> int:
    """Determinant of the sublattice generated by the norm-2 vectors (1 if there are none)."""
    rs = roots(lattice) if root_list is None else root_list
    if not rs:
        return 1
    basis = linalg.hnf(rs, lattice.rank)
    return abs(linalg.det(linalg.congruent(basis, lattice.gram)))


# -- automorphism eigenstructure ------------------------------------------------


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def cyclotomic_coeffs(d: int) -> list[int]:
    """Coefficients of the d-th cyclotomic polynomial, highest degree first."""
    x = sympy.Symbol("x")
    return [int(c) for c in sympy.Poly(sympy.cyclotomic_poly(d, x), x).all_coeffs()]


def _poly_at_matrix(coeffs: list[int], u: Sequence[Sequence[int]]) -> list[list[int]]:
    n = len(u)
    acc = [[0] * n for _ in range(n)]
    for c in coeffs:
        acc = linalg.matmul(acc, u)
        for i in range(n):
            acc[i][i] += c
    return acc


def eigenspace_multiplicities(sigma: LatticeAutomorphism) -> dict[int, int]:
    """``{d: dim ker Phi_d(U)}`` over the divisors ``d`` of the order."""
    u = [list(r) for r in sigma.matrix]
    n = sigma.rank
    out = {}
    for d in divisors(sigma.order):
        phi_u = _poly_at_matrix(cyclotomic_coeffs(d), u)
        out[d] = n - linalg.rank(phi_u) if n else 0
    return out


def isometry_condition_even(lattice: Lattice, sigma: LatticeAutomorphism) -> tuple[bool, int | None]:
    """Check ``(a, sigma a) ∈ 2Z`` on basis vectors (additive mod 2 for involutions).

    Returns ``(ok, first failing basis index)``.
    """
    n = lattice.rank
    for i in range(n):
        e = [int(j == i) for j in range(n)]
        if lattice.inner(e, sigma.apply(e)) % 2:
            return False, i
    return True, None
