"""Kneser neighbors of even self dual lattices."""

from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg
from .discform import FinQuadForm, from_gram
from .errors import LatvacError
from .enumeration import enumerate_short
from .lattice import (
    _reduced,
    Lattice,
    is_even,
    is_self_dual,
    root_sublattice_det,
    roots,
    sublattice,
    vectors_of_norm,
)

CASE_2MOD4 = "CASE_2MOD4"
CASE_0MOD4 = "CASE_0MOD4"

EXPECTED_Q = {
    CASE_2MOD4: sorted([Fraction(0), Fraction(1, 4), Fraction(0), Fraction(3, 4)]),
    CASE_0MOD4: sorted([Fraction(0), Fraction(0), Fraction(0), Fraction(1, 2)]),
}


def _require_even_unimodular(lattice: Lattice) -> None:
    if not (is_even(lattice) and is_self_dual(lattice)):
        raise LatvacError("lattice must be even and self dual")


def _as_int_vector(lattice: Lattice, b: Sequence) -> list[int]:
    if len(b) != lattice.rank:
        raise LatvacError(f"vector must have {lattice.rank} coordinates")
    v = [Fraction(x) for x in b]
    if any(x.denominator != 1 for x in v):
        raise LatvacError("b must lie in L (integer coordinates)")
    return [int(x) for x in v]


def sublattice_Lb(lattice: Lattice, b: Sequence) -> Lattice:
    """``{x in L : (b, x) even}``, an index-2 sublattice."""
    _require_even_unimodular(lattice)
    b = _as_int_vector(lattice, b)
    f = [x % 2 for x in linalg.matvec(lattice.gram, b)]
    if not any(f):
        raise LatvacError("b in 2L: L_b would equal L")
    n = lattice.rank
    p = f.index(1)
    gens = [[2 * int(j == p) for j in range(n)]]
    for i in range(n):
        if i != p:
            gens.append([int(j == i) + (int(j == p) if f[i] else 0) for j in range(n)])
    lb = sublattice(lattice, linalg.hnf(gens, n))
    assert abs(lb.det) == 4
    return lb


def adjust_b(lattice: Lattice, b: Sequence) -> list[int]:
    """Replace ``b`` by ``b + 2x`` (first basis vector with ``(b, x)`` odd) when ``b^2 = 4 mod 8``."""
    b = _as_int_vector(lattice, b)
    if lattice.norm(b) % 8 != 4:
        return b
    gb = linalg.matvec(lattice.gram, b)
    i = next(i for i, x in enumerate(gb) if x % 2)
    out = list(b)
    out[i] += 2
    return out


def _first_odd_basis_vector(lattice: Lattice, b: Sequence[int]) -> list[int]:
    gb = linalg.matvec(lattice.gram, b)
    i = next(i for i, x in enumerate(gb) if x % 2)
    return [int(j == i) for j in range(lattice.rank)]


@dataclass(frozen=True)
class LbClass:
    tag: str
    form: FinQuadForm
    table: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]  # rows {0, x}, columns {0, b/2}
    b: tuple[int, ...]  # b after the mod-8 adjustment


def classify_Lb(lattice: Lattice, b: Sequence) -> LbClass:
    lb = sublattice_Lb(lattice, b)
    b = _as_int_vector(lattice, b)
    tag = CASE_2MOD4 if lattice.norm(b) % 4 == 2 else CASE_0MOD4
    if tag == CASE_0MOD4:
        b = adjust_b(lattice, b)
    form = from_gram(lb)
    x = _first_odd_basis_vector(lattice, b)
    half_b = [Fraction(v, 2) for v in b]

    def qv(v):
        val = Fraction(lattice.norm(v), 2)
        return val - (val.numerator // val.denominator)

    table = (
        (Fraction(0), qv(half_b)),
        (qv(x), qv([u + v for u, v in zip(x, half_b)])),
    )
    values = sorted(form.q_values())
    if form.size != 4 or values != EXPECTED_Q[tag] or sorted(table[0] + table[1]) != values:
        raise LatvacError(f"discriminant form of L_b does not match the {tag} table")
    return LbClass(tag, form, table, tuple(b))


def neighbor(lattice: Lattice, b: Sequence) -> Lattice:
    """The neighbor ``L_b + Z b/2`` (after adjusting ``b`` modulo 8)."""
    _require_even_unimodular(lattice)
    b = _as_int_vector(lattice, b)
    if lattice.norm(b) % 4:
        raise LatvacError("b^2 is not 0 mod 4: the neighbor would simply recover the original lattice")
    b = adjust_b(lattice, b)
    lb = sublattice_Lb(lattice, b)
    rows = [list(r) for r in lb.basis_in_parent] + [[Fraction(x, 2) for x in b]]
    basis = linalg.hnf_rational(rows)
    out = sublattice(lattice, basis)
    if not (is_even(out) and is_self_dual(out)):
        raise LatvacError("neighbor construction failed to produce an even self dual lattice")
    if all(x.denominator == 1 for r in basis for x in r):
        raise LatvacError("neighbor coincides with L")
    return out


# -- search -------------------------------------------------------------------------


@dataclass(frozen=True)
class Fingerprint:
    b: tuple[int, ...]
    root_count: int
    root_det: int


def fingerprint(lattice: Lattice) -> tuple[int, int]:
    rs = roots(lattice)
    return len(rs), root_sublattice_det(lattice, rs)


def _class_maps(lattice: Lattice):
    red = _reduced(lattice)
    tt = linalg.transpose(red.transform)
    return red, tt, [[int(x) for x in r] for r in linalg.inverse(tt)]


def class_representative(lattice: Lattice, c: Sequence[int], bound: int = 8, _maps=None):
    """Shortest (then lexicographically first) vector of ``c + 2L`` with norm ``<= bound``."""
    red, tt, tt_inv = _maps or _class_maps(lattice)
    # x = T^T y, so the class of y is (T^T)^-1 c mod 2
    cy = [v % 2 for v in linalg.matvec(tt_inv, c)]
    found = []
    for lim in sorted({min(4, bound), bound}):  # short classes are settled by the cheap pass
        found = [(nrm, y) for y, nrm in enumerate_short(red.gram, lim, shift=cy, modulus=2) if nrm]
        if found:
            break
    if not found:
        return None
    m = min(nrm for nrm, _ in found)
    xs = np.array([y for nrm, y in found if nrm == m], dtype=object) @ np.array(tt, dtype=object).T
    return min(tuple(int(v) for v in row) for row in xs)


SCAN_FACTOR = 64  # classes of L/2L examined per requested candidate, at most


def candidate_vectors(lattice: Lattice, budget: int) -> list[tuple[int, ...]]:
    """Admissible ``b`` of norm 4 or 8, one per class of ``L/2L``.

    The neighbor depends only on ``b mod 2L``.  Classes are scanned in binary
    counting order of their coordinates mod 2 (bit i = coordinate i); a class
    is admissible when ``b^2 = 0 mod 4`` and it has a representative of norm at
    most 8, represented by its shortest, then lexicographically first, vector.
    Classes of minimal norm 4 and of minimal norm 8 are queued separately and
    merged alternately (4 first), so a small budget still samples both kinds.
    """
    if budget <= 0:
        return []
    n = lattice.rank
    g = lattice.gram
    queues: dict[int, list] = {4: [], 8: []}
    limit = min(2**n - 1, SCAN_FACTOR * budget + 256)
    maps = _class_maps(lattice)
    for key in range(1, limit + 1):
        if all(len(q) >= budget for q in queues.values()):
            break
        c = [key >> i & 1 for i in range(n)]
        if linalg.bilinear(g, c, c) % 4:
            continue
        rep = class_representative(lattice, c, _maps=maps)
        if rep is not None:
            queues[lattice.norm(rep)].append(rep)
    out = []
    for i in range(max(len(q) for q in queues.values())):
        for m in (4, 8):
            if i < len(queues[m]):
                out.append(queues[m][i])
    return out[:budget]


def _search_one(args):
    gram, b = args
    nb = neighbor(Lattice(gram), b)
    return fingerprint(nb)


def thread_count() -> int:
    raw = os.environ.get("LATVAC_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    return max(1, n) if raw else 1


def neighbor_search(lattice: Lattice, budget: int) -> list[Fingerprint]:
    _require_even_unimodular(lattice)
    if not lattice.is_positive_definite:
        raise LatvacError("lattice is not positive definite")
    cands = candidate_vectors(lattice, budget)
    jobs = [(lattice.gram, b) for b in cands]
    workers = thread_count()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_search_one, jobs, chunksize=8))
    else:
        results = [_search_one(j) for j in jobs]
    return [Fingerprint(b, rc, rd) for b, (rc, rd) in zip(cands, results)]


def fingerprint_summary(found: Sequence[Fingerprint]) -> Counter:
    return Counter((f.root_count, f.root_det) for f in found)
