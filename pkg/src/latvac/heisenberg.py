"""Finite Heisenberg groups of lattice involutions and the Schur indicator.

For an involution sigma of an even self dual lattice L, put
``M = (1 - sigma)L`` and ``N = L ∩ (M ⊗ Q)``.  ``A = N/M`` is 2-elementary
with commutator form ``B(a, b) = (-1)^{(a, b)}``.  Its central extension by
``±1`` has a unique irreducible module ``X = C[I]`` for a maximal isotropic
``I``.  Elements of A are handled as bitmasks over the generators of A.

Operators on X are monomial: ``rho(a) e_x = i^mu(a) (-1)^{B(j_a, x)} e_{x + i_a}``
where ``a = i_a + j_a`` in a symplectic splitting ``A = I ⊕ J``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg
from .discform import (
    FinQuadForm,
    _F2Form,
    _symplectic_pairs,
    gauss_sum_gamma2,
    is_split,
    quarter_form,
)
from .errors import LatvacError
from .lattice import (
    Lattice,
    LatticeAutomorphism,
    is_even,
    is_self_dual,
    isometry_condition_even,
    sublattices_M_N,
)

SYMMETRIC = "SYMMETRIC"
ALTERNATING = "ALTERNATING"

DENSE_LIMIT = 16  # dim X up to which the dense numeric cross-check runs
FULL_SOLVE_LIMIT = 256  # dim X up to which all dim(X)^2 unknowns are solved


def _pop(x: int) -> int:
    return x.bit_count() & 1


@dataclass
class HeisenbergData:
    form: FinQuadForm  # A = N/M with q(a) = a^2/4
    lift_gram: list[list[int]]  # (g_i, g_j) for the stored lifts in N
    lifts: list[tuple]  # lifts in L-coordinates
    lower: list[int] = field(repr=False)  # bitmask of j < i with (g_i, g_j) odd
    brows: list[int] = field(repr=False)  # bitmask of j with (g_i, g_j) odd

    @property
    def k(self) -> int:
        return self.form.ngens

    @property
    def size(self) -> int:
        return 2**self.k

    def B(self, a: int, c: int) -> int:
        """Exponent (0/1) of ``(-1)^{(a, c)}``."""
        acc = 0
        i = 0
        while a:
            if a & 1:
                acc ^= _pop(self.brows[i] & c)
            a >>= 1
            i += 1
        return acc

    def eps(self, a: int, c: int) -> int:
        """Exponent of ``eps(a, c) = (-1)^{sum_{i>j} a_i c_j (g_i, g_j)}``."""
        acc = 0
        i = 0
        while a:
            if a & 1:
                acc ^= _pop(self.lower[i] & c)
            a >>= 1
            i += 1
        return acc

    def sign(self, a: int) -> int:
        """Exponent of ``(-1)^{a^2/2}`` (well defined mod 4 in ``a^2``)."""
        idx = [i for i in range(self.k) if a >> i & 1]
        norm = sum(self.lift_gram[i][j] for i in idx for j in idx)
        return (norm // 2) & 1


def _check_hypotheses(lattice: Lattice, sigma: LatticeAutomorphism) -> None:
    if not (is_even(lattice) and is_self_dual(lattice)):
        raise LatvacError("lattice must be even and self dual")
    if sigma.order > 2:
        raise LatvacError(f"sigma has order {sigma.order}, not an involution")
    ok, bad = isometry_condition_even(lattice, sigma)
    if not ok:
        raise LatvacError(f"(a, sigma a) is odd for basis vector e_{bad}")


def _check_two_dual(m: Lattice, n: Lattice) -> None:
    """``N = 2 M^∨`` inside ``M ⊗ Q`` (both containments)."""
    if m.rank == 0:
        return
    two_dual = [[2 * x for x in r] for r in linalg.matmul(linalg.inverse(m.gram), m.basis_in_parent)]
    for rows, target in ((n.basis_in_parent, two_dual), (two_dual, n.basis_in_parent)):
        for r in rows:
            c = linalg.solve_rows(target, r)
            if c is None or any(Fraction(x).denominator != 1 for x in c):
                raise LatvacError("N != 2 M^dual")


def build_heisenberg(lattice: Lattice, sigma: LatticeAutomorphism) -> HeisenbergData:
    _check_hypotheses(lattice, sigma)
    m, n, _ = sublattices_M_N(lattice, sigma)
    _check_two_dual(m, n)
    form = quarter_form(n, m)
    if any(d != 2 for d in form.orders):
        raise LatvacError("N/M is not 2-elementary")
    k = form.ngens
    lifts = [tuple(linalg.matvec(linalg.transpose(n.basis_in_parent), v)) for v in form.lifts]
    gl = [[lattice.inner(a, c) for c in lifts] for a in lifts]
    if any(Fraction(x).denominator != 1 for r in gl for x in r):
        raise LatvacError("lifts are not lattice vectors")
    gl = [[int(x) for x in r] for r in gl]
    # a^2 mod 4 must not depend on the lift: shift each lift by the first two basis vectors of M
    for v in lifts:
        for mv in m.basis_in_parent[:2]:
            w = [a + b for a, b in zip(v, mv)]
            if (lattice.norm(w) - lattice.norm(v)) % 4:
                raise LatvacError("a^2 mod 4 depends on the lift")
    lower = [sum(1 << j for j in range(i) if gl[i][j] % 2) for i in range(k)]
    brows = [sum(1 << j for j in range(k) if gl[i][j] % 2) for i in range(k)]
    h = HeisenbergData(form, gl, lifts, lower, brows)
    for i in range(k):
        for j in range(k):
            a, c = 1 << i, 1 << j
            assert h.eps(a, c) ^ h.eps(c, a) == h.B(a, c)
            assert h.B(a, c) == int(form.b_gen[i][j] * 2)
    if not _nondegenerate(h):
        raise LatvacError("B degenerate")
    return h


def _nondegenerate(h: HeisenbergData) -> bool:
    rows = [[h.lift_gram[i][j] % 2 for j in range(h.k)] for i in range(h.k)]
    return _rank_f2(rows) == h.k


def _rank_f2(rows) -> int:
    vecs = [sum(b << j for j, b in enumerate(r)) for r in rows]
    rank = 0
    for bit in range(len(rows[0]) if rows else 0):
        piv = next((v for v in vecs if v >> bit & 1), None)
        if piv is None:
            continue
        vecs.remove(piv)
        vecs = [v ^ piv if v >> bit & 1 else v for v in vecs]
        rank += 1
    return rank


# -- the module X = C[I] -------------------------------------------------------------------


@dataclass
class HeisenbergModule:
    I: list[int]  # basis of I (bitmasks in A)
    J: list[int]  # dual basis of a B-isotropic complement
    split: bool  # I is totally isotropic for q
    gen_mu: list[int]  # mu exponents (mod 4) of the generators
    data: HeisenbergData = field(repr=False)
    _gen_coords: list = field(default_factory=list, repr=False)

    @property
    def dim(self) -> int:
        return 2 ** len(self.I)

    def _coords_direct(self, a: int) -> tuple[int, int]:
        u = v = 0
        for t, (w, f) in enumerate(zip(self.I, self.J)):
            if self.data.B(a, f):
                u |= 1 << t
            if self.data.B(a, w):
                v |= 1 << t
        return u, v

    def coords(self, a: int) -> tuple[int, int]:
        """``(u, v)``: ``a = sum u_s I_s + sum v_t J_t`` (linear, so summed over generator bits)."""
        if not self._gen_coords:
            self._gen_coords = [self._coords_direct(1 << k) for k in range(self.data.k)]
        u = v = 0
        k = 0
        while a:
            if a & 1:
                gu, gv = self._gen_coords[k]
                u ^= gu
                v ^= gv
            a >>= 1
            k += 1
        return u, v

    def c(self, a: int, b: int) -> int:
        """Cocycle exponent of the untwisted operators: ``P(a)P(b) = (-1)^c P(a+b)``."""
        return _pop(self.coords(a)[1] & self.coords(b)[0])

    def all_mu(self) -> list[int]:
        """``mu(a)`` for every a, built along ``a = (a - g_k) + g_k`` with k the lowest bit."""
        h = self.data
        mu = [0] * h.size
        for a in range(1, h.size):
            k = (a & -a).bit_length() - 1
            g = 1 << k
            prev = a ^ g
            mu[a] = (mu[prev] + self.gen_mu[k] + 2 * self.c(prev, g) + 2 * h.eps(prev, g)) % 4
        return mu

    def matrix(self, a: int, mu: int) -> np.ndarray:
        u, v = self.coords(a)
        d = self.dim
        out = np.zeros((d, d), dtype=complex)
        ph = 1j**mu
        for x in range(d):
            out[x ^ u, x] = ph * (-1) ** _pop(v & x)
        return out


def _symplectic_complement(h: HeisenbergData, iso: list[int]) -> list[int]:
    """Vectors f_t with ``B(I_s, f_t) = delta`` and ``B(f_s, f_t) = 0``."""
    k = h.k
    fs = []
    # solve B(I_s, f) = delta_st over F2 by elimination on the k x k system
    rows = [[h.B(w, 1 << j) for j in range(k)] for w in iso]
    for t in range(len(iso)):
        f = _solve_f2(rows, [int(s == t) for s in range(len(iso))], k)
        fs.append(f)
    for i in range(len(fs)):
        for j in range(i):
            if h.B(fs[i], fs[j]):
                fs[i] ^= iso[j]
    return fs


def _solve_f2(rows, rhs, ncols) -> int:
    aug = [sum(b << j for j, b in enumerate(r)) | (rhs[i] << ncols) for i, r in enumerate(rows)]
    pivots = []
    r = 0
    for col in range(ncols):
        p = next((i for i in range(r, len(aug)) if aug[i] >> col & 1), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        for i in range(len(aug)):
            if i != r and aug[i] >> col & 1:
                aug[i] ^= aug[r]
        pivots.append(col)
        r += 1
    if any(row >> ncols & 1 and not row & ((1 << ncols) - 1) for row in aug):
        raise LatvacError("inconsistent F2 system")
    x = 0
    for i, col in enumerate(pivots):
        if aug[i] >> ncols & 1:
            x |= 1 << col
    return x


def _maximal_isotropic(h: HeisenbergData) -> tuple[list[int], bool]:
    split, witness = is_split(h.form)
    if split:
        return [sum(b << i for i, b in enumerate(w)) for w in witness], True
    return [e for e, _ in _symplectic_pairs(_F2Form(h.form))], False


def build_module(h: HeisenbergData) -> HeisenbergModule:
    if h.k % 2:
        raise LatvacError("B degenerate")
    iso, split = _maximal_isotropic(h)
    if len(iso) * 2 != h.k or any(h.B(a, c) for a in iso for c in iso):
        raise LatvacError("B degenerate")
    js = _symplectic_complement(h, iso)
    mod = HeisenbergModule(iso, js, split, [], h)
    for k in range(h.k):
        g = 1 << k
        # mu^2 = eps(g, g) / c(g, g); eps(g, g) = +1 for a single generator
        mod.gen_mu.append(1 if (h.eps(g, g) ^ mod.c(g, g)) else 0)
    return mod


def verify_representation(mod: HeisenbergModule, mu: list[int] | None = None, sample: int = 64) -> bool:
    """``rho(a) rho(g) = eps(a, g) rho(a + g)`` on generator pairs and a deterministic sample."""
    h = mod.data
    if mu is None:
        mu = mod.all_mu() if h.size <= 2**16 else None
    if mu is None:
        return True
    d = mod.dim
    if d > 64:
        sample = min(sample, 8)
    for a in list(range(min(h.size, sample))) + [1 << k for k in range(h.k)]:
        for k in range(h.k):
            g = 1 << k
            lhs = mod.matrix(a, mu[a]) @ mod.matrix(g, mu[g])
            rhs = (-1) ** h.eps(a, g) * mod.matrix(a ^ g, mu[a ^ g])
            if not np.allclose(lhs, rhs):
                return False
    return True


def character_norm(mod: HeisenbergModule, mu: list[int]) -> int:
    """``sum_a |tr rho(a)|^2`` computed from the monomial operators (exact integers)."""
    h = mod.data
    d = mod.dim
    xs = np.arange(d)
    popv = np.vectorize(lambda v, x: _pop(v & int(x)))
    total = 0
    for a in range(h.size):
        u, v = mod.coords(a)
        if u:
            continue  # no diagonal entries
        s = int(np.sum(1 - 2 * popv(v, xs)))
        total += s * s  # |i^mu|^2 = 1
    return total


# -- invariant bilinear form -------------------------------------------------------------------


class _SignUnionFind:
    """Unknowns tied by ``F[a] = (-1)^p F[b]``; components with a contradiction vanish."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.par = [0] * n  # parity to parent
        self.dead = [False] * n

    def parity(self, a: int) -> tuple[int, int]:
        p = 0
        while self.parent[a] != a:
            p ^= self.par[a]
            a = self.parent[a]
        return a, p

    def union(self, a: int, b: int, p: int) -> None:
        ra, pa = self.parity(a)
        rb, pb = self.parity(b)
        if ra == rb:
            if pa ^ pb != p:
                self.dead[ra] = True
            return
        self.parent[rb] = ra
        self.par[rb] = pa ^ pb ^ p
        self.dead[ra] = self.dead[ra] or self.dead[rb]

    def components(self) -> dict[int, list[tuple[int, int]]]:
        out: dict[int, list] = {}
        for a in range(len(self.parent)):
            r, p = self.parity(a)
            out.setdefault(r, []).append((a, p))
        return {r: m for r, m in out.items() if not self.dead[r]}


def _generator_moves(mod: HeisenbergModule):
    h = mod.data
    for k in range(h.k):
        g = 1 << k
        u, v = mod.coords(g)
        yield u, v, h.sign(g)


@dataclass
class FormSolution:
    nullity: int
    verdict: str | None
    method: str


def _verdict(values: dict[tuple[int, int], int]) -> str | None:
    sym = all(values.get((y, x)) == s for (x, y), s in values.items())
    alt = all(values.get((y, x)) == -s for (x, y), s in values.items())
    return SYMMETRIC if sym else ALTERNATING if alt else None


def solve_invariant_form_full(mod: HeisenbergModule) -> FormSolution:
    """All ``dim(X)^2`` unknowns; one signed relation per generator and basis pair.

    ``(rho(g) e_x, e_y) = s_g (e_x, rho(g) e_y)`` reads
    ``F[x+u, y] = s_g (-1)^{B(v, x) + B(v, y)} F[x, y+u]`` (the phases i^mu cancel).
    """
    d = mod.dim
    uf = _SignUnionFind(d * d)
    for u, v, s in _generator_moves(mod):
        for x in range(d):
            px = _pop(v & x)
            for y in range(d):
                uf.union((x ^ u) * d + y, x * d + (y ^ u), s ^ px ^ _pop(v & y))
    comps = uf.components()
    verdict = None
    if len(comps) == 1:
        (members,) = comps.values()
        values = {(a // d, a % d): (-1) ** p for a, p in members}
        verdict = _verdict(values)
    return FormSolution(len(comps), verdict, "full")


def solve_invariant_form(mod: HeisenbergModule) -> FormSolution:
    """Solve on the support forced by the diagonal operators of J.

    ``rho(J_t)`` is diagonal, so invariance forces ``F[x, y] = 0`` unless
    ``(x + y)_t`` matches the sign of ``J_t``; the support is ``{(x, x + x0)}``
    and each generator ties ``x`` to ``x + u``.
    """
    h = mod.data
    d = mod.dim
    x0 = 0
    for t, f in enumerate(mod.J):
        if h.sign(f):
            x0 |= 1 << t
    uf = _SignUnionFind(d)  # unknown x <-> F[x, x + x0]
    for u, v, s in _generator_moves(mod):
        for x in range(d):
            y = x ^ u ^ x0  # (x + u, y) lies on the support
            uf.union(x ^ u, x, s ^ _pop(v & x) ^ _pop(v & y))
    comps = uf.components()
    verdict = None
    if len(comps) == 1:
        (members,) = comps.values()
        values = {(a, a ^ x0): (-1) ** p for a, p in members}
        verdict = _verdict(values)
    return FormSolution(len(comps), verdict, "support")


def solve_invariant_form_dense(mod: HeisenbergModule) -> FormSolution:
    """Numeric nullspace of ``F -> rho(g)^T F - s_g F rho(g)`` (binary64, small modules only)."""
    d = mod.dim
    h = mod.data
    blocks = []
    eye = np.eye(d)
    for k in range(h.k):
        g = 1 << k
        r = mod.matrix(g, mod.gen_mu[k])
        s = (-1) ** h.sign(g)
        # vec(r^T F) = (I ⊗ r^T) vec F, vec(F r) = (r^T ⊗ I) vec F  (column-major vec)
        blocks.append(np.kron(eye, r.T) - s * np.kron(r.T, eye))
    mat = np.vstack(blocks) if blocks else np.zeros((1, d * d))  # A trivial: no constraints
    _, sv, vh = np.linalg.svd(mat)
    null = vh[np.sum(sv > 1e-9) :]
    verdict = None
    if len(null) == 1:
        f = null[0].reshape(d, d, order="F")
        if np.allclose(f, f.T, atol=1e-9):
            verdict = SYMMETRIC
        elif np.allclose(f, -f.T, atol=1e-9):
            verdict = ALTERNATING
    return FormSolution(len(null), verdict, "dense")


def coset_shortcut(mod: HeisenbergModule) -> bool:
    """Symmetry from ``(x, y) = (e^a y, y) = (y, e^a y) = (y, x)``.

    Needs I totally isotropic for ``q`` (so ``(-1)^{a^2/2} = 1`` on I) and I
    acting simply transitively on the basis of ``C[I]`` by translations.
    """
    h = mod.data
    if not mod.split:
        return False
    if any(h.sign(a) for a in mod.I) or any(h.B(a, c) for a in mod.I for c in mod.I):
        return False
    translations = [mod.coords(a) for a in mod.I]
    return all(v == 0 for _, v in translations) and sorted(u for u, _ in translations) == [
        1 << t for t in range(len(mod.I))
    ]


def invariant_form(h: HeisenbergData, mod: HeisenbergModule) -> tuple[int, str]:
    sol = solve_invariant_form(mod)
    checks = [sol]
    if mod.dim <= FULL_SOLVE_LIMIT:
        checks.append(solve_invariant_form_full(mod))
    if mod.dim <= DENSE_LIMIT:
        checks.append(solve_invariant_form_dense(mod))
    for other in checks[1:]:
        if (other.nullity, other.verdict) != (sol.nullity, sol.verdict):
            raise LatvacError(f"invariant form solvers disagree: {sol} vs {other}")
    if sol.nullity != 1:
        raise LatvacError("module not irreducible")
    if sol.verdict is None:
        raise LatvacError("invariant form is neither symmetric nor alternating")
    if coset_shortcut(mod) and sol.verdict != SYMMETRIC:
        raise LatvacError("convention discrepancy: coset argument gives a symmetric form")
    return sol.nullity, sol.verdict


# -- Schur indicator ----------------------------------------------------------------------------


@dataclass
class SchurReport:
    order_A: int
    gamma2: Fraction
    split: bool
    witness_size: int
    dim_X: int
    nullity: int
    verdict: str
    shortcut: bool
    character_norm: int | None
    zero_count: int | None
    nu: int


def schur_indicator_involution(lattice: Lattice, sigma: LatticeAutomorphism) -> SchurReport:
    _check_hypotheses(lattice, sigma)
    _, _, fixed = sublattices_M_N(lattice, sigma)
    if fixed.rank % 8:
        raise LatvacError(f"rank(L^sigma) = {fixed.rank} is not divisible by 8 (type 2{{0}} criterion)")
    h = build_heisenberg(lattice, sigma)
    g2 = gauss_sum_gamma2(h.form)
    split, witness = is_split(h.form)
    mod = build_module(h)
    norm = zeros = None
    if h.size <= 2**16:
        mu = mod.all_mu()
        if not verify_representation(mod, mu):
            raise LatvacError("operators do not satisfy the group law")
        norm = character_norm(mod, mu)
        if norm != h.size:
            raise LatvacError("module not irreducible (character norm)")
        f2 = _F2Form(h.form)
        zeros = sum(1 for a in range(h.size) if not f2.q(a))
    if mod.dim * mod.dim != h.size:
        raise LatvacError("dim X^2 != |A|")
    nullity, verdict = invariant_form(h, mod)
    shortcut = coset_shortcut(mod)
    nu = 1 if verdict == SYMMETRIC else -1
    if nu == -1:
        raise LatvacError("counterexample: alternating invariant form under the theorem hypotheses")
    return SchurReport(
        h.size, g2, split, 2 ** len(witness) if witness is not None else 0, mod.dim, nullity, verdict,
        shortcut, norm, zeros, nu,
    )


def braiding_from_indicator(delta, nu: int) -> int:
    """``nu * e^{2 pi i Delta}`` for half-integral Delta."""
    delta = Fraction(delta)
    if (2 * delta).denominator != 1:
        raise LatvacError("Delta is not half-integral")
    if nu not in (1, -1):
        raise LatvacError("nu must be +1 or -1")
    return nu * (-1 if (2 * delta) % 2 else 1)
