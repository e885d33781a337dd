"""Orbifold bookkeeping for lattice vertex algebras."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import sympy

from . import linalg
from .discform import DFElement, FinQuadForm, from_gram, span
from .errors import LatvacError
from .lattice import (
    Lattice,
    LatticeAutomorphism,
    divisors,
    eigenspace_multiplicities,
    isometry_condition_even,
    roots,
)

GENUS_ZERO = frozenset({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 13, 16, 18, 25})
PHI_MODES = ("totient", "divisor-sum")


@dataclass(frozen=True)
class OrbifoldType:
    n: int
    r: int
    rho: Fraction

    def __str__(self) -> str:
        return f"{self.n}{{{self.r}}}"


# -- arithmetic functions -------------------------------------------------------------


def euler_phi(n: int) -> int:
    return int(sympy.totient(n))


def divisor_sum(n: int) -> int:
    return int(sympy.divisor_sigma(n, 1))


def dedekind_psi(n: int) -> int:
    out = Fraction(n)
    for p in sympy.factorint(n):
        out *= Fraction(p + 1, p)
    return int(out)


def lambda_fn(n: int) -> int:
    out = 1
    for p in sympy.factorint(n):
        out *= -p
    return out


# -- types ------------------------------------------------------------------------------


def eigenvalue_dims(sigma: LatticeAutomorphism) -> dict[int, Fraction]:
    """``j -> dim h[zeta^j]`` for ``0 <= j < n``."""
    n = sigma.order
    m = eigenspace_multiplicities(sigma)
    out = {}
    for j in range(n):
        d = n // gcd(j, n)
        out[j] = Fraction(m[d], euler_phi(d))
    return out


def twisted_conformal_weight(lattice: Lattice, sigma: LatticeAutomorphism) -> Fraction:
    """``(1/4n^2) sum_j j(n-j) dim h[zeta^j]``."""
    n = sigma.order
    dims = eigenvalue_dims(sigma)
    return sum((j * (n - j) * dims[j] for j in range(1, n)), Fraction(0)) / (4 * n * n)


def _check_lift_order(lattice: Lattice, sigma: LatticeAutomorphism, attest_lift: bool) -> None:
    if sigma.order % 2:
        return
    if sigma.order == 2:
        ok, bad = isometry_condition_even(lattice, sigma)
        if not ok:
            raise LatvacError(
                f"(a, sigma a) is odd for basis vector {bad}: the standard lift has order 2n"
            )
    elif not attest_lift:
        raise LatvacError(
            f"order {sigma.order}: the standard lift order cannot be checked; attest it explicitly"
        )


def automorphism_type(lattice: Lattice, sigma: LatticeAutomorphism, attest_lift: bool = False) -> OrbifoldType:
    _check_lift_order(lattice, sigma, attest_lift)
    n = sigma.order
    rho = twisted_conformal_weight(lattice, sigma)
    scaled = rho * n * n
    if scaled.denominator != 1:
        raise LatvacError(f"n^2 rho = {scaled} is not an integer")
    r = int(scaled) % n
    assert ((rho - Fraction(r, n * n)) * n).denominator == 1
    return OrbifoldType(n, r, rho)


def power_weights(lattice: Lattice, sigma: LatticeAutomorphism) -> dict[int, Fraction]:
    """``i -> rho(V(sigma^i))`` for ``1 <= i < n``."""
    return {i: twisted_conformal_weight(lattice, sigma.power(i)) for i in range(1, sigma.order)}


# -- fusion groups -----------------------------------------------------------------------


def fusion_lattice(n: int, r: int) -> Lattice:
    return Lattice.from_rows([[-2 * r, n], [n, 0]])


def fusion_group_of_type(n: int, r: int) -> FinQuadForm:
    """Discriminant form of ``[[-2r, n], [n, 0]]``; checks the extension invariant ``2r``."""
    if n < 1 or not 0 <= r < n:
        raise LatvacError("need n >= 1 and 0 <= r < n")
    form = from_gram(fusion_lattice(n, r))
    if form.size != n * n:
        raise LatvacError("fusion group has the wrong order")
    if n > 1:
        # e1* = e2/n spans an isotropic Z/n; e2* maps to a generator of the quotient and
        # n e2* = 2r (e2/n)
        sub = form.element_of((Fraction(0), Fraction(1, n)))
        top = form.element_of(linalg.inverse(fusion_lattice(n, r).gram)[1])
        assert form.element_order(sub) == n and form.q(sub) == 0
        assert form.scale(n, top) == form.scale(2 * r, sub)
        assert form.q(top) == Fraction(r, n * n) % 1
    return form


def totally_isotropic_subgroups(form: FinQuadForm, order: int) -> list[tuple[DFElement, ...]]:
    """All totally isotropic subgroups of the given order (brute force over pairs of generators)."""
    iso = [a for a in form.elements() if form.q(a) == 0]
    found = set()
    for a, b in itertools.combinations_with_replacement(iso, 2):
        sub = span(form, [a, b])
        if len(sub) == order and all(form.q(x) == 0 for x in sub):
            found.add(tuple(sub))
    return sorted(found)


def isotropic_pair(form: FinQuadForm, n: int) -> tuple[tuple[DFElement, ...], tuple[DFElement, ...]]:
    """Two totally isotropic subgroups of order n meeting trivially (first pair in sorted order)."""
    if form.size != n * n:
        raise LatvacError("form does not have order n^2")
    subs = totally_isotropic_subgroups(form, n)
    for i, s in enumerate(subs):
        for t in subs[i:]:
            if set(s) & set(t) == {form.zero()}:
                return s, t
    if n == 1:
        return (form.zero(),), (form.zero(),)
    raise LatvacError("no isotropic pair (type n{r} with r != 0)")


# -- dimension formula ---------------------------------------------------------------------


def dimension_coefficient(n: int, d: int, phi: str = "totient") -> Fraction:
    if phi not in PHI_MODES:
        raise LatvacError(f"unknown phi mode {phi!r}")
    g = gcd(d, n // d)
    phi_g = euler_phi(g) if phi == "totient" else divisor_sum(g)
    return Fraction(lambda_fn(d), d) * Fraction(phi_g, g) * dedekind_psi(n // d)


def dimension_formula(n: int, dims: dict[int, int], phi: str = "totient") -> int:
    """``24 + sum_{d | n} c_d dim V_1^{sigma^d}``."""
    missing = [d for d in divisors(n) if d not in dims]
    if missing:
        raise LatvacError(f"missing dims for divisors {missing}")
    if n == 1:
        return int(dims[1])
    if n not in GENUS_ZERO:
        raise LatvacError(f"n = {n}: the formula needs Gamma_0(n) to have genus zero")
    total = 24 + sum((dimension_coefficient(n, d, phi) * dims[d] for d in divisors(n)), Fraction(0))
    if total.denominator != 1 or total < 0:
        raise LatvacError(f"inconsistent dims: formula gives {total}")
    return int(total)


def lattice_V1_dim(lattice: Lattice) -> int:
    return lattice.rank + len(roots(lattice))


def fixed_V1_dim(lattice: Lattice, sigma: LatticeAutomorphism) -> int:
    if sigma.order == 1:
        return lattice_V1_dim(lattice)
    if sigma.order != 2:
        raise LatvacError(f"unsupported order {sigma.order}: only involutions are handled")
    ok, bad = isometry_condition_even(lattice, sigma)
    if not ok:
        raise LatvacError(f"(a, sigma a) is odd for basis vector {bad}")
    rs = roots(lattice)
    trace_h = sum(sigma.matrix[i][i] for i in range(lattice.rank))
    fixed_roots = sum(1 for a in rs if sigma.apply(a) == tuple(a))
    total = lattice_V1_dim(lattice) + trace_h + fixed_roots
    assert total % 2 == 0
    return total // 2


# -- report ------------------------------------------------------------------------------


@dataclass
class OrbifoldReport:
    type: OrbifoldType
    power_weights: dict[int, Fraction]
    fusion: FinQuadForm
    pair: tuple | None
    dims: dict[int, int] | None
    dim_orb: int | None
    phi: str = "totient"
    notes: list[str] = field(default_factory=list)


def orbifold_report(
    lattice: Lattice,
    sigma: LatticeAutomorphism,
    dims: dict[int, int] | None = None,
    phi: str = "totient",
    attest_lift: bool = False,
) -> OrbifoldReport:
    typ = automorphism_type(lattice, sigma, attest_lift)
    weights = power_weights(lattice, sigma)
    fusion = fusion_group_of_type(typ.n, typ.r)
    pair = isotropic_pair(fusion, typ.n) if typ.r == 0 else None
    notes = []
    if dims is None and typ.n <= 2:
        dims = {typ.n: lattice_V1_dim(lattice)}
        if typ.n == 2:
            dims[1] = fixed_V1_dim(lattice, sigma)
    dim_orb = None
    if dims is not None:
        if any(w < 1 for w in weights.values()):
            notes.append("some rho(V(g^i)) < 1: the dimension formula hypothesis fails")
        dim_orb = dimension_formula(typ.n, dims, phi)
        if typ.n == 2:
            hand = 24 + 3 * dims[1] - dims[2]
            assert dim_orb == hand
    elif typ.n > 2:
        notes.append("dims not supplied: pass --dims d=value for every divisor d")
    return OrbifoldReport(typ, weights, fusion, pair, dims, dim_orb, phi, notes)
