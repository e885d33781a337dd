"""Finite quadratic forms (discriminant forms).

A form is presented on generators ``g_i`` of orders ``d_i``; elements are
coefficient tuples reduced mod ``d_i``.  Values of ``q`` and ``b`` live in
Q/Z and are stored as Fractions in ``[0, 1)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Iterable, Iterator, Sequence

import sympy

from . import cyclotomic as cyc
from . import linalg
from .errors import LatvacError
from .lattice import Lattice, is_even

DFElement = tuple  # coefficient tuple, entry i reduced mod orders[i]

ENUMERATION_LIMIT = 2**20


def _frac1(x) -> Fraction:
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


@dataclass(frozen=True)
class FinQuadForm:
    """``q`` on ``E = ⊕ Z/orders[i]``.

    ``b_gen`` is the full symmetric matrix of ``b(g_i, g_j)``; its diagonal is
    ``2 q(g_i)``.  ``lifts`` and ``reducer`` are optional bookkeeping for forms
    that come from lattices: ``lifts[i]`` is a representative of ``g_i`` and
    :meth:`element_of` maps a representative back to an element.
    """

    orders: tuple[int, ...]
    q_gen: tuple[Fraction, ...]
    b_gen: tuple[tuple[Fraction, ...], ...]
    lifts: tuple | None = field(default=None, compare=False, repr=False)
    reducer: tuple | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        k = len(self.orders)
        object.__setattr__(self, "orders", tuple(int(d) for d in self.orders))
        object.__setattr__(self, "q_gen", tuple(_frac1(x) for x in self.q_gen))
        object.__setattr__(self, "b_gen", tuple(tuple(_frac1(x) for x in r) for r in self.b_gen))
        if len(self.q_gen) != k or len(self.b_gen) != k or any(len(r) != k for r in self.b_gen):
            raise LatvacError("form data has inconsistent sizes")
        if any(d < 2 for d in self.orders):
            raise LatvacError("generator orders must be > 1")
        b = self.b_gen
        for i in range(k):
            if b[i][i] != _frac1(2 * self.q_gen[i]):
                raise LatvacError("b(g, g) must equal 2 q(g)")
            for j in range(k):
                if b[i][j] != b[j][i]:
                    raise LatvacError("b is not symmetric")
                if _frac1(self.orders[i] * b[i][j]):
                    raise LatvacError("quadratic form not well defined")
            if _frac1(self.orders[i] ** 2 * self.q_gen[i]):
                raise LatvacError("quadratic form not well defined")

    @classmethod
    def make(cls, orders, q_gen, b_offdiag=None) -> "FinQuadForm":
        """Build from ``q`` on generators and ``b`` on pairs ``i != j``."""
        k = len(orders)
        q_gen = [_frac1(x) for x in q_gen]
        b = [[Fraction(0)] * k for _ in range(k)]
        for i in range(k):
            b[i][i] = _frac1(2 * q_gen[i])
        if b_offdiag is not None:
            for i in range(k):
                for j in range(k):
                    if i != j:
                        b[i][j] = _frac1(b_offdiag[i][j])
        return cls(tuple(orders), tuple(q_gen), tuple(map(tuple, b)))

    # -- group structure -----------------------------------------------------

    @property
    def ngens(self) -> int:
        return len(self.orders)

    @property
    def size(self) -> int:
        return prod(self.orders)

    @property
    def exponent(self) -> int:
        return linalg.lcm(*self.orders) if self.orders else 1

    def zero(self) -> DFElement:
        return (0,) * self.ngens

    def reduce(self, a: Sequence[int]) -> DFElement:
        return tuple(int(x) % d for x, d in zip(a, self.orders))

    def add(self, a, b) -> DFElement:
        return tuple((x + y) % d for x, y, d in zip(a, b, self.orders))

    def neg(self, a) -> DFElement:
        return tuple(-x % d for x, d in zip(a, self.orders))

    def scale(self, n: int, a) -> DFElement:
        return tuple(n * x % d for x, d in zip(a, self.orders))

    def elements(self) -> Iterator[DFElement]:
        """All elements in lexicographic order of coefficient tuples."""
        return itertools.product(*(range(d) for d in self.orders))

    def element_order(self, a) -> int:
        from math import gcd

        return linalg.lcm(*(d // gcd(d, x) for x, d in zip(a, self.orders))) if a else 1

    def unit(self, i: int) -> DFElement:
        return tuple(int(j == i) for j in range(self.ngens))

    # -- values ----------------------------------------------------------------

    def q(self, a) -> Fraction:
        s = Fraction(0)
        k = self.ngens
        for i in range(k):
            if a[i]:
                s += a[i] * a[i] * self.q_gen[i]
                for j in range(i + 1, k):
                    if a[j]:
                        s += a[i] * a[j] * self.b_gen[i][j]
        return _frac1(s)

    def b(self, a, c) -> Fraction:
        s = Fraction(0)
        for i, x in enumerate(a):
            if x:
                row = self.b_gen[i]
                for j, y in enumerate(c):
                    if y:
                        s += x * y * row[j]
        return _frac1(s)

    def element_of(self, rep: Sequence) -> DFElement:
        """Reduce a representative (same coordinates as ``lifts``) to an element."""
        if self.reducer is None:
            raise LatvacError("form has no attached representatives")
        out = []
        for row, d in zip(self.reducer, self.orders):
            v = sum(Fraction(r) * Fraction(x) for r, x in zip(row, rep))
            if v.denominator != 1:
                raise LatvacError("vector does not represent an element of the form")
            out.append(int(v) % d)
        return tuple(out)

    def q_values(self) -> list[Fraction]:
        return [self.q(a) for a in self.elements()]

    def __repr__(self) -> str:
        return f"FinQuadForm({group_label(self)})"


def q_value(form: FinQuadForm, a: Sequence[int]) -> Fraction:
    return form.q(form.reduce(a))


def group_label(form: FinQuadForm) -> str:
    return " x ".join(f"Z/{d}" for d in form.orders) if form.orders else "0"


TRIVIAL = FinQuadForm((), (), ())


def two_II(sign: int) -> FinQuadForm:
    """The even rank-2 forms ``2_II^{+2}`` (q = 0, 0) and ``2_II^{-2}`` (q = 1/2, 1/2)."""
    h = Fraction(1, 2)
    qs = (0, 0) if sign > 0 else (h, h)
    return FinQuadForm.make((2, 2), qs, [[0, h], [h, 0]])


# -- nondegeneracy ---------------------------------------------------------------


def radical_size(form: FinQuadForm) -> int:
    """Order of ``{a : b(a, .) = 0}``."""
    k = form.ngens
    if k == 0:
        return 1
    n = form.exponent
    rows = [[int(form.b_gen[i][j] * n) for j in range(k)] for i in range(k)]
    rows += [[n * int(i == j) for j in range(k)] for i in range(k)]
    h = linalg.hnf(rows, k)
    image = n**k // abs(linalg.det(h))
    return form.size // image


def is_nondegenerate(form: FinQuadForm) -> bool:
    return radical_size(form) == 1


# -- constructors ----------------------------------------------------------------


def from_gram(lattice: Lattice) -> FinQuadForm:
    """``L^∨/L`` with ``q(x) = x^2/2``; representatives are dual vectors in L-coordinates."""
    if not is_even(lattice):
        raise LatvacError("lattice not even")
    g = [list(r) for r in lattice.gram]
    n = lattice.rank
    if n == 0:
        return TRIVIAL
    d, u, _ = linalg.snf(g)
    ginv = linalg.inverse(g)
    uinv = linalg.inverse(u)
    keep = [i for i in range(n) if abs(d[i]) != 1]
    lifts = []
    for i in keep:
        y = [uinv[j][i] for j in range(n)]  # column i of U^-1
        lifts.append(tuple(linalg.matvec(ginv, y)))
    ug = linalg.matmul(u, g)
    return _from_lifts(
        [abs(d[i]) for i in keep],
        lifts,
        lambda x, y: linalg.bilinear(g, x, y),
        Fraction(1, 2),
        tuple(tuple(ug[i]) for i in keep),
    )


def _from_lifts(orders, lifts, inner, qscale, reducer) -> FinQuadForm:
    k = len(orders)
    q_gen = [inner(v, v) * qscale for v in lifts]
    b = [[2 * qscale * inner(lifts[i], lifts[j]) for j in range(k)] for i in range(k)]
    return FinQuadForm(
        tuple(orders),
        tuple(q_gen),
        tuple(tuple(r) for r in b),
        lifts=tuple(tuple(Fraction(x) for x in v) for v in lifts),
        reducer=reducer,
    )


def _coords_in(outer: Lattice, inner: Lattice) -> list[list[int]]:
    """Rows expressing the basis of ``inner`` in the basis of ``outer`` (same parent)."""
    if outer.basis_in_parent is None or inner.basis_in_parent is None:
        raise LatvacError("sublattices must carry basis_in_parent")
    out = []
    for row in inner.basis_in_parent:
        c = linalg.solve_rows(outer.basis_in_parent, row)
        if c is None or any(x.denominator != 1 for x in c):
            raise LatvacError("M is not contained in N")
        out.append([int(x) for x in c])
    return out


def quarter_form(big: Lattice, small: Lattice) -> FinQuadForm:
    """``A = N/M`` with ``q(a) = a^2/4``; representatives are N-coordinates."""
    if big.rank != small.rank:
        raise LatvacError("N/M is not finite")
    k = big.rank
    if k == 0:
        return TRIVIAL
    c = _coords_in(big, small)
    gn = [list(r) for r in big.gram]
    mixed = linalg.matmul(gn, linalg.transpose(c))  # (n_i, m_j)
    if any(x % 2 for r in mixed for x in r):
        raise LatvacError("quadratic form not well defined: (N, M) pairing is not even")
    gm = small.gram
    if any(gm[i][i] % 4 for i in range(k)) or any(gm[i][j] % 2 for i in range(k) for j in range(k)):
        raise LatvacError("quadratic form not well defined: M(1/2) is not even")
    d, _, v = linalg.snf(c)
    vinv = linalg.inverse(v)
    keep = [i for i in range(k) if abs(d[i]) != 1]
    lifts = [tuple(int(x) for x in vinv[i]) for i in keep]
    reducer = tuple(tuple(v[j][i] for j in range(k)) for i in keep)
    return _from_lifts(
        [abs(d[i]) for i in keep],
        lifts,
        lambda x, y: linalg.bilinear(gn, x, y),
        Fraction(1, 4),
        reducer,
    )


def present(orders: Sequence[int], q_gen, b_gen) -> FinQuadForm:
    """Re-present a form given on generators of arbitrary orders in invariant-factor form."""
    k = len(orders)
    if k == 0:
        return TRIVIAL
    rel = [[int(orders[i]) * int(i == j) for j in range(k)] for i in range(k)]
    d, _, v = linalg.snf(rel)
    vinv = linalg.inverse(v)
    raw = FinQuadForm(tuple(orders), tuple(q_gen), tuple(map(tuple, b_gen)))
    keep = [i for i in range(k) if abs(d[i]) != 1]
    gens = [tuple(int(x) for x in vinv[i]) for i in keep]
    q_new = [raw.q(raw.reduce(g)) for g in gens]
    b_new = [[raw.b(g, h) for h in gens] for g in gens]
    return FinQuadForm(tuple(abs(d[i]) for i in keep), tuple(q_new), tuple(map(tuple, b_new)))


def direct_sum(*forms: FinQuadForm) -> FinQuadForm:
    orders, q_gen = [], []
    k = sum(f.ngens for f in forms)
    b = [[Fraction(0)] * k for _ in range(k)]
    off = 0
    for f in forms:
        orders += f.orders
        q_gen += f.q_gen
        for i in range(f.ngens):
            b[off + i][off : off + f.ngens] = f.b_gen[i]
        off += f.ngens
    return present(orders, q_gen, b)


# -- subgroups -------------------------------------------------------------------


def span(form: FinQuadForm, gens: Iterable[Sequence[int]]) -> list[DFElement]:
    """Sorted list of the elements of the subgroup generated by ``gens``."""
    seen = {form.zero()}
    frontier = [form.zero()]
    gens = [form.reduce(g) for g in gens]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = form.add(a, g)
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return sorted(seen)


def is_isotropic(form: FinQuadForm, gens: Sequence[Sequence[int]]) -> bool:
    gens = [form.reduce(g) for g in gens]
    return all(form.b(x, y) == 0 for x in gens for y in gens)


def is_totally_isotropic(form: FinQuadForm, gens: Sequence[Sequence[int]]) -> bool:
    gens = [form.reduce(g) for g in gens]
    ok = all(form.q(x) == 0 for x in gens) and is_isotropic(form, gens)
    assert not ok or is_isotropic(form, gens)
    return ok


# -- Gauss sums -------------------------------------------------------------------


def primary_parts(form: FinQuadForm) -> dict[int, FinQuadForm]:
    """The orthogonal p-primary components, keyed by p."""
    primes = sorted({p for d in form.orders for p in sympy.factorint(d)})
    out = {}
    for p in primes:
        gens, orders = [], []
        for i, d in enumerate(form.orders):
            pe = p ** sympy.multiplicity(p, d)
            if pe > 1:
                gens.append(form.scale(d // pe, form.unit(i)))
                orders.append(pe)
        q_gen = [form.q(g) for g in gens]
        b = [[form.b(g, h) for h in gens] for g in gens]
        out[p] = FinQuadForm(tuple(orders), tuple(q_gen), tuple(map(tuple, b)))
    return out


def is_even_two_elementary(form: FinQuadForm) -> bool:
    return all(d == 2 for d in form.orders) and all(q.denominator <= 2 for q in form.q_gen)


EXACT_CONDUCTOR_LIMIT = 1200


def _phase_histogram(form: FinQuadForm, den: int):
    """Counts ``h[r] = #{a : q(a) = r/den}``, computed on the whole group at once."""
    import numpy as np

    k = form.ngens
    grids = np.indices(form.orders, dtype=np.int64).reshape(k, -1)
    acc = np.zeros(grids.shape[1], dtype=np.int64)
    for i in range(k):
        xi = grids[i]
        acc = (acc + (xi * xi % den) * int(form.q_gen[i] * den)) % den
        for j in range(i + 1, k):
            c = int(form.b_gen[i][j] * den) % den
            if c:
                acc = (acc + (xi * grids[j] % den) * c) % den
    return np.bincount(acc, minlength=den)


def _gauss_exponent_exact(form: FinQuadForm) -> Fraction:
    """Gauss-sum exponent for a p-primary form.

    Decided in Z[zeta_n] when the conductor is small; otherwise the integer phase
    histogram is summed in floating point and the nearest eighth root is accepted
    only if it is closer than 1e-6 (the eighth roots are 0.76 apart).
    """
    import cmath

    size = form.size
    if size > ENUMERATION_LIMIT:
        raise LatvacError(f"group of order {size} too large to enumerate")
    den = linalg.lcm(8, *(q.denominator for q in form.q_gen),
                     *(x.denominator for r in form.b_gen for x in r))
    hist = _phase_histogram(form, den)
    n = linalg.lcm(den, cyc.sqrt_conductor(size))
    if n <= EXACT_CONDUCTOR_LIMIT:
        total = cyc.lift(hist.astype("int64"), n) if n != den else hist.astype("int64")
        root_e = cyc.sqrt_int(size, n)
        for k in range(8):
            if cyc.equal(total, cyc.mul(cyc.root(n, k * n // 8), root_e)):
                return Fraction(k, 8)
        raise LatvacError("Gauss sum is not an eighth root of unity times sqrt|E|")
    import numpy as np

    z = complex(np.sum(hist * np.exp(2j * np.pi * np.arange(den) / den))) / size**0.5
    k = round(cmath.phase(z) * 4 / cmath.pi) % 8
    if abs(z - cmath.exp(2j * cmath.pi * k / 8)) > 1e-6:
        raise LatvacError("Gauss sum is not an eighth root of unity times sqrt|E|")
    return Fraction(k, 8)


def gauss_sum_gamma2(form: FinQuadForm) -> Fraction:
    """Exponent ``k/8`` with ``|E|^{-1/2} sum_a e(q(a)) = e^{2 pi i k/8}``."""
    total = Fraction(0)
    for part in primary_parts(form).values():
        if is_even_two_elementary(part):
            total += Fraction(arf_invariant(part), 2)
        else:
            total += _gauss_exponent_exact(part)
    return _frac1(total)


def gauss_sum_numeric(form: FinQuadForm) -> complex:
    import cmath

    s = sum(cmath.exp(2j * cmath.pi * float(form.q(a))) for a in form.elements())
    return s / form.size**0.5


# -- even 2-elementary forms over F_2 ----------------------------------------------


class _F2Form:
    """``q`` and ``b`` of an even 2-elementary form on bitmask vectors."""

    def __init__(self, form: FinQuadForm):
        k = form.ngens
        self.k = k
        self.qbits = [int(2 * x) & 1 for x in form.q_gen]
        self.brows = [sum(1 << j for j in range(k) if form.b_gen[i][j]) for i in range(k)]

    def b(self, x: int, y: int) -> int:
        acc = 0
        i = 0
        while x:
            if x & 1:
                acc ^= bin(self.brows[i] & y).count("1") & 1
            x >>= 1
            i += 1
        return acc

    def q(self, x: int) -> int:
        acc = 0
        idx = [i for i in range(self.k) if x >> i & 1]
        for a, i in enumerate(idx):
            acc ^= self.qbits[i]
            for j in idx[a + 1 :]:
                acc ^= self.brows[i] >> j & 1
        return acc


def _symplectic_pairs(f: _F2Form) -> list[tuple[int, int]]:
    rest = [1 << i for i in range(f.k)]
    pairs = []
    while rest:
        e = rest.pop(0)
        j = next((j for j, v in enumerate(rest) if f.b(e, v)), None)
        if j is None:
            raise LatvacError("B degenerate")
        fv = rest.pop(j)
        pairs.append((e, fv))
        rest = [v ^ (e if f.b(v, fv) else 0) ^ (fv if f.b(v, e) else 0) for v in rest]
    return pairs


def _require_even_two_elementary(form: FinQuadForm) -> None:
    if not is_even_two_elementary(form):
        raise LatvacError("unsupported form type (need an even 2-elementary form)")


def arf_invariant(form: FinQuadForm) -> int:
    _require_even_two_elementary(form)
    f = _F2Form(form)
    return sum(f.q(e) & f.q(v) for e, v in _symplectic_pairs(f)) & 1


def _bits_to_element(x: int, k: int) -> DFElement:
    return tuple(x >> i & 1 for i in range(k))


def is_split(form: FinQuadForm) -> tuple[bool, list[DFElement] | None]:
    """Whether a totally isotropic subgroup of order ``sqrt|E|`` exists, with generators."""
    _require_even_two_elementary(form)
    f = _F2Form(form)
    pairs = _symplectic_pairs(f)
    witness, minus = [], []
    for e, v in pairs:
        if f.q(e) & f.q(v):
            minus.append((e, v))
        else:
            witness.append(e if f.q(e) == 0 else v)
    if len(minus) % 2:
        return False, None
    for (e1, v1), (e2, v2) in zip(minus[::2], minus[1::2]):
        witness += [e1 ^ e2, v1 ^ v2]
    gens = [_bits_to_element(x, f.k) for x in witness]
    assert is_totally_isotropic(form, gens)
    return True, gens
