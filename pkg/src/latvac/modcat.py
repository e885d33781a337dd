"""Abelian 3-cocycles, pointed modular data and the Verlinde formula.

A cocycle ``(F, Omega)`` on a finite abelian group E is stored as integer
exponent tables modulo a common denominator: the phase ``F(a, b, c)`` is
``exp(2 pi i F[a, b, c] / den)``.  Group elements are indexed in the
lexicographic order of their coordinate tuples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm, prod

import numpy as np

from .discform import FinQuadForm, _frac1, is_nondegenerate
from .errors import LatvacError
from .qseries import ModularData, ScaledPhase, ZERO, zhu_S

VERLINDE_TOL = 1e-6


# -- the group -----------------------------------------------------------------------


def group_elements(orders) -> list[tuple[int, ...]]:
    return list(itertools.product(*(range(d) for d in orders)))


def _coords(orders) -> np.ndarray:
    """``(n, k)`` array of element coordinates in lexicographic order."""
    if not orders:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(group_elements(orders), dtype=np.int64)


def _index(orders, coords: np.ndarray) -> np.ndarray:
    idx = np.zeros(coords.shape[:-1], dtype=np.int64)
    for i, d in enumerate(orders):
        idx = idx * d + coords[..., i] % d
    return idx


def addition_table(orders) -> np.ndarray:
    x = _coords(orders)
    return _index(orders, x[:, None, :] + x[None, :, :])


# -- cocycles ------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AbCocycle:
    orders: tuple[int, ...]
    den: int
    F: np.ndarray  # (n, n, n) exponents mod den
    Omega: np.ndarray  # (n, n) exponents mod den

    @property
    def size(self) -> int:
        return prod(self.orders)

    def elements(self):
        return group_elements(self.orders)

    def index(self, a) -> int:
        return int(_index(self.orders, np.array(a, dtype=np.int64)))

    def f(self, a, b, c) -> Fraction:
        return Fraction(int(self.F[self.index(a), self.index(b), self.index(c)]), self.den)

    def omega(self, a, b) -> Fraction:
        return Fraction(int(self.Omega[self.index(a), self.index(b)]), self.den)

    def with_den(self, den: int) -> "AbCocycle":
        if den % self.den:
            raise ValueError("new denominator must be a multiple")
        m = den // self.den
        return AbCocycle(self.orders, den, self.F * m % den, self.Omega * m % den)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AbCocycle) or self.orders != other.orders:
            return False
        den = lcm(self.den, other.den)
        a, b = self.with_den(den), other.with_den(den)
        return bool(np.array_equal(a.F, b.F) and np.array_equal(a.Omega, b.Omega))


def _table(values, shape, den_hint: int = 1) -> tuple[int, np.ndarray]:
    vals = [_frac1(Fraction(v)) for v in np.asarray(values, dtype=object).ravel()]
    den = lcm(den_hint, *(v.denominator for v in vals)) if vals else den_hint
    arr = np.array([v.numerator * (den // v.denominator) for v in vals], dtype=np.int64)
    return den, arr.reshape(shape)


def make_cocycle(orders, F, Omega) -> AbCocycle:
    """From nested tables of rationals (indexed by element position)."""
    orders = tuple(orders)
    n = prod(orders)
    d1, f = _table(F, (n, n, n))
    d2, w = _table(Omega, (n, n))
    den = lcm(d1, d2)
    return AbCocycle(orders, den, f * (den // d1) % den, w * (den // d2) % den)


def trivial_cocycle(orders) -> AbCocycle:
    n = prod(orders)
    return AbCocycle(tuple(orders), 1, np.zeros((n, n, n), dtype=np.int64), np.zeros((n, n), dtype=np.int64))


def coboundary(orders, phi) -> AbCocycle:
    """``d phi``: ``F = phi(b,c) phi(a,b+c) / phi(a+b,c) phi(a,b)`` and ``Omega = phi(b,a)/phi(a,b)``.

    With the associator ``(AB)C -> A(BC)`` given by F, the braiding quotient must
    be taken in this order for ``d phi`` to satisfy the hexagons; the opposite
    quotient only works with the inverse associator.
    """
    orders = tuple(orders)
    n = prod(orders)
    den, p = _table(phi, (n, n))
    add = addition_table(orders)
    a, b, c = np.ix_(range(n), range(n), range(n))
    F = p[b, c] + p[a, add[b, c]] - p[add[a, b], c] - p[a, b]
    W = p.T - p
    return AbCocycle(orders, den, F % den, W % den)


@dataclass(frozen=True)
class CocycleCheck:
    ok: bool
    relation: str | None = None
    instance: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


def _first(mask: np.ndarray, els, relation: str) -> CocycleCheck:
    idx = np.argwhere(mask)[0]
    return CocycleCheck(False, relation, tuple(els[i] for i in idx))


_PENTAGON_CACHE: dict = {}


def _pentagon(orders, den: int, F: np.ndarray):
    """First failing quadruple of indices, or None.  Memoized on the exact table (F often
    repeats across forms that differ only in the braiding)."""
    key = (orders, den, F.tobytes())
    if key not in _PENTAGON_CACHE:
        if len(_PENTAGON_CACHE) > 4096:
            _PENTAGON_CACHE.clear()
        n = F.shape[0]
        add = addition_table(orders)
        a, b, c, d = np.ix_(*(range(n),) * 4)
        pent = F[a, b, c] + F[a, add[b, c], d] + F[b, c, d] - F[add[a, b], c, d] - F[a, b, add[c, d]]
        bad = pent % den != 0
        _PENTAGON_CACHE[key] = tuple(int(i) for i in np.argwhere(bad)[0]) if bad.any() else None
    return _PENTAGON_CACHE[key]


def verify_abelian_cocycle(w: AbCocycle) -> CocycleCheck:
    """Normalization, the pentagon and both hexagons, over all tuples.

    With ``a`` the associator ``(AB)C -> A(BC)`` given by F and ``c`` the braiding:

    * pentagon: ``F(a,b,c) F(a,b+c,d) F(b,c,d) = F(a+b,c,d) F(a,b,c+d)``
    * hexagon: ``F(a,b,c) W(a,b+c) F(b,c,a) = W(a,b) F(b,a,c) W(a,c)``
    * hexagon: ``F(a,b,c)^-1 W(a+b,c) F(c,a,b)^-1 = W(b,c) F(a,c,b)^-1 W(a,c)``
    """
    n, den = w.size, w.den
    els = w.elements()
    F, W = w.F, w.Omega
    zero_f = np.zeros((n, n, n), dtype=bool)
    zero_f[0, :, :] = zero_f[:, 0, :] = zero_f[:, :, 0] = True
    bad = zero_f & (F % den != 0)
    if bad.any():
        return _first(bad, els, "normalization F")
    zero_w = np.zeros((n, n), dtype=bool)
    zero_w[0, :] = zero_w[:, 0] = True
    bad = zero_w & (W % den != 0)
    if bad.any():
        return _first(bad, els, "normalization Omega")
    add = addition_table(w.orders)
    failed = _pentagon(w.orders, den, F)
    if failed is not None:
        return CocycleCheck(False, "pentagon", tuple(els[i] for i in failed))
    a, b, c = np.ix_(*(range(n),) * 3)
    hex1 = F[a, b, c] + W[a, add[b, c]] + F[b, c, a] - W[a, b] - F[b, a, c] - W[a, c]
    bad = hex1 % den != 0
    if bad.any():
        return _first(bad, els, "hexagon 1")
    hex2 = -F[a, b, c] + W[add[a, b], c] - F[c, a, b] - W[b, c] + F[a, c, b] - W[a, c]
    bad = hex2 % den != 0
    if bad.any():
        return _first(bad, els, "hexagon 2")
    return CocycleCheck(True)


# -- trace and the Eilenberg-MacLane representative --------------------------------------


@dataclass(frozen=True)
class QuadraticFunction:
    """A function ``E -> Q/Z`` given by its values on all elements (lexicographic order)."""

    orders: tuple[int, ...]
    values: tuple[Fraction, ...]

    def __call__(self, a) -> Fraction:
        return self.values[int(_index(self.orders, np.array(a, dtype=np.int64)))]


def _is_quadratic(orders, values) -> bool:
    """``q(m a) = m^2 q(a)`` and a bilinear polarization, checked on integer exponent arrays."""
    den = lcm(1, *(v.denominator for v in values))
    q = np.array([int(v * den) for v in values], dtype=np.int64)
    x = _coords(orders)
    for m in range(2, max(orders, default=1) + 1):
        if np.any((q[_index(orders, m * x)] - m * m * q) % den):
            return False
    add = addition_table(orders)
    pol = q[add] - q[:, None] - q[None, :]
    lhs = pol[add, :]  # pol(x + y, z)
    return not np.any((lhs - pol[:, None, :] - pol[None, :, :]) % den)


def trace(w: AbCocycle) -> QuadraticFunction:
    """``q(a)`` with ``Omega(a, a) = e^{2 pi i q(a)}``."""
    vals = tuple(Fraction(int(w.Omega[i, i]), w.den) for i in range(w.size))
    if not _is_quadratic(w.orders, vals):
        raise LatvacError("not a cocycle: the trace is not a quadratic form")
    return QuadraticFunction(w.orders, vals)


def form_values(form: FinQuadForm) -> QuadraticFunction:
    return QuadraticFunction(tuple(form.orders), tuple(form.q(a) for a in form.elements()))


def _representative(form: FinQuadForm, cross_transposed: bool) -> AbCocycle:
    orders = tuple(form.orders)
    k = len(orders)
    x = _coords(orders)  # (n, k)
    kappa = [_frac1(form.q_gen[i]) for i in range(k)]
    den = lcm(1, *(v.denominator for v in kappa), *(_frac1(form.b_gen[i][j]).denominator for i in range(k) for j in range(k)))
    kap = [int(v * den) for v in kappa]
    n = x.shape[0]
    W = np.zeros((n, n), dtype=np.int64)
    F = np.zeros((n, n, n), dtype=np.int64)
    for i, d in enumerate(orders):
        ai = x[:, i]
        W += kap[i] * np.outer(ai, ai)
        carry = (ai[:, None] + ai[None, :]) // d
        F += kap[i] * d * ai[:, None, None] * carry[None, :, :]
    for i in range(k):
        for j in range(i + 1, k):
            bij = int(_frac1(form.b_gen[i][j]) * den)
            if cross_transposed:
                W += bij * np.outer(x[:, j], x[:, i])
            else:
                W += bij * np.outer(x[:, i], x[:, j])
    return AbCocycle(orders, den, F % den, W % den)


def cocycle_from_form(form: FinQuadForm) -> AbCocycle:
    """Representative with per-factor carry associator and bilinear cross braiding.

    On a cyclic factor ``Z/d`` with ``kappa = q(g)``:
    ``F(a,b,c) = kappa d a floor((b + c)/d)`` and ``Omega(a,b) = kappa a b``
    (coordinates in ``[0, d)``); factors interact through ``b(g_i, g_j) a_i b_j``
    in Omega only.  Both orderings of the cross term are tried; the result must
    pass the coherence checks and reproduce q as its trace.
    """
    target = form_values(form)
    for transposed in (False, True):
        w = _representative(form, transposed)
        if verify_abelian_cocycle(w) and trace(w) == target:
            return w
    raise LatvacError("no representative found")


def negate(x):
    """Pointwise negation of exponents (cocycles, forms or quadratic functions)."""
    if isinstance(x, AbCocycle):
        return AbCocycle(x.orders, x.den, (-x.F) % x.den, (-x.Omega) % x.den)
    if isinstance(x, FinQuadForm):
        return FinQuadForm.make(x.orders, [-v for v in x.q_gen], [[-v for v in r] for r in x.b_gen])
    if isinstance(x, QuadraticFunction):
        return QuadraticFunction(x.orders, tuple(_frac1(-v) for v in x.values))
    raise TypeError(f"cannot negate {type(x).__name__}")


# -- restriction and coboundary witnesses -------------------------------------------------


def restrict_cyclic(w: AbCocycle, gen) -> AbCocycle:
    """Restriction to the cyclic subgroup generated by ``gen`` (as ``Z/m``)."""
    gen = tuple(gen)
    m = 1
    while any(m * g % d for g, d in zip(gen, w.orders)):
        m += 1
    idx = [w.index(tuple(t * g % d for g, d in zip(gen, w.orders))) for t in range(m)]
    ix = np.array(idx)
    return AbCocycle((m,), w.den, w.F[np.ix_(ix, ix, ix)], w.Omega[np.ix_(ix, ix)])


SEARCH_LIMIT = 2**20


def coboundary_witness(w: AbCocycle, den_factor: int = 2):
    """A 2-cochain ``phi`` (exponent table) with ``d phi = w``, by exhaustive search, or None.

    Cochains take values in ``(1 / (den_factor * den)) Z / Z``; normalized
    cochains (``phi(0, .) = phi(., 0) = 0``) suffice because ``w`` is normalized.
    """
    n = w.size
    if n > 4:
        raise LatvacError("coboundary search is limited to groups of order <= 4")
    den = w.den * den_factor
    cells = [(i, j) for i in range(1, n) for j in range(1, n)]
    if den ** len(cells) > SEARCH_LIMIT:
        raise LatvacError("coboundary search space too large")
    target = w.with_den(den)
    for vals in itertools.product(range(den), repeat=len(cells)):
        phi = np.zeros((n, n), dtype=object)
        for (i, j), v in zip(cells, vals):
            phi[i, j] = Fraction(v, den)
        cb = coboundary(w.orders, phi)
        if cb == target:
            return phi
    return None


# -- modular data --------------------------------------------------------------------------


def bilinear_table(form: FinQuadForm) -> tuple[int, np.ndarray]:
    """``b(a, c)`` for all pairs as integer exponents over a common denominator."""
    k = form.ngens
    bg = [[_frac1(form.b_gen[i][j]) for j in range(k)] for i in range(k)]
    den = lcm(1, *(v.denominator for r in bg for v in r))
    mat = np.array([[int(v * den) for v in r] for r in bg], dtype=np.int64).reshape(k, k)
    x = _coords(tuple(form.orders))
    return den, (x @ mat @ x.T) % den


def pointed_modular_data(form: FinQuadForm, check_zhu: bool = True) -> tuple[ModularData, ModularData]:
    """``S = |E|^(-1/2) e^(-2 pi i b)`` and ``T = diag e^(2 pi i q)`` (no central charge shift)."""
    if not is_nondegenerate(form):
        raise LatvacError("not modular: b is degenerate")
    els = list(form.elements())
    n = len(els)
    den, b = bilinear_table(form)
    S = ModularData(
        n, tuple(tuple(ScaledPhase(Fraction(-int(v), den), 1, n) for v in row) for row in b), tuple(els)
    )
    T = ModularData(
        n, tuple(tuple(ScaledPhase(form.q(a)) if i == j else ZERO for j in range(n)) for i, a in enumerate(els)), tuple(els)
    )
    if check_zhu and S.entries != zhu_S(form).entries:
        raise LatvacError("S disagrees with the Zhu S-matrix")
    return S, T


@dataclass(frozen=True, eq=False)
class FusionTable:
    labels: tuple
    N: np.ndarray  # N[a, b, c] = multiplicity of c in a x b

    def product(self, a, b) -> list:
        i, j = self.labels.index(a), self.labels.index(b)
        return [self.labels[k] for k in np.nonzero(self.N[i, j])[0]]


def verlinde(S: ModularData, vacuum_index: int = 0, tol: float = VERLINDE_TOL) -> FusionTable:
    """``N_ab^c = sum_x S_ax S_bx conj(S_cx) / S_0x`` in binary64, snapped to integers."""
    s = S.to_numpy()
    vac = s[vacuum_index]
    if np.any(np.abs(vac) < tol):
        raise LatvacError("not modular / wrong vacuum: S_0x vanishes")
    raw = np.einsum("ax,bx,cx->abc", s, s, np.conj(s) / vac[None, :])
    snapped = np.rint(raw.real)
    if np.max(np.abs(raw - snapped), initial=0.0) > tol or np.any(snapped < 0):
        raise LatvacError("not modular / wrong vacuum: non-integral fusion coefficient")
    return FusionTable(tuple(S.labels), snapped.astype(np.int64))


def group_law_table(orders) -> np.ndarray:
    add = addition_table(orders)
    n = add.shape[0]
    out = np.zeros((n, n, n), dtype=np.int64)
    a, b = np.meshgrid(range(n), range(n), indexing="ij")
    out[a, b, add] = 1
    return out


def check_balancing(form: FinQuadForm, w: AbCocycle | None = None) -> bool:
    """Self-braidings equal twists (all quantum dimensions 1), and the polarization identity.

    ``Omega(a, a) = theta_a`` and ``theta_(a+b) / theta_a theta_b = Omega(a,b) Omega(b,a)``.
    """
    if w is None:
        w = cocycle_from_form(form)
    els = list(form.elements())
    add = addition_table(w.orders)
    theta = [form.q(a) for a in els]
    n = len(els)
    for i in range(n):
        if Fraction(int(w.Omega[i, i]), w.den) != theta[i]:
            return False
        for j in range(n):
            lhs = _frac1(theta[add[i, j]] - theta[i] - theta[j])
            rhs = _frac1(Fraction(int(w.Omega[i, j] + w.Omega[j, i]), w.den))
            if lhs != rhs:
                return False
    return True


def self_braiding(form: FinQuadForm, a, nu: int = 1) -> int | Fraction:
    """``c_{M,M} = nu e^{2 pi i Delta}`` for the element ``a`` with ``Delta = q(a)``.

    Returns ``+1``/``-1`` when ``2 Delta`` is integral, otherwise the phase exponent.
    """
    delta = form.q(tuple(a))
    if (2 * delta).denominator == 1:
        return nu * (-1 if 2 * delta % 2 else 1)
    return _frac1(delta + (Fraction(1, 2) if nu == -1 else 0))


# -- enumeration of forms ------------------------------------------------------------------


def abelian_groups(max_order: int) -> list[tuple[int, ...]]:
    """Invariant factor lists ``(d_1 | d_2 | ...)`` of all abelian groups of order <= max_order."""
    out = [()]

    def grow(prefix, remaining):
        last = prefix[-1] if prefix else None
        for d in range(2, remaining + 1):
            if last is not None and d % last:
                continue
            if remaining // d < 1:
                continue
            g = prefix + (d,)
            out.append(g)
            grow(g, remaining // d)

    grow((), max_order)
    return sorted(out, key=lambda g: (prod(g), g))


def quadratic_forms_on(orders) -> list[FinQuadForm]:
    """Every quadratic form presented on the given cyclic generators (degenerate ones included)."""
    orders = tuple(orders)
    k = len(orders)
    q_choices = []
    for d in orders:
        step = Fraction(1, 2 * d) if d % 2 == 0 else Fraction(1, d)
        q_choices.append([step * t for t in range(int(1 / step))])
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    b_choices = []
    for i, j in pairs:
        g = np.gcd(orders[i], orders[j])
        b_choices.append([Fraction(t, int(g)) for t in range(int(g))])
    out = []
    for qs in itertools.product(*q_choices):
        for bs in itertools.product(*b_choices):
            b = [[Fraction(0)] * k for _ in range(k)]
            for (i, j), v in zip(pairs, bs):
                b[i][j] = b[j][i] = v
            out.append(FinQuadForm.make(orders, list(qs), b))
    return out
