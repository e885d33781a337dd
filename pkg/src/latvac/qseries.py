"""Exact q-expansions (eta, theta, characters) and Zhu's S and T matrices."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
import sympy

from . import cyclotomic as cyc
from . import linalg
from .discform import FinQuadForm, _frac1
from .enumeration import count_by_norm, count_by_norm_exact
from .errors import LatvacError
from .lattice import Lattice, _reduced, is_even


@dataclass(frozen=True)
class QSeries:
    """``sum_k coeffs[k] q^(offset + k/denom)``, known for ``k < len(coeffs)``.

    The grid is ``offset + (1/denom) Z``; the offset itself may be any rational
    (eta powers start at ``r/24`` with integer steps).
    """

    offset: Fraction
    denom: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "offset", Fraction(self.offset))
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))
        if self.denom < 1:
            raise ValueError("denom must be positive")

    @property
    def end(self) -> Fraction:
        """Exponents below this are known exactly."""
        return self.offset + Fraction(len(self.coeffs), self.denom)

    def exponent(self, k: int) -> Fraction:
        return self.offset + Fraction(k, self.denom)

    def coefficient(self, e) -> Fraction:
        e = Fraction(e)
        if e >= self.end:
            raise ValueError(f"coefficient of q^{e} is beyond the truncation")
        k = (e - self.offset) * self.denom
        if k < 0 or k.denominator != 1:
            return Fraction(0)
        return self.coeffs[int(k)]

    def terms(self) -> list[tuple[Fraction, Fraction]]:
        return [(self.exponent(k), c) for k, c in enumerate(self.coeffs) if c]

    def regrid(self, denom: int, offset=None) -> "QSeries":
        """Same series on a finer grid (``denom`` a multiple) starting at ``offset <= self.offset``."""
        if denom % self.denom:
            raise ValueError("grid must refine")
        offset = self.offset if offset is None else Fraction(offset)
        step = denom // self.denom
        lead = (self.offset - offset) * denom
        if lead < 0 or lead.denominator != 1:
            raise ValueError("incompatible offset")
        lead = int(lead)
        out = [Fraction(0)] * (lead + len(self.coeffs) * step)
        for k, c in enumerate(self.coeffs):
            out[lead + k * step] = c
        return QSeries(offset, denom, tuple(out))

    def truncate(self, end) -> "QSeries":
        """Keep only exponents ``< end``."""
        n = math.ceil((Fraction(end) - self.offset) * self.denom)
        return QSeries(self.offset, self.denom, self.coeffs[: max(0, n)])

    def _common(self, other: "QSeries"):
        d = linalg.lcm(self.denom, other.denom, (self.offset - other.offset).denominator)
        off = min(self.offset, other.offset)
        return self.regrid(d, off), other.regrid(d, off)

    def __add__(self, other):
        if not isinstance(other, QSeries):
            other = constant(other, self.end)
        a, b = self._common(other)
        end = min(self.end, other.end)
        n = max(0, int((end - a.offset) * a.denom))
        ca = list(a.coeffs) + [Fraction(0)] * n
        cb = list(b.coeffs) + [Fraction(0)] * n
        return QSeries(a.offset, a.denom, tuple(ca[k] + cb[k] for k in range(n)))

    __radd__ = __add__

    def __neg__(self):
        return QSeries(self.offset, self.denom, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other if isinstance(other, QSeries) else -Fraction(other))

    def scale(self, c) -> "QSeries":
        c = Fraction(c)
        return QSeries(self.offset, self.denom, tuple(c * x for x in self.coeffs))

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return self.scale(other)
        d = linalg.lcm(self.denom, other.denom)
        a, b = self.regrid(d), other.regrid(d)
        off = a.offset + b.offset
        end = min(a.offset + b.end, b.offset + a.end)
        n = max(0, int((end - off) * d))
        out = [Fraction(0)] * n
        for i, x in enumerate(a.coeffs[:n]):
            if x:
                for j, y in enumerate(b.coeffs[: n - i]):
                    if y:
                        out[i + j] += x * y
        return QSeries(off, d, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "QSeries":
        if not self.coeffs or self.coeffs[0] == 0:
            raise LatvacError("series has no invertible leading term")
        a = self.coeffs
        n = len(a)
        inv0 = 1 / a[0]
        out = [inv0]
        for k in range(1, n):
            s = sum((a[j] * out[k - j] for j in range(1, k + 1)), Fraction(0))
            out.append(-s * inv0)
        return QSeries(-self.offset, self.denom, tuple(out))

    def __truediv__(self, other):
        if not isinstance(other, QSeries):
            return self.scale(1 / Fraction(other))
        return self * other.inverse()

    def __str__(self) -> str:
        return format_series(self)


def constant(c, end) -> QSeries:
    """The constant ``c``, known for exponents below ``end``."""
    n = max(0, math.ceil(Fraction(end)))
    return QSeries(Fraction(0), 1, (Fraction(c),) + (Fraction(0),) * (n - 1) if n else ())


def _fmt_exp(e: Fraction) -> str:
    if e == 0:
        return ""
    if e == 1:
        return "q"
    if e.denominator == 1 and e > 0:
        return f"q^{e.numerator}"
    return f"q^({e})"


def format_series(s: QSeries) -> str:
    parts = []
    for e, c in s.terms():
        mono = _fmt_exp(e)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    out = ""
    for i, (sign, body) in enumerate(parts):
        if i == 0:
            out = ("-" if sign == "-" else "") + body
        else:
            out += f" {sign} {body}"
    big_o = f"O({_fmt_exp(s.end) or '1'})"
    return f"{out} + {big_o}" if out else big_o


# -- eta ---------------------------------------------------------------------------


def euler_product(prec: int) -> list[int]:
    """Coefficients of ``prod_{n>=1} (1 - q^n)`` below ``q^prec``."""
    out = [0] * prec
    if prec:
        out[0] = 1
    for n in range(1, prec):
        for k in range(prec - 1, n - 1, -1):
            out[k] -= out[k - n]
    return out


def series_power(a: Sequence, r: int, prec: int) -> list[Fraction]:
    """``a^r`` for a power series with ``a[0] = 1`` (Miller's recurrence)."""
    a = [Fraction(x) for x in a] + [Fraction(0)] * prec
    if a[0] != 1:
        raise ValueError("leading coefficient must be 1")
    out = [Fraction(1)] + [Fraction(0)] * (prec - 1)
    for k in range(1, prec):
        s = Fraction(0)
        for j in range(1, k + 1):
            if a[j]:
                s += (r * j - k + j) * a[j] * out[k - j]
        out[k] = s / k
    return out[:prec]


def eta_power(r: int, prec: int) -> QSeries:
    """``eta^r`` to ``prec`` integer-spaced terms."""
    if prec < 1:
        raise LatvacError("prec must be at least 1")
    coeffs = series_power(euler_product(prec), r, prec)
    return QSeries(Fraction(r, 24), 1, tuple(coeffs))


# -- theta series and characters ---------------------------------------------------------


def _coset_data(lattice: Lattice, mu) -> tuple[list[Fraction], int]:
    mu = [Fraction(x) for x in (mu if mu is not None else [0] * lattice.rank)]
    if len(mu) != lattice.rank:
        raise LatvacError(f"coset vector must have {lattice.rank} coordinates")
    if any(v.denominator != 1 for v in linalg.matvec(lattice.gram, mu)):
        raise LatvacError("coset representative is not in the dual lattice")
    den = linalg.lcm(*(x.denominator for x in mu)) if mu else 1
    return mu, den


def theta_series(lattice: Lattice, mu=None, prec: int = 4) -> QSeries:
    """``sum_{a in mu + L} q^(a^2/2)`` with exponents ``q(mu) + k`` for ``k < prec``."""
    if not is_even(lattice):
        raise LatvacError("lattice not even")
    if not lattice.is_positive_definite:
        raise LatvacError("lattice is not positive definite")
    if prec < 1:
        raise LatvacError("prec must be at least 1")
    mu, den = _coset_data(lattice, mu)
    offset = _frac1(lattice.norm(mu) / 2)
    top = 2 * (offset + prec - 1)  # largest norm needed
    if lattice.rank == 0:
        return QSeries(Fraction(0), 1, (Fraction(1),) + (Fraction(0),) * (prec - 1))
    red = _reduced(lattice)
    if den == 1:
        counts = count_by_norm(red.gram, int(top))
        scale = 1
    else:
        # a = mu + x; in reduced coordinates y = (T^T)^-1 a; enumerate den*y in den*mu' + den*Z^n
        tt_inv = linalg.inverse(linalg.transpose(red.transform))
        mu_red = linalg.matvec(tt_inv, mu)
        shift = [int(den * v) for v in mu_red]
        scale = den * den
        counts = count_by_norm_exact(red.gram, int(top * scale), shift, den)
    coeffs = [Fraction(0)] * prec
    for nrm, c in counts.items():
        e = Fraction(nrm, 2 * scale)
        k = e - offset
        if k.denominator == 1 and 0 <= k < prec:
            coeffs[int(k)] += c
    return QSeries(offset, 1, tuple(coeffs))


def module_character(lattice: Lattice, mu=None, prec: int = 4) -> QSeries:
    """``Theta_mu / eta^rank``."""
    theta = theta_series(lattice, mu, prec)
    return theta * eta_power(-lattice.rank, prec)


def eisenstein_e4(prec: int) -> QSeries:
    coeffs = [Fraction(1)] + [Fraction(240 * sympy.divisor_sigma(n, 3)) for n in range(1, prec)]
    return QSeries(Fraction(0), 1, tuple(coeffs[:prec]))


def c24_character(dim_v1: int, prec: int = 4) -> QSeries:
    """``j - 744 + dim V_1`` to ``prec`` terms starting at ``q^-1``."""
    if prec < 1:
        raise LatvacError("prec must be at least 1")
    e4 = eisenstein_e4(prec)
    j = e4 * e4 * e4 * eta_power(-24, prec)
    out = j + (dim_v1 - 744)
    base = j - 744
    assert all(out.coefficient(e) == base.coefficient(e) for e, _ in base.terms() if e > 0)
    return out


# -- Zhu's modular data ---------------------------------------------------------------------


@dataclass(frozen=True)
class ScaledPhase:
    """``scale_num / sqrt(scale_root) * e^(2 pi i phase)``."""

    phase: Fraction
    scale_num: Fraction = Fraction(1)
    scale_root: int = 1

    def __post_init__(self):
        object.__setattr__(self, "phase", _frac1(self.phase))
        object.__setattr__(self, "scale_num", Fraction(self.scale_num))

    def to_complex(self) -> complex:
        if self.scale_num == 0:
            return 0j
        return complex(float(self.scale_num) / self.scale_root**0.5 * np.exp(2j * np.pi * float(self.phase)))

    def __str__(self) -> str:
        if self.scale_num == 0:
            return "0"
        mag = "" if self.scale_root == 1 else f"1/sqrt({self.scale_root})"
        num = "" if self.scale_num == 1 else str(self.scale_num)
        scale = "*".join(x for x in (num, mag) if x) or "1"
        return f"phase {self.phase} scale {scale}"


ZERO = ScaledPhase(Fraction(0), Fraction(0), 1)


@dataclass(frozen=True)
class ModularData:
    size: int
    entries: tuple[tuple[ScaledPhase, ...], ...]
    labels: tuple = ()

    def to_numpy(self) -> np.ndarray:
        return np.array([[e.to_complex() for e in row] for row in self.entries], dtype=complex)

    def is_symmetric(self) -> bool:
        n = self.size
        return all(self.entries[i][j] == self.entries[j][i] for i in range(n) for j in range(n))

    def is_diagonal(self) -> bool:
        n = self.size
        return all(self.entries[i][j].scale_num == 0 for i in range(n) for j in range(n) if i != j)


def zhu_T(form: FinQuadForm, rank: int) -> ModularData:
    els = list(form.elements())
    shift = Fraction(rank, 24)
    rows = tuple(
        tuple(ScaledPhase(form.q(a) - shift) if i == j else ZERO for j in range(len(els)))
        for i, a in enumerate(els)
    )
    return ModularData(len(els), rows, tuple(els))


def zhu_S(form: FinQuadForm) -> ModularData:
    els = list(form.elements())
    n = len(els)
    rows = tuple(tuple(ScaledPhase(-form.b(a, c), 1, n) for c in els) for a in els)
    return ModularData(n, rows, tuple(els))


def _field_size(*mats: ModularData) -> int:
    dens = [8]
    roots = []
    for m in mats:
        for row in m.entries:
            for e in row:
                if e.scale_num:
                    dens.append(e.phase.denominator)
                    roots.append(e.scale_root)
    n = linalg.lcm(*dens)
    for r in set(roots):
        n = linalg.lcm(n, cyc.sqrt_conductor(r))
    return n


def _to_cyc(m: ModularData, n: int) -> tuple[np.ndarray, Fraction, int]:
    """``(A, c, r)`` with ``m = c / sqrt(r) * A`` and A over Z[zeta_n]."""
    scales = {(e.scale_num, e.scale_root) for row in m.entries for e in row if e.scale_num}
    if len(scales) != 1:
        raise ValueError("entries do not share a common scale")
    (c, r), = scales
    a = np.zeros((m.size, m.size, n), dtype=np.int64)
    for i, row in enumerate(m.entries):
        for j, e in enumerate(row):
            if e.scale_num:
                a[i, j, int(e.phase * n)] = 1
    return a, c, r


def zhu_relations_exact(form: FinQuadForm, rank: int) -> dict[str, bool]:
    """``S^2[a] = [-a]``, ``S^4 = 1`` and ``(ST)^3 = S^2``, decided in Q(zeta_N)."""
    s_md, t_md = zhu_S(form), zhu_T(form, rank)
    n = _field_size(s_md, t_md)
    s, _, size = _to_cyc(s_md, n)  # S = s / sqrt(size)
    t, _, _ = _to_cyc(t_md, n)
    k = s_md.size
    els = list(form.elements())
    index = {a: i for i, a in enumerate(els)}
    conj = np.zeros((k, k, n), dtype=np.int64)
    for i, a in enumerate(els):
        conj[index[form.neg(a)], i, 0] = 1  # column a carries [-a]
    ident = np.zeros((k, k, n), dtype=np.int64)
    for i in range(k):
        ident[i, i, 0] = 1
    s2 = cyc.mat_mul(s, s)  # = size * S^2
    s4 = cyc.mat_mul(s2, s2)  # = size^2 * S^4
    st = cyc.mat_mul(s, t)
    st3 = cyc.mat_mul(cyc.mat_mul(st, st), st)  # = size^(3/2) (ST)^3
    root = cyc.sqrt_int(size, n)
    return {
        "S^2 = C": cyc.mat_equal(s2, size * conj),
        "S^4 = 1": cyc.mat_equal(s4, size * size * ident),
        "(ST)^3 = S^2": cyc.mat_equal(st3, cyc.mat_scale(s2, root)),
    }


def zhu_relations_numeric(form: FinQuadForm, rank: int, tol: float = 1e-9) -> dict[str, bool]:
    s = zhu_S(form).to_numpy()
    t = zhu_T(form, rank).to_numpy()
    els = list(form.elements())
    index = {a: i for i, a in enumerate(els)}
    k = len(els)
    conj = np.zeros((k, k))
    for i, a in enumerate(els):
        conj[index[form.neg(a)], i] = 1
    s2 = s @ s
    st = s @ t
    return {
        "S^2 = C": bool(np.abs(s2 - conj).max() < tol),
        "S^4 = 1": bool(np.abs(s2 @ s2 - np.eye(k)).max() < tol),
        "(ST)^3 = S^2": bool(np.abs(st @ st @ st - s2).max() < tol),
    }
