"""Exact integer and rational linear algebra.

Matrices are plain lists of rows.  Entries are ``int`` or
:class:`fractions.Fraction`; nothing here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*m)] if m else []


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def bilinear(gram: Sequence[Sequence], u: Sequence, v: Sequence):
    return dot(u, matvec(gram, v))


def congruent(t: Sequence[Sequence], gram: Sequence[Sequence]) -> list[list]:
    """Return ``t * gram * t^T`` (Gram matrix of the rows of ``t``)."""
    return matmul(matmul(t, gram), transpose(t))


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(x, y, g)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


def det(m: Sequence[Sequence]) -> int | Fraction:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    if any(isinstance(x, Fraction) for row in m for x in row):
        den = lcm(*(Fraction(x).denominator for row in m for x in row))
        scaled = [[int(Fraction(x) * den) for x in row] for row in m]
        return Fraction(det(scaled), den ** n)
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def leading_minors(m: Sequence[Sequence[int]]) -> list[int]:
    return [det([row[:k] for row in m[:k]]) for k in range(1, len(m) + 1)]


def is_positive_definite(gram: Sequence[Sequence[int]]) -> bool:
    """Sylvester's criterion on the leading principal minors."""
    return all(d > 0 for d in leading_minors(gram))


def inverse(m: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def rank(m: Sequence[Sequence]) -> int:
    a = [[Fraction(x) for x in row] for row in m]
    if not a:
        return 0
    r = 0
    ncols = len(a[0])
    for col in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, len(a)):
            if a[i][col] != 0:
                f = a[i][col] / a[r][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return r


def solve_rows(basis: Sequence[Sequence], vec: Sequence) -> list[Fraction] | None:
    """Coefficients ``c`` with ``c * basis == vec``, or None if ``vec`` is outside the row span.

    ``basis`` must have linearly independent rows.
    """
    k = len(basis)
    if k == 0:
        return [] if all(x == 0 for x in vec) else None
    n = len(vec)
    # columns of the augmented system basis^T c = vec
    a = [[Fraction(basis[i][j]) for i in range(k)] + [Fraction(vec[j])] for j in range(n)]
    pivots = []
    r = 0
    for col in range(k):
        piv = next((i for i in range(r, n) if a[i][col] != 0), None)
        if piv is None:
            raise ValueError("basis rows are dependent")
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][col]
        a[r] = [x * inv for x in a[r]]
        for i in range(n):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
    if any(a[i][k] != 0 for i in range(r, n)):
        return None
    return [a[i][k] for i in range(k)]


# -- Hermite normal form ---------------------------------------------------


def _echelon_insert(basis: dict[int, list[int]], vec: list[int]) -> None:
    """Insert ``vec`` into an echelon basis keyed by pivot column (pylattice style)."""
    n = len(vec)
    vec = list(vec)
    j = 0
    while j < n:
        if vec[j] == 0:
            j += 1
            continue
        row = basis.get(j)
        if row is None:
            if vec[j] < 0:
                vec = [-x for x in vec]
            basis[j] = vec
            return
        a, b = row[j], vec[j]
        if b % a == 0:
            q = b // a
            vec = [v - q * r for v, r in zip(vec, row)]
        else:
            x, y, g = xgcd(a, b)
            ag, bg = a // g, b // g
            new_row = [x * r + y * v for r, v in zip(row, vec)]
            vec = [-bg * r + ag * v for r, v in zip(row, vec)]
            basis[j] = new_row
        j += 1


def hnf(rows: Sequence[Sequence[int]], ncols: int | None = None) -> list[list[int]]:
    """Row Hermite normal form of the integer row lattice spanned by ``rows``.

    Zero rows are dropped; pivots are positive and entries above a pivot are
    reduced into ``[0, pivot)``.
    """
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    basis: dict[int, list[int]] = {}
    for r in rows:
        if any(r):
            _echelon_insert(basis, [int(x) for x in r])
    order = sorted(basis)
    out = [basis[p] for p in order]
    for i, p in enumerate(order):
        piv = out[i][p]
        for k in range(i):
            q = out[k][p] // piv
            if q:
                out[k] = [a - q * b for a, b in zip(out[k], out[i])]
    return out


def hnf_rational(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Hermite basis of a lattice given by rational generators."""
    if not rows:
        return []
    den = lcm(*(Fraction(x).denominator for r in rows for x in r))
    scaled = [[int(Fraction(x) * den) for x in r] for r in rows]
    return [[Fraction(x, den) for x in r] for r in hnf(scaled)]


def kernel_int(a: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Saturated integer basis of ``{x in Z^ncols : a x = 0}``, in Hermite form."""
    m = len(a)
    aug = []
    for j in range(ncols):
        aug.append([int(a[i][j]) for i in range(m)] + [int(k == j) for k in range(ncols)])
    basis: dict[int, list[int]] = {}
    for r in aug:
        _echelon_insert(basis, r)
    kern = [basis[p][m:] for p in sorted(basis) if p >= m]
    return hnf(kern, ncols)


def saturate(rows: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Basis of ``span_Q(rows) ∩ Z^ncols``."""
    if not rows:
        return []
    perp = kernel_int(rows, ncols)
    if not perp:
        return identity(ncols)
    return kernel_int(perp, ncols)


# -- Smith normal form -----------------------------------------------------


def snf(m: Sequence[Sequence[int]]) -> tuple[list[int], list[list[int]], list[list[int]]]:
    """Smith normal form with transforms.

    Returns ``(d, U, V)`` where ``U`` and ``V`` are unimodular and ``U m V`` is
    the (rectangular) diagonal matrix with diagonal ``d``; each ``d[i] >= 0``
    and ``d[i] | d[i+1]`` among the nonzero entries.
    """
    rows, cols = len(m), len(m[0]) if m else 0
    a = [[int(x) for x in r] for r in m]
    u = identity(rows)
    v = identity(cols)

    def add_row(dst, src, f):
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, f):
        for mat in (a, v):
            for r in mat:
                r[dst] += f * r[src]

    for t in range(min(rows, cols)):
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return [a[i][i] for i in range(min(rows, cols))], u, v
            i, j = best
            a[t], a[i] = a[i], a[t]
            u[t], u[i] = u[i], u[t]
            for mat in (a, v):
                for r in mat:
                    r[t], r[j] = r[j], r[t]
            p = a[t][t]
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
            if any(a[i][t] for i in range(t + 1, rows)) or any(a[t][j] for j in range(t + 1, cols)):
                continue
            bad = next((i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p), None)
            if bad is not None:
                add_row(t, bad, 1)
                continue
            break
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return [a[i][i] for i in range(min(rows, cols))], u, v


# -- LLL on Gram matrices ----------------------------------------------------


def lll_gram(gram: Sequence[Sequence[int]], delta: Fraction = Fraction(99, 100)):
    """LLL-reduce a positive definite integral Gram matrix exactly.

    Integral (fraction-free) variant working on Gram entries only.  Returns
    ``(reduced_gram, t)`` with ``reduced_gram == t * gram * t^T`` and ``t``
    unimodular.
    """
    n = len(gram)
    g = [[int(x) for x in row] for row in gram]
    t = identity(n)
    if n <= 1:
        return g, t
    p, q_ = delta.numerator, delta.denominator
    d = [0] * (n + 1)  # d[i+1] = det of the leading (i+1)x(i+1) Gram block
    d[0] = 1
    lam = [[0] * n for _ in range(n)]

    def redi(k, l):
        if 2 * abs(lam[k][l]) <= d[l + 1]:
            return
        r = (2 * lam[k][l] + d[l + 1]) // (2 * d[l + 1])
        t[k] = [x - r * y for x, y in zip(t[k], t[l])]
        kk, kl, ll = g[k][k], g[k][l], g[l][l]
        row_k, row_l = g[k], g[l]
        for j in range(n):
            row_k[j] -= r * row_l[j]
        row_k[k] = kk - 2 * r * kl + r * r * ll
        for j in range(n):
            g[j][k] = row_k[j]
        lam[k][l] -= r * d[l + 1]
        for i in range(l):
            lam[k][i] -= r * lam[l][i]

    def swapi(k):
        t[k], t[k - 1] = t[k - 1], t[k]
        g[k], g[k - 1] = g[k - 1], g[k]
        for row in g:
            row[k], row[k - 1] = row[k - 1], row[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lm = lam[k][k - 1]
        b = (d[k - 1] * d[k + 1] + lm * lm) // d[k]
        for i in range(k + 1, kmax + 1):
            tt = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lm * tt) // d[k]
            lam[i][k - 1] = (b * tt + lm * lam[i][k]) // d[k + 1]
        d[k] = b

    d[1] = g[0][0]
    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                u = g[k][j]
                for i in range(j):
                    u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = u
                else:
                    if u == 0:
                        raise ValueError("Gram matrix is not positive definite")
                    d[k + 1] = u
        redi(k, k - 1)
        if q_ * d[k + 1] * d[k - 1] < p * d[k] * d[k] - q_ * lam[k][k - 1] ** 2:
            swapi(k)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                redi(k, l)
            k += 1
    return congruent(t, gram), t
