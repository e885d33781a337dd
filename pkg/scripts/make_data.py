"""Regenerate the shipped lattice files under src/latvac/data/.

Each lattice is built from an explicit coordinate description, reduced with
exact LLL, and written as a Gram matrix.  Run from the repository root:

    python scripts/make_data.py
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from pathlib import Path

from latvac.linalg import congruent, det, hnf, hnf_rational, lll_gram

DATA = Path(__file__).resolve().parents[1] / "src" / "latvac" / "data"


def golay_code() -> list[list[int]]:
    """Generator rows of the extended binary Golay code (length 24)."""
    g = [1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1]  # 1 + x^2 + x^4 + x^5 + x^6 + x^10 + x^11
    rows = []
    for shift in range(12):
        word = [0] * 23
        for i, c in enumerate(g):
            word[i + shift] = c
        rows.append(word + [sum(word) % 2])
    return rows


def check_golay(rows):
    weights = {}
    for coeffs in itertools.product((0, 1), repeat=12):
        word = [sum(c * r[i] for c, r in zip(coeffs, rows)) % 2 for i in range(24)]
        w = sum(word)
        weights[w] = weights.get(w, 0) + 1
    assert weights == {0: 1, 8: 759, 12: 2576, 16: 759, 24: 1}, weights


def leech_rows() -> list[list[Fraction]]:
    """Leech lattice generators in R^24 (scaled coordinates divided by sqrt 8)."""
    gens = [[2 * x for x in c] for c in golay_code()]
    gens.append([-3] + [1] * 23)
    for i in range(24):
        for j in range(i + 1, 24):
            v = [0] * 24
            v[i], v[j] = 4, 4
            gens.append(v)
            w = [0] * 24
            w[i], w[j] = 4, -4
            gens.append(w)
    return [[Fraction(x) for x in r] for r in hnf(gens)]


def d_plus_rows(n: int) -> list[list[Fraction]]:
    gens = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n - 1):
        gens[i][i], gens[i][i + 1] = Fraction(1), Fraction(-1)
    gens[n - 1][n - 2], gens[n - 1][n - 1] = Fraction(1), Fraction(1)
    gens.append([Fraction(1, 2)] * n)
    return hnf_rational(gens)


def e8_rows() -> list[list[Fraction]]:
    return d_plus_rows(8)


def gram_of(rows, scale=Fraction(1)) -> list[list[int]]:
    g = [[sum(x * y for x, y in zip(r, s)) * scale for s in rows] for r in rows]
    assert all(x.denominator == 1 for row in g for x in row)
    return [[int(x) for x in row] for row in g]


def write_lattice(name: str, gram, comment: str) -> None:
    n = len(gram)
    lines = [f"# {comment}", str(n)]
    lines += [" ".join(str(x) for x in row) for row in gram]
    (DATA / f"{name}.lat").write_text("\n".join(lines) + "\n")


def write_aut(name: str, n: int, comment: str) -> None:
    lines = [f"# {comment}"]
    lines += [" ".join(str(-int(i == j)) for j in range(n)) for i in range(n)]
    (DATA / f"{name}.aut").write_text("\n".join(lines) + "\n")


def block_sum(a, b):
    n, m = len(a), len(b)
    out = [[0] * (n + m) for _ in range(n + m)]
    for i in range(n):
        out[i][:n] = a[i]
    for i in range(m):
        out[n + i][n:] = b[i]
    return out


def main() -> None:
    DATA.mkdir(parents=True, exist_ok=True)
    check_golay(golay_code())

    e8, _ = lll_gram(gram_of(e8_rows()))
    assert det(e8) == 1
    write_lattice("e8", e8, "E8: {x in Z^8 u (1/2+Z)^8 : sum x_i even}, LLL-reduced")
    write_lattice("a1", [[2]], "A1 root lattice")
    write_lattice("e8e8", block_sum(e8, e8), "E8 + E8 orthogonal sum")

    d16, _ = lll_gram(gram_of(d_plus_rows(16)))
    assert det(d16) == 1
    write_lattice("d16plus", d16, "D16+: D16 u (D16 + (1/2)^16), LLL-reduced")

    d24, _ = lll_gram(gram_of(d_plus_rows(24)))
    assert det(d24) == 1
    write_lattice("d24plus", d24, "Niemeier lattice D24+ (root system D24, 1104 roots), LLL-reduced")

    leech, _ = lll_gram(gram_of(leech_rows(), Fraction(1, 8)))
    assert det(leech) == 1
    write_lattice("leech", leech, "Leech lattice from the extended Golay code, LLL-reduced")

    for n in (1, 8, 16, 24):
        write_aut(f"neg1_{n}", n, f"-1 on rank {n}")


if __name__ == "__main__":
    main()
