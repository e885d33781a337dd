"""Acceptance suite: one test per criterion, with its tolerance and time limit.

Each test prints a PASS/FAIL line; the terminal summary repeats them.
"""

import itertools
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from helpers import dual_quotient_q_values, lattice_of, random_even_gram
from latvac import linalg
from latvac.discform import FinQuadForm, from_gram, gauss_sum_gamma2, is_nondegenerate, two_II
from latvac.heisenberg import SYMMETRIC, braiding_from_indicator, schur_indicator_involution
from latvac.lattice import LatticeAutomorphism, direct_sum, norm_counts, roots
from latvac.modcat import (
    abelian_groups,
    coboundary,
    coboundary_witness,
    cocycle_from_form,
    form_values,
    group_law_table,
    negate,
    pointed_modular_data,
    quadratic_forms_on,
    restrict_cyclic,
    self_braiding,
    trace,
    verify_abelian_cocycle,
    verlinde,
)
from latvac.neighbors import EXPECTED_Q, classify_Lb, neighbor_search, sublattice_Lb
from latvac.orbifold import fixed_V1_dim, lattice_V1_dim, orbifold_report
from latvac.qseries import eisenstein_e4, eta_power, module_character, zhu_relations_exact, zhu_relations_numeric


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.secs = time.perf_counter() - self.start


def report(n: int, ok: bool, detail: str = "") -> None:
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())


# -- 1 ------------------------------------------------------------------------------------


@pytest.mark.criterion(1, "Leech character 24, 196884, 21493760 (<= 60 s)")
def test_c01_leech_character(leech):
    with Timer() as t:
        ch = module_character(leech, prec=4)
    # independent: Theta_Leech = E4^3 - 720 Delta, divided by eta^24
    e4 = eisenstein_e4(5)
    oracle = (e4 * e4 * e4 - eta_power(24, 5).scale(720)) * eta_power(-24, 5)
    coeffs = [ch.coefficient(e) for e in (-1, 0, 1, 2)]
    ok = coeffs == [1, 24, 196884, 21493760] and all(
        ch.coefficient(e) == oracle.coefficient(e) for e in (-1, 0, 1, 2)
    )
    report(1, ok and t.secs <= 60, f"{coeffs} in {t.secs:.1f} s")
    assert ok and t.secs <= 60


# -- 2 ------------------------------------------------------------------------------------


def _e8_box_counts(bound: int) -> dict[int, int]:
    """E8 = D8 + (D8 + (1/2)^8): scan integer and half-integer boxes in R^8 (norms doubled)."""
    counts: dict[int, int] = {}
    for vals in ([-2, -1, 0, 1, 2], [-3, -1, 1, 3]):  # entries x or 2x
        grid = np.array(list(itertools.product(vals, repeat=8)), dtype=np.int64)
        if vals[1] == -1 and 0 in vals:
            keep = grid.sum(axis=1) % 2 == 0
            nrm4 = 4 * (grid**2).sum(axis=1)
        else:
            keep = (grid.sum(axis=1) // 2) % 2 == 0  # sum of halves is even
            nrm4 = (grid**2).sum(axis=1)
        for n4 in nrm4[keep]:
            if n4 <= 4 * bound:
                counts[int(n4) // 4] = counts.get(int(n4) // 4, 0) + 1
    return dict(sorted(counts.items()))


@pytest.mark.criterion(2, "E8 norm counts 240/2160/6720 vs box oracle (<= 5 s)")
def test_c02_e8_counts(e8):
    with Timer() as t:
        got = norm_counts(e8, 6)
    oracle = _e8_box_counts(6)
    ok = got == oracle == {0: 1, 2: 240, 4: 2160, 6: 6720}
    report(2, ok and t.secs <= 5, f"{got} in {t.secs:.2f} s")
    assert ok and t.secs <= 5


# -- 3 ------------------------------------------------------------------------------------

A = {
    1: [[2]],
    2: [[2, -1], [-1, 2]],
    3: [[2, -1, 0], [-1, 2, -1], [0, -1, 2]],
    4: [[2, -1, 0, 0], [-1, 2, -1, 0], [0, -1, 2, -1], [0, 0, -1, 2]],
}
D4 = [[2, -1, 0, 0], [-1, 2, -1, -1], [0, -1, 2, 0], [0, -1, 0, 2]]


def _diag_sum(*grams):
    lat = lattice_of(grams[0])
    for g in grams[1:]:
        lat = direct_sum(lat, lattice_of(g))
    return lat


def _exact_corpus():
    out = [lattice_of(A[k]) for k in A] + [lattice_of(D4)]
    out += [_diag_sum(*([[[2]]] * k)) for k in (2, 3, 4)]
    out += [lattice_of([[d]]) for d in (4, 6, 8, 10, 12, 16)]
    out += [_diag_sum(A[2], A[2]), _diag_sum(A[1], A[3]), _diag_sum([[4]], [[4]])]
    out += [lattice_of([[4, 1], [1, 4]]), lattice_of([[2, 1], [1, 8]]), lattice_of([[4, 2], [2, 4]])]
    return out


@pytest.mark.criterion(3, "Zhu relations: exact (rank <= 4, |D| <= 16), numeric 1e-9 (|D| <= 256)")
def test_c03_zhu():
    exact_ok = True
    n_exact = 0
    for lat in _exact_corpus():
        form = from_gram(lat)
        assert lat.rank <= 4 and form.size <= 16
        exact_ok &= all(zhu_relations_exact(form, lat.rank).values())
        n_exact += 1
    rng = random.Random(2024)
    numeric = []
    while len(numeric) < 25:
        lat = lattice_of(random_even_gram(rng, rng.randint(1, 4)))
        if 16 < abs(lat.det) <= 256:
            numeric.append(lat)
    numeric.append(_diag_sum(*([[[2]]] * 8)))  # |D| = 256
    numeric.append(_diag_sum(A[4], A[4], A[4]))  # |D| = 125
    num_ok = all(all(zhu_relations_numeric(from_gram(l), l.rank, tol=1e-9).values()) for l in numeric)
    report(3, exact_ok and num_ok, f"{n_exact} exact, {len(numeric)} numeric")
    assert exact_ok and num_ok


# -- 4 ------------------------------------------------------------------------------------


@pytest.mark.criterion(4, "Verlinde = group law, all nondegenerate forms |E| <= 16 (1e-6)")
def test_c04_verlinde():
    count = 0
    ok = True
    for orders in abelian_groups(16):
        if not orders:
            continue
        law = group_law_table(orders)
        for form in quadratic_forms_on(orders):
            if not is_nondegenerate(form):
                continue
            S, _ = pointed_modular_data(form, check_zhu=len(orders) < 3)
            fus = verlinde(S, tol=1e-6)
            ok &= bool(np.array_equal(fus.N, law))
            count += 1
    report(4, ok, f"{count} forms")
    assert ok and count > 0


# -- 5 ------------------------------------------------------------------------------------


@pytest.mark.criterion(5, "E8 neighbors (240,1); E8+E8 budget 500 finds (480,1) and (480,4) (<= 120 s)")
def test_c05_neighbors(e8, e8e8):
    e8_found = neighbor_search(e8, 40)
    e8_ok = len(e8_found) > 0 and all((f.root_count, f.root_det) == (240, 1) for f in e8_found)
    with Timer() as t:
        found = neighbor_search(e8e8, 500)
    kinds = {(f.root_count, f.root_det) for f in found}
    ok = e8_ok and {(480, 1), (480, 4)} <= kinds and t.secs <= 120
    report(5, ok, f"E8 {len(e8_found)} neighbors, E8+E8 kinds {sorted(kinds)} in {t.secs:.1f} s")
    assert ok


# -- 6 ------------------------------------------------------------------------------------


@pytest.mark.criterion(6, "classify_Lb q-values match the tables on 100 random (L, b)")
def test_c06_classify(e8, e8e8, d16plus, leech):
    rng = random.Random(6)
    lattices = [e8, e8e8, d16plus, leech]
    done = 0
    ok = True
    while done < 100:
        lat = rng.choice(lattices)
        b = [rng.randint(-3, 3) for _ in range(lat.rank)]
        if all(x % 2 == 0 for x in linalg.matvec(lat.gram, b)):
            continue
        cls = classify_Lb(lat, b)
        expected_tag = "CASE_2MOD4" if lat.norm(b) % 4 == 2 else "CASE_0MOD4"
        lb = sublattice_Lb(lat, cls.b)
        oracle = dual_quotient_q_values([[int(x) for x in r] for r in lb.gram])
        ok &= cls.tag == expected_tag and oracle == EXPECTED_Q[cls.tag] == sorted(cls.form.q_values())
        done += 1
    report(6, ok, f"{done} samples")
    assert ok


# -- 7 ------------------------------------------------------------------------------------


@pytest.mark.criterion(7, "Leech and Niemeier -1 orbifolds (<= 10 s)")
def test_c07_orbifold(leech):
    from latvac.io import shipped_lattice

    with Timer() as t:
        rep = orbifold_report(leech, LatticeAutomorphism.negation(24))
    leech_ok = (
        rep.type.rho == Fraction(3, 2)
        and str(rep.type) == "2{0}"
        and sorted(rep.fusion.q_values()) == [0, 0, 0, Fraction(1, 2)]
        and rep.pair is not None
        and rep.dim_orb == 0
        and t.secs <= 10
    )
    nie = shipped_lattice("d24plus")
    sigma = LatticeAutomorphism.negation(24)
    nrep = orbifold_report(nie, sigma)
    full, fixed = lattice_V1_dim(nie), fixed_V1_dim(nie, sigma)
    nie_ok = nrep.dim_orb == len(roots(nie)) // 2 == 552 == 24 + 3 * fixed - full
    report(7, leech_ok and nie_ok, f"Leech dim {rep.dim_orb} in {t.secs:.2f} s, Niemeier dim {nrep.dim_orb}")
    assert leech_ok and nie_ok


# -- 8 ------------------------------------------------------------------------------------


@pytest.mark.criterion(8, "Milgram: gamma2 = rank/8 on 50 random lattices of rank <= 6")
def test_c08_milgram():
    rng = random.Random(8)
    ok = True
    for _ in range(50):
        n = rng.randint(1, 6)
        lat = lattice_of(random_even_gram(rng, n))
        ok &= gauss_sum_gamma2(from_gram(lat)) == Fraction(n, 8) % 1
    report(8, ok, "50 lattices")
    assert ok


# -- 9 ------------------------------------------------------------------------------------


def _schur_ok(rep, rank):
    return (
        rep.order_A == 2**rank
        and rep.split
        and rep.gamma2 == 0
        and rep.nullity == 1
        and rep.verdict == SYMMETRIC
        and rep.nu == 1
    )


@pytest.mark.criterion(9, "Schur indicator +1 for E8, E8+E8, Leech (<= 30 s, <= 60 s)")
def test_c09_schur(e8, e8e8, leech):
    with Timer() as t8:
        r8 = schur_indicator_involution(e8, LatticeAutomorphism.negation(8))
    ok8 = _schur_ok(r8, 8) and r8.zero_count == 136 and r8.dim_X == 16 and t8.secs <= 30
    r16 = schur_indicator_involution(e8e8, LatticeAutomorphism.negation(16))
    ok16 = _schur_ok(r16, 16)
    with Timer() as t24:
        r24 = schur_indicator_involution(leech, LatticeAutomorphism.negation(24))
    ok24 = _schur_ok(r24, 24) and r24.shortcut and r24.dim_X == 4096 and t24.secs <= 60
    report(9, ok8 and ok16 and ok24, f"E8 {t8.secs:.1f} s, Leech {t24.secs:.1f} s")
    assert ok8 and ok16 and ok24


# -- 10 -----------------------------------------------------------------------------------


def _elementary_cochains(orders, den=997):
    n = int(np.prod(orders))
    for i in range(1, n):
        for j in range(1, n):
            phi = [[0] * n for _ in range(n)]
            phi[i][j] = Fraction(1, den)
            yield phi


@pytest.mark.criterion(10, "abelian cocycles: checker, trace roundtrip, restriction, self-braiding")
def test_c10_cohomology():
    groups = [g for g in abelian_groups(16) if g]
    # coboundaries: the checks are linear in exponents, so elementary cochains and random
    # combinations cover all of them
    rng = random.Random(10)
    cob_ok = True
    for orders in groups:
        if int(np.prod(orders)) <= 8:
            cob_ok &= all(bool(verify_abelian_cocycle(coboundary(orders, phi))) for phi in _elementary_cochains(orders))
        n = int(np.prod(orders))
        for _ in range(3):
            phi = [[Fraction(rng.randrange(60), 60) if i and j else 0 for j in range(n)] for i in range(n)]
            cob_ok &= bool(verify_abelian_cocycle(coboundary(orders, phi)))
    forms_ok = True
    count = 0
    for orders in groups:
        for form in quadratic_forms_on(orders):
            w = cocycle_from_form(form)
            forms_ok &= bool(verify_abelian_cocycle(w)) and trace(w) == form_values(form)
            count += 1
    delta = two_II(1)
    w = cocycle_from_form(negate(delta))
    isotropic = [a for a in delta.elements() if any(a) and delta.q(a) == 0]
    witnesses = 0
    for a in isotropic:
        r = restrict_cyclic(w, a)
        phi = coboundary_witness(r)
        if phi is not None and coboundary(r.orders, phi) == r:
            witnesses += 1
    restr_ok = witnesses == len(isotropic) == 2  # the two isotropic Z/2 of 2{0}
    half = next(a for a in delta.elements() if delta.q(a) == Fraction(1, 2))
    braid_ok = (
        self_braiding(delta, half) == -1
        and cocycle_from_form(delta).omega(half, half) == Fraction(1, 2)
        and braiding_from_indicator(Fraction(1, 2), 1) == -1
    )
    ok = cob_ok and forms_ok and restr_ok and braid_ok
    report(10, ok, f"{count} forms, {witnesses} restriction witnesses")
    assert ok
