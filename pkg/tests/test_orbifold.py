from fractions import Fraction
from math import gcd

import pytest

from helpers import lattice_of
from latvac.errors import LatvacError
from latvac.lattice import LatticeAutomorphism, direct_sum
from latvac.orbifold import (
    automorphism_type,
    dedekind_psi,
    dimension_coefficient,
    dimension_formula,
    divisor_sum,
    euler_phi,
    fixed_V1_dim,
    fusion_group_of_type,
    isotropic_pair,
    lambda_fn,
    orbifold_report,
    power_weights,
    twisted_conformal_weight,
)

A2 = [[2, -1], [-1, 2]]


def _block_diag(blocks):
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    k = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[k + i][k + j] = x
        k += len(b)
    return out


def _rot4_lattice():
    """(A1 + A1)^4 with a quarter turn in each plane."""
    gram = _block_diag([[[2, 0], [0, 2]]] * 4)
    rot = _block_diag([[[0, -1], [1, 0]]] * 4)
    lat = lattice_of(gram)
    return lat, LatticeAutomorphism.of(lat, rot)


@pytest.mark.parametrize("n", range(1, 40))
def test_arithmetic_functions(n):
    assert euler_phi(n) == sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)
    assert divisor_sum(n) == sum(d for d in range(1, n + 1) if n % d == 0)
    # psi(n) = index of Gamma_0(n) = #P^1(Z/n)
    pairs = sum(1 for c in range(n) for d in range(n) if gcd(gcd(c, d), n) == 1)
    assert dedekind_psi(n) == pairs // euler_phi(n)
    primes = [p for p in range(2, n + 1) if n % p == 0 and all(p % q for q in range(2, p))]
    expected = 1
    for p in primes:
        expected *= -p
    assert lambda_fn(n) == expected


def test_negation_types(e8, leech):
    t = automorphism_type(e8, LatticeAutomorphism.negation(8))
    assert (t.n, t.r, t.rho) == (2, 0, Fraction(1, 2)) and str(t) == "2{0}"
    t = automorphism_type(leech, LatticeAutomorphism.negation(24))
    assert t.rho == Fraction(3, 2) and str(t) == "2{0}"


def test_order3_on_a2():
    lat = lattice_of(A2)
    # e1 -> e2 -> -e1 - e2
    sigma = LatticeAutomorphism.of(lat, [[0, -1], [1, -1]])
    assert sigma.order == 3
    assert twisted_conformal_weight(lat, sigma) == Fraction(1, 9)
    t = automorphism_type(lat, sigma)
    assert (t.n, t.r) == (3, 1)
    assert set(power_weights(lat, sigma).values()) == {Fraction(1, 9)}
    assert orbifold_report(lat, sigma).pair is None


def test_lift_checks():
    a2 = lattice_of(A2)
    swap = LatticeAutomorphism.of(a2, [[0, 1], [1, 0]])
    with pytest.raises(LatvacError, match="standard lift has order 2n"):
        automorphism_type(a2, swap)
    lat, rot = _rot4_lattice()
    with pytest.raises(LatvacError, match="attest"):
        automorphism_type(lat, rot)
    t = automorphism_type(lat, rot, attest_lift=True)
    assert (t.n, t.r, t.rho) == (4, 2, Fraction(3, 8))


def test_non_integral_weight(a1):
    with pytest.raises(LatvacError, match="not an integer"):
        automorphism_type(a1, LatticeAutomorphism.negation(1))


@pytest.mark.parametrize("n", range(1, 7))
def test_fusion_pairs_iff_r_zero(n):
    for r in range(n):
        form = fusion_group_of_type(n, r)
        assert form.size == n * n
        if r == 0:
            s, t = isotropic_pair(form, n)
            assert len(s) == len(t) == n
            assert set(s) & set(t) == {form.zero()}
            assert all(form.q(x) == 0 for x in s + t)
        else:
            with pytest.raises(LatvacError, match="no isotropic pair"):
                isotropic_pair(form, n)


def test_fusion_2_1_is_not_cyclic():
    form = fusion_group_of_type(2, 1)
    assert form.orders == (2, 2)
    # dual basis (1/2, 1/2) and (1/2, 0) of [[-2, 2], [2, 0]]
    assert sorted(form.q_values()) == [0, 0, Fraction(1, 4), Fraction(3, 4)]


def test_fusion_errors():
    with pytest.raises(LatvacError):
        fusion_group_of_type(3, 3)
    with pytest.raises(LatvacError):
        fusion_group_of_type(0, 0)


def test_dimension_coefficients():
    assert [dimension_coefficient(2, d) for d in (1, 2)] == [3, -1]
    assert [dimension_coefficient(4, d) for d in (1, 2, 4)] == [6, Fraction(-3, 2), Fraction(-1, 2)]
    assert dimension_coefficient(4, 2, "divisor-sum") == Fraction(-9, 2)
    with pytest.raises(LatvacError, match="phi mode"):
        dimension_coefficient(4, 2, "other")


def test_dimension_formula():
    assert dimension_formula(2, {1: 0, 2: 24}) == 0
    assert dimension_formula(1, {1: 48}) == 48
    assert dimension_formula(2, {1: 552, 2: 1128}) == 24 + 3 * 552 - 1128
    with pytest.raises(LatvacError, match="missing"):
        dimension_formula(4, {1: 0, 4: 24})
    with pytest.raises(LatvacError, match="genus zero"):
        dimension_formula(11, {1: 0, 11: 24})
    with pytest.raises(LatvacError, match="inconsistent"):
        dimension_formula(4, {1: 0, 2: 0, 4: 49})


def test_fixed_dims(e8, e8e8):
    assert fixed_V1_dim(e8, LatticeAutomorphism.negation(8)) == 120
    swap = [[int(j == (i + 8) % 16) for j in range(16)] for i in range(16)]
    assert fixed_V1_dim(e8e8, LatticeAutomorphism.of(e8e8, swap)) == 248
    lat, rot = _rot4_lattice()
    with pytest.raises(LatvacError, match="only involutions"):
        fixed_V1_dim(lat, rot)


def test_report_notes():
    lat, rot = _rot4_lattice()
    rep = orbifold_report(lat, rot, attest_lift=True)
    assert rep.dim_orb is None and rep.pair is None
    assert any("--dims" in n for n in rep.notes)


def test_direct_sum_negation_weight(e8):
    lat = direct_sum(e8, e8)
    assert twisted_conformal_weight(lat, LatticeAutomorphism.negation(16)) == 1
