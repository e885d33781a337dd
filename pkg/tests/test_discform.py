import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from helpers import dual_quotient_q_values, even_grams, lattice_of, random_even_gram
from latvac.discform import (
    FinQuadForm,
    TRIVIAL,
    arf_invariant,
    direct_sum,
    from_gram,
    gauss_sum_gamma2,
    gauss_sum_numeric,
    is_nondegenerate,
    is_split,
    is_totally_isotropic,
    present,
    quarter_form,
    radical_size,
    span,
    two_II,
)
from latvac.errors import LatvacError
from latvac.lattice import LatticeAutomorphism, sublattices_M_N


def test_a1():
    f = from_gram(lattice_of([[2]]))
    assert f.orders == (2,) and f.q_gen == (Fraction(1, 4),)
    assert gauss_sum_gamma2(f) == Fraction(1, 8)


def test_odd_lattice_rejected():
    with pytest.raises(LatvacError, match="lattice not even"):
        from_gram(lattice_of([[1]]))


@given(even_grams(max_rank=3, off=1))
@settings(max_examples=25, deadline=None)
def test_from_gram_vs_dual_quotient(gram):
    lat = lattice_of(gram)
    if abs(lat.det) > 40:
        return
    f = from_gram(lat)
    assert f.size == abs(lat.det)
    assert sorted(f.q_values()) == dual_quotient_q_values(gram)
    assert is_nondegenerate(f)


@given(even_grams(max_rank=5))
@settings(max_examples=40, deadline=None)
def test_milgram(gram):
    lat = lattice_of(gram)
    f = from_gram(lat)
    assert gauss_sum_gamma2(f) == Fraction(lat.rank, 8) % 1


def test_gauss_numeric_agrees():
    rng = random.Random(5)
    for _ in range(10):
        f = from_gram(lattice_of(random_even_gram(rng, rng.randint(1, 4))))
        import cmath

        exact = cmath.exp(2j * cmath.pi * float(gauss_sum_gamma2(f)))
        assert abs(gauss_sum_numeric(f) - exact) < 1e-9


def test_two_II():
    plus, minus = two_II(1), two_II(-1)
    assert sorted(plus.q_values()) == [0, 0, 0, Fraction(1, 2)]
    assert sorted(minus.q_values()) == [0, Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)]
    assert gauss_sum_gamma2(plus) == 0 and gauss_sum_gamma2(minus) == Fraction(1, 2)
    assert arf_invariant(plus) == 0 and arf_invariant(minus) == 1
    ok, wit = is_split(plus)
    assert ok and is_totally_isotropic(plus, wit)
    assert is_split(minus) == (False, None)
    assert is_split(direct_sum(minus, minus))[0]


def test_split_requires_even_two_elementary():
    with pytest.raises(LatvacError, match="unsupported form type"):
        is_split(from_gram(lattice_of([[2]])))


def test_e8_quarter_form(e8):
    m, n, _ = sublattices_M_N(e8, LatticeAutomorphism.negation(8))
    a = quarter_form(n, m)
    assert a.size == 256
    assert sum(1 for x in a.elements() if a.q(x) == 0) == 136
    assert gauss_sum_gamma2(a) == 0
    ok, wit = is_split(a)
    assert ok and len(span(a, wit)) == 16


def test_degenerate_radical():
    f = FinQuadForm.make((2, 2), [0, 0], [[0, 0], [0, 0]])
    assert radical_size(f) == 4 and not is_nondegenerate(f)
    assert TRIVIAL.size == 1 and is_nondegenerate(TRIVIAL)


def test_not_well_defined():
    with pytest.raises(LatvacError, match="not well defined"):
        FinQuadForm.make((3,), [Fraction(1, 2)])


def test_present_and_sum():
    # Z/2 x Z/3 with q = 1/4, 1/3 becomes Z/6
    f = present((2, 3), [Fraction(1, 4), Fraction(1, 3)], [[Fraction(1, 2), 0], [0, Fraction(2, 3)]])
    assert f.orders == (6,)
    assert sorted(f.q_values()) == sorted(
        (Fraction(a * a, 4) + Fraction(b * b, 3)) % 1 for a in range(2) for b in range(3)
    )
    s = direct_sum(from_gram(lattice_of([[2]])), from_gram(lattice_of([[2]])))
    assert sorted(s.q_values()) == [0, Fraction(1, 4), Fraction(1, 4), Fraction(1, 2)]


def test_form_arithmetic():
    f = from_gram(lattice_of([[2, -1], [-1, 2]]))
    assert f.orders == (3,)
    g = f.unit(0)
    assert f.element_order(g) == 3
    assert f.add(g, f.neg(g)) == f.zero()
    assert f.q(f.scale(2, g)) == (4 * f.q(g)) % 1
    for x in f.elements():
        for y in f.elements():
            assert f.b(x, y) == (f.q(f.add(x, y)) - f.q(x) - f.q(y)) % 1
