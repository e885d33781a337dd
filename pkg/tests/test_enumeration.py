import random

from hypothesis import given, settings

from helpers import box_counts, box_vectors, even_grams, random_even_gram
from latvac.enumeration import _count_compiled, count_by_norm, count_by_norm_exact, enumerate_short


@given(even_grams(max_rank=4))
@settings(max_examples=40, deadline=None)
def test_enumerate_matches_box(gram):
    bound = 8
    got = sorted((tuple(y), n) for y, n in enumerate_short(gram, bound))
    assert got == sorted(box_vectors(gram, bound))


@given(even_grams(max_rank=3))
@settings(max_examples=30, deadline=None)
def test_coset_enumeration(gram):
    n = len(gram)
    shift = [1] + [0] * (n - 1)
    got = sorted(tuple(y) for y, _ in enumerate_short(gram, 12, shift=shift, modulus=2))
    want = sorted(x for x, _ in box_vectors(gram, 12) if x[0] % 2 == 1 and all(v % 2 == 0 for v in x[1:]))
    assert got == want


@given(even_grams(max_rank=4))
@settings(max_examples=30, deadline=None)
def test_counts(gram):
    assert count_by_norm(gram, 10) == box_counts(gram, 10)


def test_compiled_kernel_agrees_with_exact(e8):
    assert _count_compiled(e8.gram, 6) == count_by_norm_exact(e8.gram, 6)
    g = random_even_gram(random.Random(3), 6)
    assert _count_compiled(g, 14) == count_by_norm_exact(g, 14)


def test_rank_zero():
    assert list(enumerate_short([], 4)) == [((), 0)]
