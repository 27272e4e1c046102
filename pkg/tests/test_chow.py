from itertools import product
from math import factorial, prod

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fmckit.chow import (
    FactorsThrough,
    NotAPencil,
    SquareFreeClass,
    pencil_classify_product,
    sf_integrate,
    sf_mul,
)


def brute_top_power(a):
    """Sum over ordered index words with no repeated letter (h_i^2 = 0)."""
    n = len(a)
    total = 0
    for word in product(range(n), repeat=n):
        if len(set(word)) == n:
            total += prod(a[i] for i in word)
    return total


def test_products_kill_squares():
    n = 3
    h1, h2 = SquareFreeClass.h(n, 1), SquareFreeClass.h(n, 2)
    assert (h1 * h1).is_zero()
    assert sf_mul(h1, h2).terms == {(1, 2): 1}
    assert sf_integrate(h1 * h2 * SquareFreeClass.h(n, 3)) == 1


def test_square_of_a_divisor():
    D = SquareFreeClass.divisor([1, 2, 0])
    assert (D * D).terms == {(1, 2): 4}


@pytest.mark.parametrize("n", range(1, 6))
def test_top_power_matches_expansion(n):
    for a in product(range(3), repeat=n):
        D = SquareFreeClass.divisor(a)
        got = sf_integrate(D**n)
        assert got == brute_top_power(a) == factorial(n) * prod(a)


def test_pencil_examples():
    assert pencil_classify_product([0, 3, 0]) == FactorsThrough(2, 3)
    assert pencil_classify_product([1, 1, 0]) == NotAPencil("square-nonzero")
    assert pencil_classify_product([0, 0]) == NotAPencil("zero-class")
    assert pencil_classify_product([1, -1]) == NotAPencil("not-nef")


def test_json_round_trip():
    D = SquareFreeClass.divisor([1, 0, 2])
    doc = (D * D).to_json()
    assert doc == {"n": 3, "terms": [{"subset": [1, 3], "coef": 4}]}
    assert SquareFreeClass.from_json(doc) == D * D


def test_rejects_bad_monomials():
    with pytest.raises(ValueError):
        SquareFreeClass(2, {(1, 1): 1})
    with pytest.raises(ValueError):
        SquareFreeClass(2, {(3,): 1})
    with pytest.raises(ValueError):
        SquareFreeClass.h(2, 1) * SquareFreeClass.h(3, 1)


coeff_lists = st.integers(1, 5).flatmap(lambda n: st.lists(st.integers(-3, 3), min_size=n, max_size=n))


@given(coeff_lists, coeff_lists, coeff_lists)
def test_ring_axioms(a, b, c):
    n = min(len(a), len(b), len(c))
    A, B, C = (SquareFreeClass.divisor(x[:n]) for x in (a, b, c))
    assert A * B == B * A
    assert (A * B) * C == A * (B * C)
    assert A * (B + C) == A * B + A * C


@given(coeff_lists)
def test_pencil_iff_single_support(a):
    res = pencil_classify_product(a)
    support = [x for x in a if x]
    if any(x < 0 for x in a) or not support:
        assert isinstance(res, NotAPencil)
    else:
        assert isinstance(res, FactorsThrough) == (len(support) == 1)
