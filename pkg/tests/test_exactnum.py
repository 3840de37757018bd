import math
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pyjama.exactnum import (
    Irrational,
    QuadElem,
    RatInterval,
    dist_to_int,
    frac_part,
    is_squarefree,
    parse_quad,
    parse_rational_expr,
    prime_factors,
    q_add,
    q_as_rational,
    q_mul,
    q_sign,
    rat_sqrt_floor,
    sqrt_enclosure,
    squarefree_split,
)

from conftest import quad_elems, rationals


def test_dist_to_int_examples():
    assert dist_to_int(F(7, 2)) == F(1, 2)
    assert dist_to_int(0) == 0
    assert dist_to_int(F(16, 3)) == F(1, 3)


def _dist_brute(x):
    return min(abs(x - k) for k in range(math.floor(x) - 1, math.ceil(x) + 2))


@given(rationals, st.integers(-20, 20))
def test_dist_to_int_periodic_and_symmetric(x, k):
    d = dist_to_int(x)
    assert d == _dist_brute(x)
    assert dist_to_int(x + k) == d == dist_to_int(-x)
    assert 0 <= d <= F(1, 2)


@given(rationals)
def test_frac_part_range(x):
    f = frac_part(x)
    assert 0 <= f < 1 and (x - f).denominator == 1


def test_products_of_roots():
    r2 = QuadElem.sqrt(2)
    assert q_mul(r2, r2) == QuadElem.rational(2)
    assert q_mul(r2, QuadElem.sqrt(3)) == QuadElem.sqrt(6)
    assert QuadElem.sqrt(6) * QuadElem.sqrt(10) == QuadElem.sqrt(15, 2)


def test_witness_inner_product_by_hand():
    u = (QuadElem({1: F(1, 3), 2: 0}), QuadElem.sqrt(2, F(2, 3)))
    x = (QuadElem.rational(F(3, 2)), QuadElem.sqrt(2, 3))
    assert q_add(q_mul(u[0], x[0]), q_mul(u[1], x[1])) == QuadElem.rational(F(9, 2))


def test_sign_examples():
    assert q_sign(QuadElem({1: F(3, 2), 2: -1})) == 1
    assert q_sign(QuadElem({2: 1, 3: 1, 6: -1})) == 1
    assert q_sign(QuadElem()) == 0
    assert q_sign(QuadElem({1: F(-3, 2), 2: 1})) == -1
    # continued-fraction convergents of sqrt(2) alternate around it
    assert q_sign(QuadElem({1: F(1393, 985), 2: -1})) == -1
    assert q_sign(QuadElem({1: F(3363, 2378), 2: -1})) == 1


def test_as_rational_examples():
    assert q_as_rational(QuadElem.rational(F(9, 2))) == F(9, 2)
    with pytest.raises(Irrational):
        q_as_rational(QuadElem.sqrt(3))
    assert q_as_rational(QuadElem({1: F(1, 2), 5: 0})) == F(1, 2)


def test_terms_normalized_on_input():
    q = QuadElem({8: 1, 12: F(1, 2)})
    assert q.terms == {2: 2, 3: 1}
    assert parse_quad("sqrt(8)") == QuadElem.sqrt(2, 2)


@given(quad_elems(), quad_elems(), quad_elems())
def test_ring_laws(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) - b == a


@given(quad_elems(), quad_elems())
def test_sign_multiplicative(a, b):
    assert q_sign(a) * q_sign(b) == q_sign(q_mul(a, b))


@given(quad_elems(), quad_elems())
def test_sign_agrees_with_floats_when_clear(a, b):
    diff = (a - b).approx()
    if abs(diff) > 1e-6:
        assert q_sign(a - b) == (1 if diff > 0 else -1)


@given(quad_elems())
def test_results_stay_squarefree(a):
    for q in (a * a, a * QuadElem.sqrt(6) * QuadElem.sqrt(10), a + QuadElem.sqrt(15)):
        assert all(is_squarefree(r) for r in q.terms)
        assert all(c != 0 for c in q.terms.values())


@given(quad_elems())
def test_inverse(a):
    if not a.is_zero():
        assert a * a.inverse() == QuadElem.rational(1)


@given(quad_elems())
def test_text_round_trip(a):
    assert QuadElem.from_text(a.to_text()) == a
    assert QuadElem.from_triples(a.to_triples()) == a


def test_text_form():
    assert QuadElem({1: F(-1, 2), 3: F(1, 2)}).to_text() == "-1/2 + 1/2*sqrt(3)"


def test_squarefree_helpers():
    assert squarefree_split(72) == (6, 2)
    assert prime_factors(360) == (2, 3, 5)
    assert is_squarefree(30) and not is_squarefree(18)


def test_sqrt_enclosures():
    for d in (2, 3, 5, 1000003):
        iv = sqrt_enclosure(d, 40)
        assert iv.lo ** 2 <= d <= iv.hi ** 2
        assert iv.width <= F(1, 2 ** 39)
    r = rat_sqrt_floor(F(2, 9))
    assert r ** 2 <= F(2, 9) < (r + F(1, 2 ** 32)) ** 2


def test_intervals():
    a = RatInterval(F(1, 3), F(1, 2))
    b = RatInterval(F(-1), F(2))
    assert (a + b).lo == F(-2, 3) and (a + b).hi == F(5, 2)
    assert (a * b).lo == F(-1, 2) and (a * b).hi == 1
    assert list((a + b).integers()) == [0, 1, 2]
    assert a.scale(-3).lo == F(-3, 2)
    with pytest.raises(ValueError):
        RatInterval(1, 0)


def test_rational_expressions():
    assert parse_rational_expr("1/3-1/48") == F(5, 16)
    assert parse_rational_expr("15/48+1/1000000") == F(5, 16) + F(1, 10 ** 6)
    assert parse_rational_expr("10**-3") == F(1, 1000)
    assert parse_rational_expr("-(2/3)*3") == -2
    for bad in ("0.25", "x", "1/0", "2**(1/2)", "__import__('os')"):
        with pytest.raises(ValueError):
            parse_rational_expr(bad)
