import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sallylab.poly import (DEGREVLEX, LEX, ParseError, PolyError, PolyRing, Polynomial, RingMismatchError,
                           compare_monomials, divides, elimination, guard_mask, monomial_lcm, pack)

R = PolyRing(["x", "y", "z"], 32003)
P = 32003

exps = st.tuples(*[st.integers(0, 6)] * 3)
polys = st.dictionaries(exps, st.integers(1, P - 1), max_size=6)


def _mk(d):
    return Polynomial(R, dict(d))


def convolve(a, b):
    """Schoolbook product of coefficient dictionaries."""
    out = {}
    for (m, c), (n, e) in itertools.product(a.items(), b.items()):
        k = tuple(i + j for i, j in zip(m, n))
        out[k] = (out.get(k, 0) + c * e) % P
    return {k: v for k, v in out.items() if v}


def degrevlex_cmp(a, b):
    """Textbook degrevlex: total degree, then the last differing exponent decides (smaller wins)."""
    if sum(a) != sum(b):
        return (sum(a) > sum(b)) - (sum(a) < sum(b))
    for i in reversed(range(len(a))):
        if a[i] != b[i]:
            return 1 if a[i] < b[i] else -1
    return 0


def test_parse_and_print_roundtrip():
    f = R.parse("x^2*y - 3*y*z + 7")
    assert str(f) == "x^2*y + 32000*y*z + 7"
    assert R.parse(str(f)) == f


def test_parse_parentheses_and_powers():
    assert R.parse("(x+y)^2") == R.parse("x^2 + 2*x*y + y^2")
    assert R.parse("-(x-1)") == R.parse("1 - x")
    assert R.parse("2^3*x") == R.parse("8*x")


def test_rational_literal_in_prime_field():
    # 1/2 means the inverse of 2 in F_p
    assert R.parse("1/2*x") * R.constant(2) == R.parse("x")


def test_rationals_in_characteristic_zero():
    Q = PolyRing(["x"], 0)
    f = Q.parse("1/2*x - 3")
    assert f.leading_coefficient() == Fraction(1, 2)
    assert str(f * Q.constant(2)) == "x - 6"


@pytest.mark.parametrize("text", ["", "x+", "x^", "x^-1", "u", "x**2", "x $ y", "(x", "x)"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        R.parse(text)


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as info:
        R.parse("x + $")
    assert info.value.position == 4


def test_ring_validation():
    with pytest.raises(PolyError):
        PolyRing(["x"], 32004)
    with pytest.raises(PolyError):
        PolyRing(["x", "x"])
    with pytest.raises(PolyError):
        PolyRing([])


def test_ring_mismatch():
    S = PolyRing(["x", "y"], 32003)
    with pytest.raises(RingMismatchError):
        R.parse("x") + S.parse("x")


def test_order_and_degree():
    f = R.parse("x^3 + x*y + y^5*z")
    assert f.total_degree() == 6
    assert f.order() == 2
    assert f.leading_monomial() == (0, 5, 1)


@given(polys, polys)
def test_multiplication_matches_schoolbook(a, b):
    assert (_mk(a) * _mk(b)).as_dict() == convolve(a, b)


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    f, g, h = _mk(a), _mk(b), _mk(c)
    assert f * (g + h) == f * g + f * h
    assert (f - g) + g == f
    assert f * g == g * f


@given(polys)
def test_power_is_repeated_product(a):
    f = _mk(a)
    assert f ** 3 == f * f * f
    assert f ** 0 == R.one()


@given(exps, exps)
def test_degrevlex_matches_textbook_definition(a, b):
    assert compare_monomials(a, b, DEGREVLEX) == degrevlex_cmp(a, b)


@given(exps, exps)
def test_lex_order(a, b):
    assert compare_monomials(a, b, LEX) == (a > b) - (a < b)


@given(exps, exps)
def test_elimination_order_prefers_first_block(a, b):
    c = compare_monomials(a, b, elimination(1))
    if a[0] != b[0]:
        assert c == (1 if a[0] > b[0] else -1)
    else:
        assert c == degrevlex_cmp(a, b)


@given(exps, exps, exps)
def test_keys_are_additive(a, b, c):
    # the order is compatible with multiplication
    ab = tuple(i + j for i, j in zip(a, c))
    bc = tuple(i + j for i, j in zip(b, c))
    assert compare_monomials(ab, bc) == compare_monomials(a, b)


@given(exps, exps)
def test_packed_divisibility(a, b):
    expected = all(i <= j for i, j in zip(a, b))
    assert divides(a, b) == expected
    assert (not ((pack(b) - pack(a)) & guard_mask(3))) == expected


@given(exps, exps)
def test_lcm(a, b):
    L = monomial_lcm(a, b)
    assert divides(a, L) and divides(b, L)
    assert all(l in (i, j) for l, i, j in zip(L, a, b))


@given(polys, polys)
def test_division_identity(a, b):
    f, g = _mk(a), _mk(b)
    if not g:
        return
    q, r = f.divide(g)
    assert q * g + r == f
    lm = g.leading_monomial()
    assert all(not divides(lm, m) for m in r.as_dict())


def test_exact_division():
    f = R.parse("(x+y)*(x-z)")
    assert f.exact_div(R.parse("x-z")) == R.parse("x+y")
    with pytest.raises(PolyError):
        f.exact_div(R.parse("x+1"))


def test_evaluate():
    assert R.parse("x^2 + y*z - 1").evaluate((2, 3, 4)) == 15
