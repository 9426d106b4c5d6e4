from fractions import Fraction

import pytest

from ffgauss.poly import (
    AFrac,
    Poly,
    RatFunc,
    a_fractional,
    digit_shift,
    dual_families,
    enumerate_below,
    enumerate_monic,
    factor,
    gcd,
    inverse_mod,
    is_irreducible,
    parse_poly,
    q_digits,
    q_digits_of,
    residue_map,
    sgn_flat,
    xgcd,
)

from conftest import P


def test_enumerate_monic_counts():
    assert [a.encode() for a in enumerate_monic(3, 0)] == ["1"]
    assert sorted(a.encode() for a in enumerate_monic(2, 1)) == ["01", "11"]
    assert len(list(enumerate_monic(3, 2))) == 9
    assert all(a.is_monic() and a.deg == 2 for a in enumerate_monic(3, 2))


def test_encoding_round_trip():
    a = P(3, "2101")
    assert a.encode() == "2101" and a.deg == 3
    assert parse_poly(3, "t^3+t+2") == a
    assert parse_poly(3, "t-1") == P(3, "21")
    assert parse_poly(2, "t^2+1") == P(2, "101")
    assert parse_poly(4, "t + 3") == P(4, "31")


def test_arithmetic_basics():
    q = 3
    a, b = P(q, "121"), P(q, "21")
    qt, r = a.divmod(b)
    assert qt * b + r == a and r.deg < b.deg
    g, s, t = xgcd(a, b)
    assert s * a + t * b == g
    n = P(q, "101")
    for c in enumerate_below(q, 2):
        if not c.is_zero():
            assert (c * inverse_mod(c, n)) % n == Poly.const(q, 1)


def test_factor_and_irreducible():
    a = P(3, "2101")  # t^3 + t + 2 = (t + 2)(t^2 + t + 1) over F_3
    assert not is_irreducible(a)
    prod = Poly.const(3, 1)
    for f, e in factor(a):
        assert is_irreducible(f)
        prod = prod * f ** e
    assert prod == a
    assert is_irreducible(P(3, "1201"))


@pytest.mark.parametrize(
    "a, n, res",
    [("1", "01", 1), ("001", "001", 0), ("01", "001", 1)],
)
def test_residue_examples(a, n, res):
    assert residue_map(P(2, a), P(2, n)) == res
    assert residue_map(P(3, a), P(3, n)) == res


def test_dual_family_examples():
    a, b = dual_families(P(3, "001"))
    assert [x.encode() for x in a] == ["1", "01"]
    assert [x.encode() for x in b] == ["01", "1"]
    a, b = dual_families(P(2, "01"))
    assert [x.encode() for x in a] == ["1"] and [x.encode() for x in b] == ["1"]


@pytest.mark.parametrize("q, n", [(2, "111"), (3, "2011"), (3, "21"), (4, "321")])
def test_dual_families_are_dual(q, n):
    n = P(q, n)
    a, b = dual_families(n)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            assert residue_map(ai * bj, n) == (1 if i == j else 0)


def test_a_fractional():
    q = 3
    x = a_fractional(RatFunc(P(q, "101"), P(q, "01")))
    assert x == AFrac(Poly.const(q, 1), P(q, "01"))
    assert a_fractional(RatFunc(P(q, "21"))).is_zero()
    y = AFrac(P(q, "11"), P(q, "101"))
    assert a_fractional(y.ratfunc()) == y


def test_afrac_rejects_non_reduced():
    with pytest.raises(ValueError):
        AFrac(P(3, "001"), P(3, "21"))
    with pytest.raises(ValueError):
        AFrac(Poly.const(3, 1), P(3, "02"))


def test_q_digits_examples():
    q, t = 3, 4
    assert q_digits(q, (q ** t - 1) // (q - 1), t).digits == (1, 1, 1, 1)
    assert q_digits(q, q ** t, t).digits == (1, 0, 0, 0)
    assert q_digits(q, 0, t).digits == (0, 0, 0, 0)
    assert q_digits_of(q, Fraction(1, 2), t).digits == (1, 1, 1, 1)
    with pytest.raises(ValueError):
        q_digits_of(q, Fraction(1, 7), 2)


def test_digit_shift_examples():
    y = q_digits(2, 1, 3)
    assert y.digits == (1, 0, 0)
    assert digit_shift(y, 1).digits == (0, 1, 0)
    assert digit_shift(y, 3) == y
    ones = q_digits(3, 13, 3)
    assert ones.digits == (1, 1, 1)
    assert all(digit_shift(ones, h) == ones for h in range(5))


def test_digit_shift_is_multiplication_by_q():
    q, t = 3, 3
    M = q ** t - 1
    for r in range(M):
        y = q_digits(q, r, t)
        assert digit_shift(y, 1).numerator == (q * r) % M


def test_sgn_flat_examples():
    q, v = 3, P(3, "01")
    assert sgn_flat(RatFunc(v), v) == (1, RatFunc(Poly.const(q, 1)))
    x = RatFunc(P(q, "11"))
    assert sgn_flat(x, v) == (1, x)
    assert sgn_flat(RatFunc(Poly.const(q, 0)), v) == (0, RatFunc(Poly.const(q, 1)))
    s, flat = sgn_flat(RatFunc(P(q, "12"), P(q, "11")), v)
    assert s == 2
    with pytest.raises(ValueError):
        sgn_flat(RatFunc(Poly.const(q, 1), v), v)


def test_ratfunc_normal_form():
    q = 3
    x = RatFunc(P(q, "21") * P(q, "11"), P(q, "21").scale(2))
    assert x.den.is_monic() and gcd(x.num, x.den).deg == 0
    assert x == RatFunc(P(q, "11").scale(2))
    with pytest.raises(ZeroDivisionError):
        RatFunc(Poly.const(q, 1), Poly.const(q, 0))
