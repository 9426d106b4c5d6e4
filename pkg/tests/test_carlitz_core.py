import pytest

from ffgauss.carlitz import (
    FieldRing,
    TwistedPoly,
    adjoint_eval,
    carlitz_coeffs,
    carlitz_eval,
    cyclotomic_poly,
    order_mod,
    poonen_h,
)
from ffgauss.ffield import build_field
from ffgauss.poly import Poly, enumerate_below

from conftest import P


def enc(cs):
    return [c.encode() for c in cs]


def test_carlitz_coefficient_examples():
    q = 3
    assert enc(carlitz_coeffs(P(q, "01"))) == ["01", "1"]
    assert enc(carlitz_coeffs(Poly.const(q, 1))) == ["1"]
    # C_{t^2} = t^2 z + (t^q + t) z^q + z^(q^2)
    assert carlitz_coeffs(P(q, "001")) == (P(q, "001"), P(q, "0101"), P(q, "1"))


@pytest.mark.parametrize("q", [2, 3, 4])
def test_carlitz_is_a_ring_map(q):
    for a in enumerate_below(q, 2):
        for b in enumerate_below(q, 2):
            assert TwistedPoly.carlitz(a * b) == TwistedPoly.carlitz(a) * TwistedPoly.carlitz(b)
            assert TwistedPoly.carlitz(a + b) == TwistedPoly.carlitz(a) + TwistedPoly.carlitz(b)


def residue_ring(q, v):
    F = build_field(q, v.deg)
    theta = next(z for z in F.elements() if FieldRing(F, z).image(v) == 0)
    return FieldRing(F, theta)


@pytest.mark.parametrize("q, v", [(3, "01"), (2, "111"), (3, "1201")])
def test_carlitz_v_is_frobenius_mod_v(q, v):
    v = P(q, v)
    R = residue_ring(q, v)
    for z in R.F.elements():
        assert carlitz_eval(v, z, R) == R.F.frob(z, v.deg)
        assert carlitz_eval(P(q, "11"), 0, R) == 0


def test_carlitz_of_v_power_minus_one_kills_residue_field():
    q, v = 2, P(2, "111")
    F = build_field(q, 2 * 3)
    theta = next(z for z in F.elements() if FieldRing(F, z).image(v) == 0)
    R = FieldRing(F, theta)
    m = v ** 3 - 1
    assert all(carlitz_eval(m, z, R) == 0 for z in F.elements())


def test_adjoint_examples():
    q = 3
    F = build_field(q, 2)
    R = FieldRing(F, 4)
    for z in F.elements():
        assert adjoint_eval(P(q, "01"), z, R) == F.add(F.mul(4, z), F.frob(z, -1))
        assert adjoint_eval(Poly.const(q, 1), z, R) == z
    assert adjoint_eval(P(q, "121"), 0, R) == 0


def test_adjoint_is_dual_under_trace():
    """Tr(C_a(x) y) = Tr(x C*_a(y)) on a finite field."""
    q = 2
    F = build_field(q, 4)
    R = FieldRing(F, 6)

    def tr(z):
        acc = 0
        for j in range(F.m):
            acc = F.add(acc, F.frob(z, j))
        return acc

    a = P(q, "1101")
    for x in range(0, F.size, 3):
        for y in range(1, F.size, 5):
            assert tr(F.mul(carlitz_eval(a, x, R), y)) == tr(F.mul(x, adjoint_eval(a, y, R)))


def test_cyclotomic_examples():
    q = 3
    assert enc(cyclotomic_poly(P(q, "01"))) == ["01", "0", "1"]
    assert enc(cyclotomic_poly(P(q, "21"))) == ["21", "0", "1"]
    v = P(q, "1201")
    assert len(cyclotomic_poly(v)) - 1 == q ** 3 - 1
    n = P(2, "001")  # t^2: C_{t^2}(z) / C_t(z)
    cyc = cyclotomic_poly(n)
    assert len(cyc) - 1 == 2


def test_order_mod_examples():
    assert order_mod(P(3, "01"), P(3, "21")) == 1
    v = P(3, "1201")
    assert order_mod(v, v - 1) == 1
    assert order_mod(P(2, "01"), P(2, "101")) == 2
    assert order_mod(P(2, "01"), P(2, "111")) == 3
    with pytest.raises(ValueError):
        order_mod(P(2, "01"), P(2, "001"))


def test_poonen_h_examples():
    q = 3
    F = build_field(q, 2)
    R = FieldRing(F, 4)
    h, closure = poonen_h([5], R)
    assert h == [5] and closure == 0
    h, closure = poonen_h([5, 7], R)
    assert h == [5] and closure == F.add(7, F.frob(5, 1))
    h, closure = poonen_h([5, 7, 2], R)
    assert h == [5, F.add(7, F.frob(5, 1))]
