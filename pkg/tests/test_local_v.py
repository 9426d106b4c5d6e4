from fractions import Fraction

import pytest

from ffgauss.carlitz import carlitz_eval, cyclotomic_poly, zpoly_eval
from ffgauss.ffield import build_field
from ffgauss.poly import Poly
from ffgauss.vadic import hensel_lift, make_context, ramified_extend, unramified

from conftest import P, context

# (1 - t)^(1/2) over F_3 from the binomial series, coefficients of t^0..t^19
SQRT_ONE_MINUS_T_F3 = [1, 1, 1, 2, 2, 2, 0, 0, 0, 2, 2, 2, 1, 1, 1, 0, 0, 0, 0, 0]


def binomial_root(p: int, exponent: Fraction, count: int) -> list[int]:
    """Coefficients of (1 - t)^exponent, reduced mod p (the exponent must be p-integral)."""
    out, c = [], Fraction(1)
    for k in range(count):
        val = c * (-1) ** k
        out.append(val.numerator * pow(val.denominator, -1, p) % p)
        c = c * (exponent - k) / (k + 1)
    return out


def test_binomial_oracle_matches_frozen_values():
    assert binomial_root(3, Fraction(1, 2), 20) == SQRT_ONE_MINUS_T_F3


def test_context_for_t_minus_one():
    ctx = make_context(3, P(3, "01"), P(3, "21"), 20)
    assert ctx.l == 1 and ctx.dl == 1
    assert ctx.lambda_bar == 1
    assert [ctx.lam.coeff(i) for i in range(20)] == SQRT_ONE_MINUS_T_F3


def test_context_order_one_when_v_is_one_mod_n():
    ctx = make_context(2, P(2, "111"), P(2, "01"), 10)
    assert ctx.l == 1 and ctx.d == 2


@pytest.mark.parametrize("q, v, n", [(3, "01", "21"), (3, "01", "101"), (2, "111", "101"), (3, "11", "001")])
def test_lambda_is_a_primitive_torsion_point(q, v, n):
    ctx = context(q, v, n)
    val = zpoly_eval(cyclotomic_poly(ctx.n), ctx.lam, ctx.W)
    assert val.is_zero() or val.val >= ctx.prec
    assert carlitz_eval(ctx.n, ctx.lam, ctx.W).val >= ctx.prec


def test_hensel_examples():
    W = unramified(3, P(3, "01"), build_field(3, 1), 20)
    root = hensel_lift([W.one() - W.theta(), W.zero(), W.const(2)], 1, W)
    # z^2 = 1 - t written as -z^2 + (1 - t) = 0 with leading coefficient -1 = 2
    assert [root.coeff(i) for i in range(20)] == SQRT_ONE_MINUS_T_F3
    c = hensel_lift([W.const(1), W.one()], 2, W)  # z + 1
    assert c.is_exact or c.prec >= 20
    assert c.coeff(0) == 2 and len(c.c) == 1
    K = build_field(3, 2)
    W2 = unramified(3, P(3, "01"), K, 10)
    # z^(q-1) - 1 = z^2 - 1: the Teichmuller constants are exact roots
    for r0 in (1, 2):
        teich = hensel_lift([W2.const(K.neg(1)), W2.zero(), W2.one()], r0, W2)
        assert teich.c == [r0] and teich.val == 0


def test_hensel_rejects_non_roots():
    W = unramified(3, P(3, "01"), build_field(3, 1), 8)
    with pytest.raises(ValueError):
        hensel_lift([W.const(1), W.zero(), W.one()], 1, W)
    with pytest.raises(ValueError):
        hensel_lift([W.zero(), W.zero(), W.one()], 0, W)


@pytest.mark.parametrize("q, v, n", [(3, "01", "21"), (3, "01", "101"), (2, "111", "101")])
def test_teichmuller_is_fixed_by_residue_frobenius(q, v, n):
    ctx = context(q, v, n)
    assert ctx.teichmuller_psi(0) == 0 and ctx.teichmuller_psi(1) == 1
    K = ctx.K
    for z in K.elements():
        assert K.frob(ctx.teichmuller_psi(z), ctx.dl) == ctx.teichmuller_psi(z)


@pytest.mark.parametrize("q, v, n", [(3, "01", "21"), (3, "01", "101"), (2, "111", "101"), (2, "01", "111")])
def test_omega_examples(q, v, n):
    ctx = context(q, v, n)
    W = ctx.W
    assert ctx.omega(0).is_zero()
    assert ctx.omega(ctx.lambda_bar).agree(ctx.lam) >= ctx.prec
    # omega values are fixed by C_{v^l} and are F_q-linear in the residue
    vl = ctx.v ** ctx.l
    for z in range(1, min(ctx.K.size, 12)):
        w = ctx.omega(z)
        assert W.reduce(w) == z
        assert carlitz_eval(vl, w, W).agree(w) >= ctx.prec


def test_omega_one_is_root_of_one_minus_t():
    ctx = make_context(3, P(3, "01"), P(3, "21"), 12)
    w = ctx.omega(1)
    assert (w * w).agree(ctx.W.one() - ctx.W.theta()) >= 12
    assert ctx.W.reduce(w) == 1


@pytest.mark.parametrize("q, v", [(3, "01"), (2, "01"), (2, "111"), (3, "101")])
def test_ramified_extension(q, v):
    ctx = make_context(q, P(q, v), _coprime_n(q, P(q, v)), 6)
    R = ctx.ramified
    u, phi1 = ramified_extend(ctx)
    e = q ** ctx.d - 1
    assert R.e == e
    assert (u ** e).agree(-R.v_elem()) >= R.cap or (u ** e + R.v_elem()).is_zero()
    assert R.valuation(phi1) == Fraction(1, e)
    val = carlitz_eval(ctx.v, phi1, R)
    assert val.is_zero() or val.val >= R.cap - e
    assert R.valuation(u) == Fraction(1, e)


def _coprime_n(q, v):
    for c in range(1, q):
        n = Poly.t(q) - c
        if not (v % n).is_zero():
            return n
    raise AssertionError


def test_valuation_examples():
    ctx = context(3, "01", "21")
    W = ctx.W
    assert W.valuation(W.v_elem()) == 1
    assert W.valuation(W.one() + W.theta()) == 0
    assert W.valuation(W.image(P(3, "001"))) == 2


def test_context_rejections():
    with pytest.raises(ValueError):
        make_context(3, P(3, "2101"), P(3, "21"), 8)  # reducible v
    with pytest.raises(ValueError):
        make_context(3, P(3, "01"), P(3, "001"), 8)  # n not coprime to v
    with pytest.raises(ValueError):
        make_context(3, P(3, "01"), P(3, "12012"), 8)  # residue field too large or n not monic
