from fractions import Fraction

import pytest

from ffgauss.carlitz import adjoint_eval_raised, carlitz_eval
from ffgauss.infadic import (
    Sign,
    carlitz_period,
    e_eval,
    e_product,
    estar_eval,
    inf_ring,
    moore_det,
    omega_coeffs,
    ore_dual_basis,
    ore_lambda_star,
    poonen_pair,
    poonen_value,
    psi_n_eval,
    recognize_constant,
    sign_and_ord,
)
from ffgauss.poly import Poly, RatFunc, dual_families, enumerate_below

from conftest import P


@pytest.mark.parametrize("q", [2, 3, 4])
def test_period_leading_term_and_sign(q):
    R = inf_ring(q, 1, 40)
    pi = carlitz_period(R)
    sgn, order = sign_and_ord(pi)
    assert order == Fraction(-q, q - 1)
    assert pi.c[0] == R.F.neg(1) and pi.val == -q
    assert sgn ** (q - 1) == Sign(R.F, R.F.neg(1), 0)


def test_period_truncations_agree():
    lo, hi = carlitz_period(inf_ring(3, 1, 30)), carlitz_period(inf_ring(3, 1, 60))
    assert lo.prec >= 30 - 3 and lo.agree(hi) >= lo.prec


@pytest.mark.parametrize("q", [2, 3])
def test_sign_examples(q):
    R = inf_ring(q, 1, 20)
    sgn, order = sign_and_ord(R.theta())
    assert (sgn.coeff, sgn.xi, order) == (1, 0, -1)
    sgn, order = sign_and_ord(R.theta_tilde())
    assert sgn.coeff == 1 and order == Fraction(-1, q - 1)
    # theta~^(q-1) = -theta forces sgn(theta~)^(q-1) = -1
    assert sgn ** (q - 1) == Sign(R.F, R.F.neg(1), 0)


def test_exponential_kernel_is_a():
    R = inf_ring(3, 1, 40)
    for a in ("1", "21", "0121"):
        assert e_eval(P(3, a), R).is_zero()
        assert estar_eval(P(3, a), R).is_zero()


@pytest.mark.parametrize("q, n", [(3, "01"), (3, "21"), (2, "111"), (3, "101")])
def test_exponential_gives_torsion(q, n):
    n = P(q, n)
    R = inf_ring(q, 1, 30 * (q - 1))
    lam = e_eval(RatFunc(Poly.const(q, 1), n), R)
    val = carlitz_eval(n, lam, R)
    assert val.is_zero() or val.val - lam.val >= 10 * (q - 1)


def test_exponential_leading_term():
    q = 3
    R = inf_ring(q, 1, 40)
    x = e_eval(RatFunc(Poly.const(q, 1), P(q, "01")), R)
    pi = carlitz_period(R)
    assert sign_and_ord(x)[1] == sign_and_ord(pi)[1] + 1
    assert (x * R.theta()).agree(pi) > pi.val


def test_exponential_matches_product_form():
    q = 2
    R = inf_ring(q, 1, 24)
    x = RatFunc(P(q, "1"), P(q, "101"))
    assert e_eval(x, R).agree(e_product(x, R, 6)) >= 10


@pytest.mark.parametrize("q, n", [(3, "01"), (3, "21"), (2, "111")])
def test_adjoint_exponential_gives_adjoint_torsion(q, n):
    n = P(q, n)
    R = inf_ring(q, 1, 30 * (q - 1))
    for a0 in enumerate_below(q, n.deg):
        if a0.is_zero():
            continue
        z = estar_eval(RatFunc(a0, n), R).qpow(1)
        val = adjoint_eval_raised(n, z, R)
        scale = z.qpow(n.deg)
        assert val.is_zero() or val.val - scale.val >= 8 * (q - 1)


@pytest.mark.parametrize("q", [2, 3])
def test_omega_functional_equation(q):
    """Omega^(-1) = (t - theta) Omega on the t-coefficients."""
    R = inf_ring(q, 1, 40)
    c = omega_coeffs(R, 0)
    d = omega_coeffs(R, 1)
    theta = R.theta()
    for k in range(min(len(c), len(d)) - 1):
        rhs = (d[k - 1] if k else R.zero()) - theta * d[k]
        assert c[k].agree(rhs) >= min(c[k].prec, rhs.prec)


def test_moore_examples():
    R = inf_ring(3, 1, 30)
    x = e_eval(RatFunc(Poly.const(3, 1), P(3, "001")), R)
    assert moore_det([x]).agree(x) >= x.prec
    assert moore_det([x, x]).is_zero()
    y = e_eval(RatFunc(P(3, "01"), P(3, "001")), R)
    assert not moore_det([x, y]).is_zero()


def test_ore_degree_one():
    q = 3
    R = inf_ring(q, 1, 40)
    lam = e_eval(RatFunc(Poly.const(q, 1), P(q, "21")), R)
    star = ore_lambda_star([lam], 1)
    assert star.agree(lam.qpow(1).inverse()) >= star.prec - 1


@pytest.mark.parametrize("q, n", [(3, "21"), (3, "101"), (2, "111"), (2, "1101")])
def test_poonen_pairing_is_minus_identity(q, n):
    n = P(q, n)
    D = n.deg
    margin = 8 * (q - 1)
    R = inf_ring(q, 1, 16 * (q - 1) * D + 4 * margin)
    a, b = dual_families(n)
    lam = [e_eval(RatFunc(bj, n), R) for bj in b]
    star = ore_dual_basis(lam)
    neg1 = R.F.neg(1)
    for i, si in enumerate(star):
        for j, lj in enumerate(lam):
            val, closure = poonen_value(si, lj, n, R)
            assert closure.is_zero() or closure.val >= margin
            assert recognize_constant(val, margin) == (neg1 if i == j else 0)
    assert poonen_pair(R.zero(), lam[0], n, R, margin) == 0


def test_poonen_compatibility():
    """<a, b>_{nm} = <a, C_m(b)>_n for a adjoint n-torsion and b in the nm-torsion."""
    q = 3
    n, m = P(q, "01"), P(q, "11")
    R = inf_ring(q, 1, 120)
    margin = 16
    for a0 in (Poly.const(q, 1), Poly.const(q, 2)):
        a = estar_eval(RatFunc(a0, n), R).qpow(1)
        for b0 in enumerate_below(q, 2):
            if b0.is_zero():
                continue
            b = e_eval(RatFunc(b0, n * m), R)
            lhs = poonen_pair(a, b, n * m, R, margin)
            rhs = poonen_pair(a, carlitz_eval(m, b, R), n, R, margin)
            assert lhs == rhs


def test_psi_examples():
    q = 3
    z = RatFunc(P(q, "1"), P(q, "21"))
    assert psi_n_eval(0, z) == z
    assert psi_n_eval(3, RatFunc(Poly.const(q, 0))).is_zero()
    # Psi_1(z) = prod_{c} (1 + z/(t + c)) - 1, by hand for z = 1/t
    w = RatFunc(Poly.const(q, 1), P(q, "01"))
    expected = Poly.const(q, 1)
    acc = RatFunc(Poly.const(q, 1))
    for c in range(q):
        acc = acc * (RatFunc(Poly.const(q, 1)) + w / RatFunc(P(q, f"{c}1")))
    assert psi_n_eval(1, w) == acc - RatFunc(expected)


def test_psi_is_additive():
    q = 2
    m = P(q, "1101")
    for N in range(4):
        for a in ("1", "01", "11"):
            for b in ("001", "101"):
                x, y = RatFunc(P(q, a), m), RatFunc(P(q, b), m)
                assert psi_n_eval(N, x + y) == psi_n_eval(N, x) + psi_n_eval(N, y)
