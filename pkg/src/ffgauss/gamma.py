"""The v-adic arithmetic, geometric and two-variable gamma functions.

Everything is built from the level products

    F_i(x) = prod_{a monic, deg a = i} (x + a)^flat

evaluated in an unramified v-adic ring.  For i >= d every monic a of degree i
is uniquely v*b + r with b monic of degree i - d and deg r < d, so

    F_i(x) = prod_{r : v does not divide x + r} Q_{i-d}(x + r),
    Q_j(c) = prod_{b monic, deg b = j} (c + v b)
           = sum_k (-1)^(j-k) B_{j,k} v^(q^j - q^k) (c + v t^j)^(q^k),

with B_{j,k} = D_j / (D_k L_{j-k}^(q^k)) the coefficients of the F_q-linear
polynomial vanishing on polynomials of degree < j.  Only terms with
q^j - q^k below the working precision survive, which keeps B_{j,k} small.

p-adic exponents y are Fractions with denominator prime to p; their base-q
digits are computed exactly.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .ffield import build_field
from .poly import Poly, RatFunc, enumerate_below, enumerate_monic
from .series import EXACT, PrecisionError, Series
from .vadic import VAdicRing, unramified


# -- digits ----------------------------------------------------------------------


def as_fraction(y) -> Fraction:
    return y if isinstance(y, Fraction) else Fraction(y)


def padic_digits(y, q: int, count: int) -> list[int]:
    """The first ``count`` base-q digits of the p-adic integer y."""
    y = as_fraction(y)
    num, den = y.numerator, y.denominator
    if den % _char(q) == 0:
        raise ValueError(f"{y} is not a p-adic integer")
    inv = pow(den, -1, q)
    out = []
    for _ in range(count):
        dgt = num * inv % q
        out.append(dgt)
        num = (num - dgt * den) // q
    return out


def _char(q: int) -> int:
    return build_field(q).p


def digit_shift_padic(y, k: int, q: int) -> Fraction:
    """The p-adic integer whose digits are those of y shifted k places down."""
    y = as_fraction(y)
    low = sum(dg * q ** i for i, dg in enumerate(padic_digits(y, q, k)))
    return (y - low) / q ** k


def frac_part(y) -> Fraction:
    y = as_fraction(y)
    return y - (y.numerator // y.denominator)


# -- the Carlitz constants D_i, L_i and B_{j,k} -------------------------------


@lru_cache(maxsize=None)
def carlitz_D(q: int, i: int) -> Poly:
    if i == 0:
        return Poly.const(q, 1)
    br = Poly.monomial(q, q ** i) - Poly.t(q)
    return br * carlitz_D(q, i - 1) ** q


@lru_cache(maxsize=None)
def carlitz_L(q: int, i: int) -> Poly:
    if i == 0:
        return Poly.const(q, 1)
    br = Poly.monomial(q, q ** i) - Poly.t(q)
    return br * carlitz_L(q, i - 1)


@lru_cache(maxsize=None)
def linear_coeff(q: int, j: int, k: int) -> Poly:
    """B_{j,k} = D_j / (D_k L_{j-k}^(q^k))."""
    num = carlitz_D(q, j)
    den = carlitz_D(q, k) * carlitz_L(q, j - k) ** (q ** k)
    qt, r = num.divmod(den)
    if not r.is_zero():
        raise AssertionError("B_{j,k} is not a polynomial")
    return qt


# -- level products -----------------------------------------------------------


class GammaEngine:
    """Level products and gamma values in one unramified v-adic ring."""

    def __init__(self, ring: VAdicRing):
        if ring.e != 1:
            raise ValueError("gamma values are computed in an unramified ring")
        self.ring = ring
        self.q = ring.q
        self.v = ring.v
        self.d = ring.d
        self.cap = ring.cap
        self._levels: dict = {}
        self._residues = [(r, ring.image(r)) for r in enumerate_below(self.q, self.d)]

    @property
    def i_max(self) -> int:
        return self.d * (self.cap + 1)

    def element(self, x) -> Series:
        R = self.ring
        if isinstance(x, Series):
            return x
        if isinstance(x, (int, Poly)):
            x = RatFunc(Poly.const(self.q, x % _char(self.q)) if isinstance(x, int) else x)
        if (x.den % self.v).is_zero():
            raise ValueError("x is not v-integral")
        return R.image_rat(x)

    @staticmethod
    def _key(x: Series):
        return (x.val, tuple(x.c), x.prec)

    def flat(self, x: Series) -> Series:
        """x^flat: x for a unit, 1 when v divides x."""
        if not x.c or x.val > 0:
            return self.ring.one()
        return x

    def level_brute(self, i: int, x) -> Series:
        x = self.element(x)
        R = self.ring
        acc = R.one()
        for a in enumerate_monic(self.q, i):
            acc = acc * self.flat(x + R.image(a))
        return acc

    def _Q(self, j: int, c: Series) -> Series:
        R = self.ring
        q = self.q
        Tj = R.image(Poly.monomial(q, j))
        base = c + Tj.shift(1)
        acc = R.zero().truncate(self.cap)
        for k in range(j, -1, -1):
            gap = q ** j - q ** k
            if gap >= self.cap:
                break
            term = base.qpow(k)
            if k < j:
                term = term * R.image(linear_coeff(q, j, k))
                if (j - k) % 2:
                    term = -term
            acc = acc + term.shift(gap)
        return acc

    def level(self, i: int, x) -> Series:
        """F_i(x) = prod over monic a of degree i of (x + a)^flat."""
        x = self.element(x)
        key = (i, self._key(x))
        hit = self._levels.get(key)
        if hit is not None:
            return hit
        if i < self.d:
            out = self.level_brute(i, x)
        else:
            R = self.ring
            xbar = x.coeff(0) if x.prec > 0 else 0
            F = R.F
            acc = R.one()
            for r, img in self._residues:
                c = x + img
                if c.coeff(0) == 0:
                    continue
                acc = acc * self._Q(i - self.d, c)
            out = acc
        out = out.truncate(self.cap)
        self._levels[key] = out
        return out

    # -- products ---------------------------------------------------------------

    def pi_ari(self, y) -> Series:
        digits = padic_digits(y, self.q, self.i_max)
        R = self.ring
        acc = R.one()
        zero = R.zero()
        for i, yi in enumerate(digits):
            if yi:
                acc = acc * (-self.level(i, zero)) ** yi
        return acc.truncate(self.cap)

    def pi_geo(self, x, y) -> Series:
        x = self.element(x)
        digits = padic_digits(y, self.q, self.i_max)
        R = self.ring
        acc = R.one()
        zero = R.zero()
        for i, yi in enumerate(digits):
            if yi:
                acc = acc * (self.level(i, zero) / self.level(i, x)) ** yi
        return acc.truncate(self.cap)

    def pi_two(self, x, y) -> Series:
        return self.pi_geo(x, y) / self.pi_ari(y)

    def pi_geo_one(self, x) -> Series:
        """The one-variable product (all digits 1)."""
        return self.pi_geo(x, Fraction(-1, self.q - 1))

    def gamma_ari(self, y) -> Series:
        return self.pi_ari(as_fraction(y) - 1)

    def gamma_geo(self, x, y=None) -> Series:
        x = self.element(x)
        if y is None:
            return self.pi_geo_one(x) / self.flat(x)
        return self.pi_geo(x, as_fraction(y) - 1) / self.flat(x)

    def gamma_two(self, x, y) -> Series:
        x = self.element(x)
        return self.pi_two(x, as_fraction(y) - 1) / self.flat(x)

    def one_unit_pow(self, u: Series, y) -> Series:
        """u^y for a one-unit u and a p-adic integer y."""
        R = self.ring
        if not u.c or u.val != 0 or u.c[0] != 1:
            raise ValueError("not a one-unit")
        K = 0
        while self.q ** K < self.cap:
            K += 1
        digits = padic_digits(y, self.q, K + 1)
        acc = R.one()
        ui = u
        for i, yi in enumerate(digits):
            if i:
                ui = ui.qpow(1)
            if yi:
                acc = acc * ui ** yi
        return acc.truncate(self.cap)


_ENGINES: dict = {}


def gamma_engine(ring: VAdicRing) -> GammaEngine:
    eng = _ENGINES.get(ring)
    if eng is None:
        eng = _ENGINES.setdefault(ring, GammaEngine(ring))
    return eng


def default_ring(q: int, v: Poly, prec: int) -> VAdicRing:
    return unramified(q, v, build_field(q, v.deg), prec)


# -- functional equations -------------------------------------------------------


def x_residue_poly(x: RatFunc, v: Poly) -> Poly:
    """The unique x0 with deg x0 < deg v and x0 = x modulo v."""
    from .poly import inverse_mod

    return x.num * inverse_mod(x.den, v) % v


def reflection_lhs_rhs(eng: GammaEngine, x, y) -> tuple[Series, Series]:
    """Gamma(x,y) Gamma(x,1-y) against (-1)^(d-1) (x^flat)^(q-3) Gamma^geo(x)^(q-1)."""
    xs = eng.element(x)
    y = as_fraction(y)
    q, d = eng.q, eng.d
    lhs = eng.gamma_two(xs, y) * eng.gamma_two(xs, 1 - y)
    rhs = eng.flat(xs) ** (q - 3) * eng.gamma_geo(xs) ** (q - 1)
    if (d - 1) % 2:
        rhs = -rhs
    return lhs, rhs


def reflection_eps_lhs_rhs(eng: GammaEngine, x, y) -> tuple[Series, Series]:
    """prod_eps Gamma(eps x, y) Gamma(eps x, 1-y) against (1/x^flat)^(q-1)."""
    xs = eng.element(x)
    y = as_fraction(y)
    R = eng.ring
    lhs = R.one()
    for eps in range(1, eng.q):
        ex = xs.scale(R.base_embed[eps])
        lhs = lhs * eng.gamma_two(ex, y) * eng.gamma_two(ex, 1 - y)
    rhs = eng.flat(xs).inverse() ** (eng.q - 1)
    return lhs, rhs


def no_carry_lhs_rhs(eng: GammaEngine, x, y, y2) -> tuple[Series, Series]:
    xs = eng.element(x)
    y, y2 = as_fraction(y), as_fraction(y2)
    lhs = eng.gamma_two(xs, 1 + y + y2)
    rhs = eng.flat(xs) * eng.gamma_two(xs, 1 + y) * eng.gamma_two(xs, 1 + y2)
    return lhs, rhs


def digits_disjoint(y, y2, q: int, count: int) -> bool:
    return all(a + b < q for a, b in zip(padic_digits(y, q, count), padic_digits(y2, q, count)))


def multiplication_lhs_rhs(eng: GammaEngine, x, y, n: int = 2, branch: int = 1) -> tuple[Series, Series]:
    """prod_{i<n} Gamma(x, (y+i)/n) against (1/x^flat)^(n-1) S^(n-1) Gamma(x, y).

    S is the square root Pi^geo(x,-1/2)/Pi^ari(-1/2) (times ``branch`` = +-1)
    when n is even, and (Pi^geo(x,-1)/Pi^ari(-1))^((n-1)/2) otherwise.
    """
    xs = eng.element(x)
    y = as_fraction(y)
    R = eng.ring
    lhs = R.one()
    for i in range(n):
        lhs = lhs * eng.gamma_two(xs, (y + i) / n)
    if n % 2 == 0:
        root = eng.pi_geo(xs, Fraction(-1, 2)) / eng.pi_ari(Fraction(-1, 2))
        if branch < 0:
            root = -root
        factor = root ** (n - 1)
    else:
        factor = (eng.pi_geo(xs, -1) / eng.pi_ari(-1)) ** ((n - 1) // 2)
    rhs = eng.flat(xs).inverse() ** (n - 1) * factor * eng.gamma_two(xs, y)
    return lhs, rhs


def square_root_check(eng: GammaEngine, x) -> tuple[Series, Series]:
    """(Pi^geo(x,-1/2)/Pi^ari(-1/2))^2 against Pi^geo(x,-1)/Pi^ari(-1)."""
    xs = eng.element(x)
    root = eng.pi_geo(xs, Fraction(-1, 2)) / eng.pi_ari(Fraction(-1, 2))
    return root * root, eng.pi_geo(xs, -1) / eng.pi_ari(-1)


def translation_lhs_rhs(eng: GammaEngine, x: RatFunc, g: Poly, y) -> tuple[Series, Series]:
    """prod_alpha Pi((x + alpha)/g, y) against the translated product with its g-power factors."""
    q, d, v = eng.q, eng.d, eng.v
    if not g.is_monic():
        raise ValueError("g must be monic")
    h = g.deg
    y = as_fraction(y)
    R = eng.ring
    lhs = R.one()
    for alpha in enumerate_below(q, h):
        lhs = lhs * eng.pi_two(RatFunc(x.num + alpha * x.den, x.den * g), y)
    qhy = y * q ** h
    x0 = x_residue_poly(x, v)
    ip = x0.deg
    ydig = padic_digits(y, q, d + 1)
    delta = 1 if (0 <= ip and h <= ip < d and x0.lead == x0.F.neg(1)) else 0
    m = sum(ydig[i - h] * q ** i for i in range(h, d))
    expo = -delta * (ydig[ip - h] if delta else 0) + m
    gs = R.image(g)
    gpow = gs ** expo
    unit = gs ** (q ** d - 1)
    tail = eng.one_unit_pow(unit, digit_shift_padic(qhy, d, q))
    rhs = eng.pi_two(x, qhy) * gpow * tail
    return lhs, rhs
