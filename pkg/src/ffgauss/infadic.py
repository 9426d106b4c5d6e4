"""Arithmetic at infinity, the Carlitz exponential and its adjoint, Moore determinants.

:class:`InfRing` holds Laurent series in w = 1/theta~ where theta~^(q-1) = -t,
so t = -w^-(q-1).  Normalized valuations are w-indices divided by q - 1,
which makes ord(t) = -1.

Signs: the leading coefficient of a series is taken with respect to powers of
theta~, and theta~ itself is given the sign xi where xi^(q-1) = -1.  This
is the convention under which sgn(t) = 1 and sgn(pi~)^(q-1) = -1.  A sign is
therefore a pair (c, k) meaning c * xi^k with 0 <= k < q - 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .carlitz import adjoint_eval_raised, carlitz_coeffs, carlitz_eval, poonen_h
from .ffield import FieldSpec, build_field
from .poly import Poly, RatFunc, enumerate_monic, residue_map
from .series import EXACT, LaurentRing, PrecisionError, Series


class InfRing(LaurentRing):
    kind = "inf"

    def __init__(self, q: int, K: FieldSpec, cap: int):
        super().__init__(q, K, cap)
        self._pi: Series | None = None

    def tag(self) -> str:
        return f"inf:q={self.q}:K=F{self.q}^{self.F.m}"

    def theta(self) -> Series:
        return Series(self, -(self.q - 1), [self.F.neg(1)], EXACT)

    def theta_tilde(self) -> Series:
        return Series(self, -1, [1], EXACT)

    def image(self, a: Poly) -> Series:
        hit = self._images.get(a)
        if hit is not None:
            return hit
        F, q = self.F, self.q
        D = a.deg
        if D < 0:
            return self.zero()
        step = q - 1
        out = [0] * (D * step + 1)
        neg1 = F.neg(1)
        for j, x in enumerate(a.c):
            if x:
                c = self.base_embed[x]
                if j % 2:
                    c = F.mul(c, neg1)
                out[(D - j) * step] = c
        hit = Series(self, -D * step, out, EXACT)
        self._images[a] = hit
        return hit


@lru_cache(maxsize=None)
def inf_ring(q: int, m: int, cap: int) -> InfRing:
    return InfRing(q, build_field(q, m), cap)


def carlitz_period(ring: InfRing) -> Series:
    """pi~ = -theta~^q prod_{i>=1} (1 - t^(1-q^i))^-1, truncated at the ring cap."""
    if ring._pi is not None:
        return ring._pi
    q = ring.q
    F = ring.F
    acc = ring.one()
    i = 1
    while True:
        k = (q - 1) * (q ** i - 1)  # t^(1 - q^i) = w^k exactly
        if k - q >= ring.cap:
            break
        factor = Series(ring, 0, [1] + [0] * (k - 1) + [F.neg(1)], EXACT)
        acc = acc * factor.inverse()
        i += 1
    ring._pi = (acc * Series(ring, -q, [F.neg(1)], EXACT))
    return ring._pi


@lru_cache(maxsize=None)
def _carlitz_D_images(ring: InfRing, i: int) -> Series:
    if i == 0:
        return ring.one()
    q = ring.q
    bracket = ring.image(Poly.monomial(q, q ** i) - Poly.t(q))
    return bracket * _carlitz_D_images(ring, i - 1).qpow(1)


def e_eval(x, ring: InfRing) -> Series:
    """e(x) = sum pi~^(q^i) x^(q^i) / D_i for x in F_q(t)."""
    if isinstance(x, Poly):
        x = RatFunc(x)
    q = ring.q
    num = x.num % x.den
    if num.is_zero():
        return ring.zero()
    z = ring.image_rat(RatFunc(num, x.den)) * carlitz_period(ring)
    acc = ring.zero()
    i = 0
    while True:
        zi = z.qpow(i)
        if zi.c and zi.val >= ring.cap:
            break
        Di = _carlitz_D_images(ring, i)
        # leading index of the term, to stop once it clears the cap
        lead = zi.val - Di.val
        if lead >= ring.cap:
            break
        acc = acc + zi * Di.inverse()
        i += 1
    return acc


def e_product(x: RatFunc, ring: InfRing, depth: int) -> Series:
    """pi~ x prod_{0 != a, deg a < depth} (1 + x/a); a slowly converging cross-check for e."""
    from .poly import enumerate_below

    q = ring.q
    acc = carlitz_period(ring) * ring.image_rat(x)
    for a in enumerate_below(q, depth):
        if a.is_zero():
            continue
        acc = acc * (ring.one() + ring.image_rat(x / RatFunc(a)))
    return acc


def omega_coeffs(ring: InfRing, shift: int = 0) -> list[Series]:
    """Coefficients c_k of prod_{i>=shift} (1 - t/t^(q^i)), times theta~^-(q^shift), in powers of the variable.

    shift = 0 gives Omega^(-1); shift = 1 gives Omega.  The k-th coefficient is
    the sum of w^(q^shift + (q-1) * s) over s with k base-q digits equal to 1
    (starting at position ``shift``) and the rest 0.
    """
    q = ring.q
    base = q ** shift
    out = []
    k = 0
    while True:
        lo = base + (q - 1) * sum(q ** (shift + j) for j in range(k))
        if lo >= ring.cap and k:
            break
        idx = []
        j_max = 0
        while base + (q - 1) * q ** (shift + j_max) < ring.cap:
            j_max += 1
        for S in combinations(range(j_max), k):
            e = base + (q - 1) * sum(q ** (shift + j) for j in S)
            if e < ring.cap:
                idx.append(e)
        if not idx:
            out.append(Series(ring, ring.cap, [], ring.cap))
        else:
            lo_i = min(idx)
            c = [0] * (max(idx) - lo_i + 1)
            for e in idx:
                c[e - lo_i] = 1
            out.append(Series(ring, lo_i, c, ring.cap))
        k += 1
    return out


def estar_eval(x, ring: InfRing) -> Series:
    """e*(x) = sum_i Res(t^i x) c_i with c_i the coefficients of Omega^(-1)."""
    if isinstance(x, Poly):
        x = RatFunc(x)
    q = ring.q
    n = x.den
    a0 = x.num % n
    if a0.is_zero():
        return ring.zero()
    cs = omega_coeffs(ring, 0)
    acc = ring.zero().truncate(ring.cap)
    t = Poly.t(q)
    mono = a0
    for c in cs:
        r = residue_map(mono, n)
        if r:
            acc = acc + c.scale(ring.base_embed[r])
        mono = mono * t % n
    return acc


# -- Moore determinants and Ore's formula -----------------------------------


def moore_det(xs: Sequence[Series]) -> Series:
    """det(x_j^(q^i)) by elimination with a minimal-valuation pivot."""
    n = len(xs)
    if n == 0:
        raise ValueError("empty Moore determinant")
    ring = xs[0].ring
    rows = [[x.qpow(i) for x in xs] for i in range(n)]
    det = ring.one()
    for col in range(n):
        best, best_val = None, None
        for r in range(col, n):
            e = rows[r][col]
            if e.c and (best is None or e.val < best_val):
                best, best_val = r, e.val
        if best is None:
            p = min(ring.cap, min(x.prec for x in xs))
            return Series(ring, p, [], p)
        if best != col:
            rows[col], rows[best] = rows[best], rows[col]
            det = -det
        piv = rows[col][col]
        det = det * piv
        inv = piv.inverse()
        for r in range(col + 1, n):
            f = rows[r][col]
            if not f.c:
                continue
            f = f * inv
            rows[r] = [rows[r][k] - f * rows[col][k] if k > col else rows[r][k] for k in range(n)]
    return det


def ore_lambda_star(lambdas: Sequence[Series], i: int) -> Series:
    """lambda_i^* = (-1)^(D + i) (Delta_i / Delta)^q for 1 <= i <= D."""
    D = len(lambdas)
    if not 1 <= i <= D:
        raise IndexError("index out of range")
    ring = lambdas[0].ring
    delta = moore_det(lambdas)
    if not delta.c:
        raise PrecisionError("Moore determinant vanishes: not a basis")
    rest = [x for k, x in enumerate(lambdas, 1) if k != i]
    delta_i = moore_det(rest) if rest else ring.one()
    val = (delta_i / delta).qpow(1)
    return val if (D + i) % 2 == 0 else -val


def ore_dual_basis(lambdas: Sequence[Series]) -> list[Series]:
    return [ore_lambda_star(lambdas, i) for i in range(1, len(lambdas) + 1)]


# -- Poonen pairing --------------------------------------------------------------


def poonen_value(a: Series, b: Series, n: Poly, ring) -> tuple[Series, Series]:
    """(h_a(b), closure) for e(tau) = a C_n(tau) = (1 - tau) h_a(tau)."""
    e = [a * ring.image(c) for c in carlitz_coeffs(n)]
    h, closure = poonen_h(e, ring)
    acc = ring.zero()
    bi = b
    for i, hi in enumerate(h):
        if i:
            bi = bi.qpow(1)
        acc = acc + hi * bi
    return acc, closure


def recognize_constant(x: Series, threshold: int) -> int:
    """The F-code of x if x is a constant up to index ``threshold``; otherwise raise."""
    if x.prec < threshold:
        raise PrecisionError(f"need precision {threshold}, have {x.prec}")
    if not x.c:
        return 0
    if x.val < 0:
        raise PrecisionError("pairing value has a pole")
    const = x.coeff(0)
    rest = x - x.ring.const(const)
    if rest.c and rest.val < threshold:
        raise PrecisionError("pairing value is not a constant")
    return const


def poonen_pair(a: Series, b: Series, n: Poly, ring, threshold: int | None = None) -> int:
    """<a, b> for a in the adjoint n-torsion and b in the n-torsion; returns a constant code."""
    val, closure = poonen_value(a, b, n, ring)
    if threshold is None:
        threshold = ring.cap // 2 if isinstance(ring, InfRing) else ring.cap
    if closure.c and closure.val < threshold:
        raise PrecisionError("twisted division does not close: a is not adjoint n-torsion")
    return recognize_constant(val, threshold)


# -- Psi_N --------------------------------------------------------------------


def psi_n_eval(N: int, z: RatFunc) -> RatFunc:
    """Psi_N(z) = prod_{a monic, deg a = N} (1 + z/a) - 1, by brute force."""
    q = z.q
    num, den = Poly.const(q, 1), Poly.const(q, 1)
    for a in enumerate_monic(q, N):
        top = a * z.den + z.num
        if top.is_zero():
            raise ZeroDivisionError("z is a negated monic of degree N")
        num = num * top
        den = den * (a * z.den)
    return RatFunc(num - den, den)


# -- signs -----------------------------------------------------------------------


@dataclass(frozen=True)
class Sign:
    """c * xi^k with xi^(q-1) = -1 and 0 <= k < q - 1; c is a code in ``field``."""

    field: FieldSpec
    coeff: int
    xi: int

    @staticmethod
    def make(field: FieldSpec, coeff: int, k: int) -> "Sign":
        step = field.q - 1
        a, r = divmod(k, step)
        if a % 2:
            coeff = field.neg(coeff)
        return Sign(field, coeff, r)

    def __mul__(self, o: "Sign") -> "Sign":
        return Sign.make(self.field, self.field.mul(self.coeff, o.coeff), self.xi + o.xi)

    def __pow__(self, k: int) -> "Sign":
        return Sign.make(self.field, self.field.pow(self.coeff, k), self.xi * k)

    def __neg__(self) -> "Sign":
        return Sign(self.field, self.field.neg(self.coeff), self.xi)

    def encode(self) -> str:
        return f"{self.coeff}*xi^{self.xi}" if self.xi else str(self.coeff)


def sign_and_ord(x: Series) -> tuple[Sign, Fraction]:
    """(sgn x, ord_inf x) with ord(t) = -1 and sgn(t) = 1."""
    if not x.c:
        raise PrecisionError("series is zero to working precision")
    q = x.ring.q
    return Sign.make(x.ring.F, x.c[0], -x.val), Fraction(x.val, q - 1)
