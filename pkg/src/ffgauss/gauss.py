"""Geometric, arithmetic and two-variable Gauss sums.

The geometric sum for the Galois symbol (a, s) is

    1 + sum_{z != 0} omega(C_b(z^-1)) * psi(z)^(q^s),   b = <a x> (v^l - 1).

Both omega and w -> C_b(w) are F_q-linear, so after substituting w = z^-1 the
sum collapses to sum_j omega(C_b(beta_j)) * S[s][j] with
S[s][j] = sum_w digit_j(w) * (w^-1)^(q^s) over the F_q-basis beta_j of the
residue field.  The tables S are built once per context.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from .carlitz import carlitz_eval
from .ffield import embedding
from .infadic import ore_dual_basis
from .poly import AFrac, Poly, QDigits, dual_families, factor, inverse_mod, gcd, poly_from_index
from .series import PrecisionError, Series
from .vadic import CyclotomicContext, newton


class GaussEngine:
    """Per-context tables and caches for Gauss sums."""

    def __init__(self, ctx: CyclotomicContext):
        self.ctx = ctx
        self._geo: dict = {}
        self._ari: dict = {}

    @cached_property
    def sum_table(self) -> list[list[int]]:
        ctx = self.ctx
        K, q, dl = ctx.K, ctx.q, ctx.dl
        S = [[0] * dl for _ in range(dl)]
        for w in range(1, K.size):
            iw = K.inv(w)
            pows = [K.frob(iw, s) for s in range(dl)]
            c = w
            for j in range(dl):
                dgt = c % q
                c //= q
                if dgt:
                    for s in range(dl):
                        S[s][j] = K.add(S[s][j], K.mul(dgt, pows[s]))
        return S

    @cached_property
    def trace_table(self) -> list[int]:
        """sum_w digit_j(w) * Tr_{F_P/F_v}(w^-1), computed directly."""
        ctx = self.ctx
        K, q, d, dl = ctx.K, ctx.q, ctx.d, ctx.dl
        T = [0] * dl
        for w in range(1, K.size):
            iw = K.inv(w)
            tr = 0
            y = iw
            for _ in range(ctx.l):
                tr = K.add(tr, y)
                y = K.frob(y, d)
            c = w
            for j in range(dl):
                dgt = c % q
                c //= q
                if dgt:
                    T[j] = K.add(T[j], K.mul(dgt, tr))
        return T

    def omega_images(self, b: Poly) -> list[Series]:
        """omega(C_b(beta_j)) for the basis beta_j = q^j."""
        ctx = self.ctx
        return [ctx.omega(ctx.carlitz_residue(b, ctx.q ** j)) for j in range(ctx.dl)]

    def exponent(self, x: AFrac, a: Poly) -> Poly:
        return x.scaled(a).over(self.ctx.m)

    def geo(self, x: AFrac, a: Poly, s: int) -> Series:
        ctx = self.ctx
        x = self._norm_x(x)
        a = a % ctx.n
        if gcd(a, ctx.n).deg != 0:
            raise ValueError("a must be a unit modulo n")
        s %= ctx.dl
        key = (x.a0, a, s)
        hit = self._geo.get(key)
        if hit is not None:
            return hit
        b = self.exponent(x, a)
        acc = ctx.W.one()
        if not b.is_zero():
            S = self.sum_table[s]
            for j, om in enumerate(self.omega_images(b)):
                if S[j]:
                    acc = acc + om.scale(S[j])
        acc = acc.truncate(ctx.prec)
        self._geo[key] = acc
        return acc

    def _norm_x(self, x: AFrac) -> AFrac:
        n = self.ctx.n
        if x.n == n:
            return x
        qt, r = n.divmod(x.n)
        if not r.is_zero():
            raise ValueError("x does not have denominator dividing n")
        return AFrac(x.a0 * qt % n, n)

    def tilde(self, x: AFrac) -> Series:
        ctx = self.ctx
        x = self._norm_x(x)
        b = self.exponent(x, Poly.const(ctx.q, 1))
        acc = ctx.W.zero().truncate(ctx.prec)
        if b.is_zero():
            return acc
        T = self.trace_table
        for j, om in enumerate(self.omega_images(b)):
            if T[j]:
                acc = acc - om.scale(T[j])
        return acc

    def ari(self, s: int) -> Series:
        ctx = self.ctx
        s %= ctx.d
        hit = self._ari.get(s)
        if hit is not None:
            return hit
        R = ctx.ramified
        K = ctx.K
        _, phi1 = ctx.ramified_data
        q, d = ctx.q, ctx.d
        t = Poly.t(q)
        basis = [carlitz_eval(t ** k, phi1, R) for k in range(d)]
        acc = R.zero().truncate(R.cap)
        for idx in range(1, q ** d):
            z = poly_from_index(q, idx)
            zbar = ctx.residue.image(z)
            chi = K.frob(K.inv(zbar), s)
            cz = R.zero()
            for k, bk in enumerate(basis):
                c = z.coeff(k)
                if c:
                    cz = cz + bk.scale(R.base_embed[c])
            acc = acc - cz.scale(chi)
        self._ari[s] = acc
        return acc


def engine(ctx: CyclotomicContext) -> GaussEngine:
    eng = ctx.__dict__.get("_gauss_engine")
    if eng is None:
        eng = GaussEngine(ctx)
        ctx.__dict__["_gauss_engine"] = eng
    return eng


def geo_gauss(ctx: CyclotomicContext, x: AFrac, a: Poly | None = None, s: int = 0) -> Series:
    """The sigma_{a,s}-conjugate of the geometric Gauss sum of x."""
    if a is None:
        a = Poly.const(ctx.q, 1)
    return engine(ctx).geo(x, a, s)


def tilde_gauss(ctx: CyclotomicContext, x: AFrac) -> Series:
    return engine(ctx).tilde(x)


def gauss_monomial(ctx: CyclotomicContext, x: AFrac, y: QDigits) -> Series:
    """prod_s G^(y_s tau^s) over s < dl."""
    if y.t != ctx.dl:
        raise ValueError(f"digit period {y.t} does not match dl = {ctx.dl}")
    acc = ctx.W.one()
    for s, ys in enumerate(y.digits):
        if ys:
            acc = acc * geo_gauss(ctx, x, None, s) ** ys
    return acc.truncate(ctx.prec)


def ari_gauss(ctx: CyclotomicContext, s: int = 0) -> Series:
    return engine(ctx).ari(s)


def ari_monomial(ctx: CyclotomicContext, y: QDigits) -> Series:
    if y.t != ctx.dl:
        raise ValueError(f"digit period {y.t} does not match dl = {ctx.dl}")
    R = ctx.ramified
    acc = R.one()
    for s, ys in enumerate(y.digits):
        if ys:
            acc = acc * ari_gauss(ctx, s) ** ys
    return acc


def two_var_monomial(ctx: CyclotomicContext, x: AFrac, y: QDigits) -> Series:
    R = ctx.ramified
    geo = R.from_unramified(gauss_monomial(ctx, x, y))
    ari = ari_monomial(ctx, y)
    if not ari.c:
        raise PrecisionError("arithmetic monomial is zero to working precision")
    return geo / ari


# -- the scalar-product expression ----------------------------------------------


def torsion_generator(ctx: CyclotomicContext) -> Series:
    """A generator of the m-torsion: lift of the smallest residue killed by m but by no proper divisor."""
    m, K = ctx.m, ctx.K
    cofactors = [m // f for f, _ in factor(m)]
    tables = [ctx.carlitz_table(c) for c in cofactors]
    for z in range(1, K.size):
        if all(tb[z] for tb in tables):
            break
    else:
        raise AssertionError("no generator of the m-torsion")
    W = ctx.W
    dm = W.image(m)
    return newton(lambda x: carlitz_eval(m, x, W), lambda x: dm, W.const(z), W.cap)


@dataclass
class PairingData:
    """m-dual families with the matching torsion bases in the v-adic ring."""

    a: tuple
    b: tuple
    lam: list
    lam_star: list
    lam_star_bar: list


def pairing_data(ctx: CyclotomicContext) -> PairingData:
    hit = ctx.__dict__.get("_pairing")
    if hit is not None:
        return hit
    a, b = dual_families(ctx.m)
    lm = torsion_generator(ctx)
    lam = [carlitz_eval(bi, lm, ctx.W) for bi in b]
    star = ore_dual_basis(lam)
    bars = [ctx.W.reduce(s) for s in star]
    data = PairingData(a, b, lam, star, bars)
    ctx.__dict__["_pairing"] = data
    return data


def scalar_product_oracle(ctx: CyclotomicContext, x: AFrac) -> Series:
    """1 - sum_i C_{m x}(lambda_i) psi(reduction of lambda_i^*)."""
    data = pairing_data(ctx)
    x = engine(ctx)._norm_x(x)
    mx = x.over(ctx.m)
    acc = ctx.W.one()
    if mx.is_zero():
        return acc
    for li, bar in zip(data.lam, data.lam_star_bar):
        acc = acc - carlitz_eval(mx, li, ctx.W).scale(ctx.teichmuller_psi(bar))
    return acc.truncate(ctx.prec)


# -- group ring ---------------------------------------------------------------------


@dataclass
class GroupRingElem:
    """Integer combination of symbols sigma_{a,s} with a a unit mod n and s mod dl."""

    n: Poly
    dl: int
    terms: dict = field(default_factory=dict)

    def _key(self, a: Poly, s: int):
        return (a % self.n, s % self.dl)

    def add_term(self, a: Poly, s: int, c: int = 1) -> "GroupRingElem":
        k = self._key(a, s)
        self.terms[k] = self.terms.get(k, 0) + c
        if not self.terms[k]:
            del self.terms[k]
        return self

    def __add__(self, o: "GroupRingElem") -> "GroupRingElem":
        out = GroupRingElem(self.n, self.dl, dict(self.terms))
        for (a, s), c in o.terms.items():
            out.add_term(a, s, c)
        return out

    def __mul__(self, o: "GroupRingElem") -> "GroupRingElem":
        out = GroupRingElem(self.n, self.dl)
        for (a, s), c in self.terms.items():
            for (b, t), d in o.terms.items():
                out.add_term(a * b, s + t, c * d)
        return out

    def coefficient(self, a: Poly, s: int) -> int:
        return self.terms.get(self._key(a, s), 0)

    def total(self) -> int:
        return sum(self.terms.values())

    @staticmethod
    def symbol(n: Poly, dl: int, a: Poly, s: int) -> "GroupRingElem":
        return GroupRingElem(n, dl).add_term(a, s)

    def act(self, ctx: CyclotomicContext, x: AFrac) -> Series:
        """G_x raised to this element: prod (G_x^sigma)^c."""
        acc = ctx.W.one()
        for (a, s), c in sorted(self.terms.items(), key=lambda kv: (kv[0][0].sort_key(), kv[0][1])):
            acc = acc * geo_gauss(ctx, x, a, s) ** c
        return acc

    def encode(self) -> dict:
        return {f"{a.encode()}@{s}": c for (a, s), c in sorted(self.terms.items(), key=lambda kv: (kv[0][0].sort_key(), kv[0][1]))}


def sigma_inverse(n: Poly, a: Poly, s: int) -> tuple[Poly, int]:
    return inverse_mod(a, n), -s
