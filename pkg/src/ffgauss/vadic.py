"""Truncated v-adic arithmetic and the cyclotomic context.

``VAdicRing(q, v, K, e, cap)`` is K[[u]] truncated at u^cap, where u = v when
e = 1 and u^e = -v otherwise.  The variable t is sent to the unique root T of
v(X) = v with T congruent to the chosen root of v in the residue field.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Sequence

from .carlitz import (
    FieldRing,
    carlitz_coeffs,
    carlitz_eval,
    carlitz_table,
    cyclotomic_poly,
    order_mod,
    zpoly_eval,
)
from .ffield import FieldSpec, build_field, embedding, root_codes
from .poly import Poly, gcd, is_irreducible
from .series import EXACT, LaurentRing, PrecisionError, Series


MAX_RESIDUE_FIELD = 1 << 12


def residue_theta(v: Poly, K: FieldSpec) -> int:
    """Code in K of the smallest root of v in F_{q^d}."""
    d = v.deg
    Fd = build_field(v.q, d)
    roots = root_codes(v.c, Fd)
    if not roots:
        raise ValueError("v has no root in F_{q^d}; is it irreducible?")
    return embedding(Fd, K)[roots[0]]


class VAdicRing(LaurentRing):
    kind = "vadic"

    def __init__(self, q: int, v: Poly, K: FieldSpec, e: int, cap: int):
        if K.q != q or K.m % v.deg:
            raise ValueError("coefficient field must contain F_{q^deg v}")
        if not v.is_monic() or not is_irreducible(v):
            raise ValueError("v must be monic irreducible")
        super().__init__(q, K, cap)
        self.v = v
        self.d = v.deg
        self.e = e
        self.theta_bar = residue_theta(v, K)
        self._theta: Series | None = None

    def tag(self) -> str:
        return f"vadic:q={self.q}:v={self.v.encode()}:K=F{self.q}^{self.F.m}:e={self.e}"

    def v_elem(self) -> Series:
        """The image of v: u itself when e = 1, otherwise -u^e."""
        if self.e == 1:
            return self.uniformizer()
        return Series(self, self.e, [self.F.neg(1)], EXACT)

    def theta(self) -> Series:
        if self._theta is None:
            if self.e == 1:
                self._theta = self._lift_theta()
            else:
                base = unramified(self.q, self.v, self.F, -(-self.cap // self.e) + 1)
                self._theta = self.from_unramified(base.theta())
        return self._theta

    def _lift_theta(self) -> Series:
        # Newton on X -> v(X) - u starting from the residue root
        F = self.F
        vcoeffs = [self.base_const(c) for c in self.v.c]
        dv = self.v.derivative()
        dcoeffs = [self.base_const(c) for c in dv.c]
        u = self.uniformizer()

        def f(x):
            return _horner(vcoeffs, x, self) - u

        def df(x):
            return _horner(dcoeffs, x, self)

        return newton(f, df, self.const(self.theta_bar), self.cap)

    def from_unramified(self, x: Series) -> Series:
        """Embed a series in v into this ramified ring: v^j -> (-1)^j u^(e j)."""
        e = self.e
        F = self.F
        if x.ring.e != 1:
            raise ValueError("source must be unramified")
        src = x.ring.F
        table = embedding(src, F) if src is not F else None
        prec = EXACT if x.is_exact else min(x.prec * e, self.cap)
        if not x.c:
            return Series(self, prec, [], prec)
        out = [0] * ((len(x.c) - 1) * e + 1)
        neg1 = F.neg(1)
        for k, c in enumerate(x.c):
            if c:
                cc = table[c] if table else c
                if (x.val + k) % 2:
                    cc = F.mul(cc, neg1)
                out[k * e] = cc
        return Series(self, x.val * e, out, prec)

    def valuation(self, x: Series):
        """v-normalized valuation (u-index divided by e)."""
        from fractions import Fraction

        return Fraction(x.valuation(), self.e)

    def reduce(self, x: Series) -> int:
        """Residue of an integral series."""
        if x.prec <= 0:
            raise PrecisionError("no residue digit known")
        if x.c and x.val < 0:
            raise ValueError("series is not integral")
        return x.coeff(0)


@lru_cache(maxsize=None)
def unramified(q: int, v: Poly, K: FieldSpec, cap: int) -> VAdicRing:
    return VAdicRing(q, v, K, 1, cap)


@lru_cache(maxsize=None)
def ramified(q: int, v: Poly, K: FieldSpec, cap_v: int) -> VAdicRing:
    e = q ** v.deg - 1
    return VAdicRing(q, v, K, e, cap_v * e)


def _horner(coeffs: Sequence[Series], x: Series, ring) -> Series:
    acc = ring.zero()
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def newton(f: Callable, df: Callable, x0: Series, cap: int, max_iter: int = 64) -> Series:
    """Newton iteration x <- x - f(x)/f'(x) until the iterate stops changing."""
    x = x0
    for _ in range(max_iter):
        fx = f(x)
        if fx.is_zero():
            return x.truncate(fx.prec) if not x.is_exact else x
        step = fx / df(x)
        nxt = x - step
        if nxt.agree(x) >= min(nxt.prec, cap) and fx.val >= cap:
            return nxt
        x = nxt
    fx = f(x)
    if not fx.is_zero():
        raise PrecisionError("Newton iteration did not converge")
    return x


def hensel_lift(f: Sequence, r0: int, ring: LaurentRing) -> Series:
    """The root of the polynomial with coefficients ``f`` (Series/Poly/int, low to high) lifting r0."""
    coeffs = [c if isinstance(c, Series) else ring.one()._coerce(c) for c in f]
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    if not coeffs:
        raise ValueError("zero polynomial")
    dcoeffs = [c * k for k, c in enumerate(coeffs)][1:]
    K = ring.F
    res = [c.coeff(0) if c.val >= 0 else None for c in coeffs]
    if any(r is None for r in res):
        raise ValueError("polynomial is not integral")
    fr = 0
    dfr = 0
    for k in range(len(res) - 1, -1, -1):
        fr = K.add(K.mul(fr, r0), res[k])
    for k in range(len(res) - 1, 0, -1):
        dfr = K.add(K.mul(dfr, r0), K.mul(K.scalar(k), res[k]))
    if fr:
        raise ValueError("r0 is not a root modulo the uniformizer")
    if not dfr:
        raise ValueError("derivative vanishes at r0: root is not simple")
    return newton(
        lambda x: _horner(coeffs, x, ring),
        lambda x: _horner(dcoeffs, x, ring),
        ring.const(r0),
        ring.cap,
    )


@dataclass(eq=False)
class CyclotomicContext:
    """All data shared by Gauss-sum and gamma computations for (q, v, n)."""

    q: int
    v: Poly
    n: Poly
    prec: int
    d: int = field(init=False)
    l: int = field(init=False)
    m: Poly = field(init=False)
    K: FieldSpec = field(init=False)
    W: VAdicRing = field(init=False)
    residue: FieldRing = field(init=False)
    theta_bar: int = field(init=False)
    torsion_roots: tuple = field(init=False)
    lambda_bar: int = field(init=False)
    factor_P: tuple = field(init=False)
    lam: Series = field(init=False)

    def __post_init__(self):
        q, v, n = self.q, self.v, self.n
        if not v.is_monic() or not is_irreducible(v):
            raise ValueError("v must be monic irreducible")
        if not n.is_monic() or n.deg < 1:
            raise ValueError("n must be monic of positive degree")
        if gcd(v, n).deg != 0:
            raise ValueError("n must be coprime to v")
        if self.prec < 4:
            raise ValueError("precision must be at least 4")
        self.d = v.deg
        self.l = order_mod(v, n)
        if q ** (self.d * self.l) > MAX_RESIDUE_FIELD:
            raise ValueError(
                f"residue field of size {q}^{self.d * self.l} exceeds the limit {MAX_RESIDUE_FIELD}"
            )
        self.m = v ** self.l - 1
        self.K = build_field(q, self.d * self.l)
        self.W = unramified(q, v, self.K, self.prec)
        self.theta_bar = self.W.theta_bar
        self.residue = FieldRing(self.K, self.theta_bar)
        cyc = cyclotomic_poly(n)
        reduced = [self.residue.image(c) for c in cyc]
        roots = root_codes(reduced, self.K)
        if len(roots) != len(cyc) - 1:
            raise AssertionError("cyclotomic polynomial does not split in the residue field")
        self.torsion_roots = tuple(roots)
        self.lambda_bar = roots[0]
        orbit = self._orbit(roots[0])
        for r in roots:
            if len(self._orbit(r)) != self.l:
                raise AssertionError("factor of unexpected degree modulo v")
        self.factor_P = tuple(self._min_poly(orbit))
        self.lam = hensel_lift(list(cyc), self.lambda_bar, self.W)

    def _orbit(self, z: int) -> list[int]:
        out = [z]
        y = self.K.frob(z, self.d)
        while y != z:
            out.append(y)
            y = self.K.frob(y, self.d)
        return out

    def _min_poly(self, orbit: list[int]) -> list[int]:
        K = self.K
        poly = [1]
        for r in orbit:
            nr = K.neg(r)
            nxt = [0] * (len(poly) + 1)
            for i, c in enumerate(poly):
                nxt[i + 1] = K.add(nxt[i + 1], c)
                nxt[i] = K.add(nxt[i], K.mul(c, nr))
            poly = nxt
        return poly

    @property
    def dl(self) -> int:
        return self.d * self.l

    def key(self) -> tuple:
        return (self.q, self.v.c, self.n.c, self.prec)

    # -- Teichmueller characters ---------------------------------------------

    def teichmuller_psi(self, z: int) -> int:
        """Constants are fixed by the q^(dl)-power map, so the lift of z is z itself."""
        return z

    @cached_property
    def omega_basis(self) -> list[Series]:
        """omega(q^t) for the F_q-basis elements of the residue field."""
        vl = self.v ** self.l
        out = []
        for t in range(self.dl):
            out.append(self._omega_iterate(self.q ** t, vl))
        return out

    def _omega_iterate(self, z: int, vl: Poly) -> Series:
        a = self.W.const(z)
        for _ in range(4 * self.prec + 8):
            b = carlitz_eval(vl, a, self.W)
            if b.agree(a) >= self.prec:
                return b
            a = b
        raise PrecisionError("omega iteration did not stabilize")

    def omega(self, z: int) -> Series:
        """The torsion point of the m-torsion lifting the residue z."""
        q = self.q
        acc = self.W.zero()
        for b in self.omega_basis:
            c = z % q
            if c:
                acc = acc + b.scale(c)
            z //= q
        return acc

    @cached_property
    def ramified(self) -> VAdicRing:
        return ramified(self.q, self.v, self.K, self.prec)

    @cached_property
    def ramified_data(self) -> tuple[Series, Series]:
        return ramified_extend(self)

    def carlitz_residue(self, a: Poly, z: int) -> int:
        return carlitz_eval(a, z, self.residue)

    def carlitz_table(self, a: Poly) -> list[int]:
        return carlitz_table(a, self.residue)


def ramified_extend(ctx: CyclotomicContext) -> tuple[Series, Series]:
    """(varpi, phi1): the uniformizer u with u^(q^d-1) = -v, and the root of C_v(z)/z near -u."""
    R = ctx.ramified
    q, v, d = ctx.q, ctx.v, ctx.d
    e = R.e
    u = R.uniformizer()
    cs = carlitz_coeffs(v)
    # g(w) = w^e - 1 - sum_{0<i<d} (c_i / v) u^(q^i - 1) w^(q^i - 1)
    coeffs = [R.zero() for _ in range(e + 1)]
    coeffs[e] = R.one()
    coeffs[0] = R.const(R.F.neg(1))
    for i in range(1, d):
        ci, r = cs[i].divmod(v)
        if not r.is_zero():
            raise AssertionError("Carlitz coefficient not divisible by v")
        k = q ** i - 1
        coeffs[k] = coeffs[k] - R.image(ci) * u ** k
    w = hensel_lift(coeffs, R.F.neg(1), R)
    phi1 = u * w
    return u, phi1


_CONTEXTS: dict = {}


def make_context(q: int, v: Poly, n: Poly, prec: int) -> CyclotomicContext:
    """Build (or reuse) the context for (q, v, n) at v-adic precision ``prec``."""
    key = (q, v, n, prec)
    ctx = _CONTEXTS.get(key)
    if ctx is None:
        ctx = CyclotomicContext(q, v, n, prec)
        ctx = _CONTEXTS.setdefault(key, ctx)
    return ctx
