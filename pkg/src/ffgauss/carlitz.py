"""Carlitz polynomials, their adjoints, cyclotomic polynomials and twisted polynomials.

The evaluation routines are generic: they take a ``ring`` object exposing
``image(Poly)``, ``add``, ``mul``, ``qpow(x, k)`` (x^(q^k)) and ``zero()``.
:class:`FieldRing` provides this for a finite field in which t is sent to a
chosen element; the series rings in :mod:`ffgauss.series` provide it too.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from .ffield import FieldSpec, build_field, embedding
from .poly import Poly, gcd, mobius, monic_divisors, powmod


@lru_cache(maxsize=None)
def carlitz_coeffs(a: Poly) -> tuple[Poly, ...]:
    """Coefficients c_0..c_{deg a} with C_a(z) = sum c_i z^(q^i).

    Horner over the digits of a, using C_{t b} = t C_b + C_b^q.
    """
    q = a.q
    zero = Poly(q)
    out: list[Poly] = []
    t = Poly.t(q)
    for x in reversed(a.c):
        nxt = [t * c for c in out] + [zero]
        for i in range(len(out)):
            nxt[i + 1] = nxt[i + 1] + out[i] ** q
        if nxt:
            nxt[0] = nxt[0] + Poly.const(q, x)
        else:
            nxt = [Poly.const(q, x)]
        out = nxt
    while out and out[-1].is_zero():
        out.pop()
    return tuple(out)


def carlitz_eval(a: Poly, z, ring):
    """C_a(z) in ``ring``."""
    acc = ring.zero()
    zi = z
    for i, c in enumerate(carlitz_coeffs(a)):
        if i:
            zi = ring.qpow(zi, 1)
        if not c.is_zero():
            acc = ring.add(acc, ring.mul(ring.image(c), zi))
    return acc


def adjoint_eval(a: Poly, z, ring):
    """C*_a(z) = sum c_i^(q^-i) z^(q^-i); the ring must be perfect (``qpow`` accepts negative k)."""
    if not getattr(ring, "perfect", False):
        raise TypeError("ring has no inverse Frobenius; use adjoint_eval_raised")
    acc = ring.zero()
    for i, c in enumerate(carlitz_coeffs(a)):
        if not c.is_zero():
            acc = ring.add(acc, ring.qpow(ring.mul(ring.image(c), z), -i))
    return acc


def adjoint_eval_raised(a: Poly, z, ring):
    """C*_a(z)^(q^deg a), which only needs forward Frobenius."""
    cs = carlitz_coeffs(a)
    D = len(cs) - 1
    acc = ring.zero()
    for i, c in enumerate(cs):
        if not c.is_zero():
            acc = ring.add(acc, ring.qpow(ring.mul(ring.image(c), z), D - i))
    return acc


class FieldRing:
    """F_{q^m} as an A-algebra with t acting as the element ``theta_code``.

    Elements are plain codes.  This is the residue field F_P for a prime above v.
    """

    perfect = True

    def __init__(self, F: FieldSpec, theta_code: int):
        self.F = F
        self.q = F.q
        self.theta_code = theta_code
        self._base = embedding(build_field(F.q), F)
        self._images: dict = {}

    def zero(self):
        return 0

    def one(self):
        return 1

    def image(self, a: Poly) -> int:
        hit = self._images.get(a)
        if hit is None:
            F = self.F
            hit = 0
            for x in reversed(a.c):
                hit = F.add(F.mul(hit, self.theta_code), self._base[x])
            self._images[a] = hit
        return hit

    def add(self, x, y):
        return self.F.add(x, y)

    def mul(self, x, y):
        return self.F.mul(x, y)

    def qpow(self, x, k=1):
        return self.F.frob(x, k)


def carlitz_table(a: Poly, ring: FieldRing) -> list[int]:
    """C_a evaluated at every element of a finite field, using F_q-linearity."""
    F = ring.F
    q, m = F.q, F.m
    basis = [carlitz_eval(a, q ** t, ring) for t in range(m)]
    out = [0] * F.size
    for code in range(F.size):
        acc, c = 0, code
        for b in basis:
            d = c % q
            if d:
                acc = F.add(acc, F.mul(d, b))
            c //= q
        out[code] = acc
    return out


# -- polynomials in z over A -----------------------------------------------
# A dense list of Poly coefficients, lowest degree first.


def _zpoly_trim(f: list[Poly]) -> list[Poly]:
    while f and f[-1].is_zero():
        f.pop()
    return f


def carlitz_zpoly(a: Poly) -> list[Poly]:
    q = a.q
    cs = carlitz_coeffs(a)
    out = [Poly(q)] * (q ** (len(cs) - 1) + 1)
    for i, c in enumerate(cs):
        out[q ** i] = c
    return _zpoly_trim(out)


def zpoly_mul(f: list[Poly], g: list[Poly]) -> list[Poly]:
    if not f or not g:
        return []
    q = f[0].q
    out = [Poly(q)] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        if x.is_zero():
            continue
        for j, y in enumerate(g):
            if not y.is_zero():
                out[i + j] = out[i + j] + x * y
    return _zpoly_trim(out)


def zpoly_divexact(f: list[Poly], g: list[Poly]) -> list[Poly]:
    """Exact division of z-polynomials over A; g must have a constant (F_q^x) leading coefficient."""
    f = list(f)
    g = _zpoly_trim(list(g))
    lead = g[-1]
    if lead.deg != 0:
        raise ValueError("divisor leading coefficient must be a nonzero constant")
    inv = Poly.const(lead.q, lead.F.inv(lead.lead))
    dq = len(f) - len(g)
    if dq < 0:
        if _zpoly_trim(f):
            raise ArithmeticError("division leaves a remainder")
        return []
    qt = [Poly(lead.q)] * (dq + 1)
    for k in range(dq, -1, -1):
        x = f[k + len(g) - 1]
        if x.is_zero():
            continue
        c = x * inv
        qt[k] = c
        for j, y in enumerate(g):
            if not y.is_zero():
                f[k + j] = f[k + j] - c * y
    if _zpoly_trim(f[: len(g) - 1]):
        raise ArithmeticError("division leaves a remainder")
    return _zpoly_trim(qt)


@lru_cache(maxsize=None)
def cyclotomic_poly(n: Poly) -> tuple[Poly, ...]:
    """C_n^*(z), the product of C_e(z)^mu(n/e) over monic e | n, as a z-polynomial over A."""
    if n.deg < 1:
        raise ValueError("modulus must have positive degree")
    if not n.is_monic():
        raise ValueError("modulus must be monic")
    num: list[Poly] = [Poly.const(n.q, 1)]
    dens = []
    for e in monic_divisors(n):
        mu = mobius(n // e)
        if mu == 1:
            num = zpoly_mul(num, carlitz_zpoly(e))
        elif mu == -1:
            dens.append(carlitz_zpoly(e))
    for den in dens:
        num = zpoly_divexact(num, den)
    return tuple(num)


def zpoly_eval(f: Sequence[Poly], z, ring):
    """Horner evaluation of a z-polynomial over A in ``ring``."""
    acc = ring.zero()
    for c in reversed(f):
        acc = ring.add(ring.mul(acc, z), ring.image(c))
    return acc


def order_mod(v: Poly, n: Poly) -> int:
    """Least l >= 1 with v^l = 1 modulo n."""
    if gcd(v, n).deg != 0:
        raise ValueError("v and n are not coprime")
    if n.deg < 1:
        return 1
    one = Poly.const(n.q, 1)
    x = v % n
    l = 1
    while x != one:
        x = x * v % n
        l += 1
    return l


# -- twisted polynomials -------------------------------------------------------


class TwistedPoly:
    """sum h_i tau^i over F_q[t] with tau h = h^q tau."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Poly]):
        c = list(coeffs)
        while c and c[-1].is_zero():
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def carlitz(cls, a: Poly) -> "TwistedPoly":
        return cls(carlitz_coeffs(a))

    def __add__(self, o: "TwistedPoly") -> "TwistedPoly":
        n = max(len(self.coeffs), len(o.coeffs))
        q = (self.coeffs or o.coeffs)[0].q if (self.coeffs or o.coeffs) else 2
        z = Poly(q)
        a = list(self.coeffs) + [z] * (n - len(self.coeffs))
        b = list(o.coeffs) + [z] * (n - len(o.coeffs))
        return TwistedPoly([x + y for x, y in zip(a, b)])

    def __mul__(self, o: "TwistedPoly") -> "TwistedPoly":
        if not self.coeffs or not o.coeffs:
            return TwistedPoly([])
        q = self.coeffs[0].q
        out = [Poly(q)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(o.coeffs):
                out[i + j] = out[i + j] + x * y ** (q ** i)
        return TwistedPoly(out)

    def __eq__(self, o):
        return isinstance(o, TwistedPoly) and self.coeffs == o.coeffs

    def __repr__(self):
        return f"TwistedPoly({[c.encode() for c in self.coeffs]})"


def poonen_h(e: Sequence, ring) -> list:
    """Coefficients h_0..h_{D-1} solving e(tau) = (1 - tau) h(tau), where e = a * C_n(tau).

    The recurrence is h_0 = e_0, h_i = e_i + h_{i-1}^q.  Returns (h, closure) where
    closure = e_D + h_{D-1}^q must vanish when a is an n-torsion point of the adjoint.
    """
    if len(e) == 1:
        return [e[0]], ring.zero()
    h = [e[0]]
    for i in range(1, len(e) - 1):
        h.append(ring.add(e[i], ring.qpow(h[-1], 1)))
    closure = ring.add(e[-1], ring.qpow(h[-1], 1))
    return h, closure
