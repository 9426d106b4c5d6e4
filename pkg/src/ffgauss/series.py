"""Truncated Laurent series over a finite coefficient field.

A :class:`Series` stores ``c[k]`` as the coefficient of ``u^(val + k)`` where
``u`` is the ring's uniformizer, together with an absolute precision: all
coefficients of index >= ``prec`` are unknown.  ``prec == EXACT`` marks a
finite expansion (polynomial images, constants).  Results are clamped to the
ring's ``cap`` so the working size stays bounded.

Both the v-adic rings and the ring at infinity are subclasses of
:class:`LaurentRing`; they differ only in how t is mapped in.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .ffield import FieldSpec, build_field, embedding
from .poly import Poly, RatFunc

EXACT = 1 << 60


class PrecisionError(ArithmeticError):
    """Raised when a result is indistinguishable from zero at working precision."""


class Series:
    __slots__ = ("ring", "val", "c", "prec")

    def __init__(self, ring: "LaurentRing", val: int, coeffs: Sequence[int], prec: int):
        c = list(coeffs)
        if prec < EXACT and len(c) > prec - val:
            del c[max(0, prec - val):]
        k = 0
        while k < len(c) and c[k] == 0:
            k += 1
        if k:
            c = c[k:]
            val += k
        while c and c[-1] == 0:
            c.pop()
        self.ring = ring
        self.c = c
        self.prec = prec
        self.val = val if c else min(prec, EXACT)

    # -- inspection ------------------------------------------------------------

    def is_zero(self) -> bool:
        """True when every known coefficient vanishes."""
        return not self.c

    @property
    def is_exact(self) -> bool:
        return self.prec >= EXACT

    def coeff(self, i: int) -> int:
        if i >= self.prec:
            raise PrecisionError(f"coefficient {i} beyond precision {self.prec}")
        k = i - self.val
        return self.c[k] if 0 <= k < len(self.c) else 0

    def coeffs_upto(self, n: int, start: int = 0) -> list[int]:
        return [self.coeff(i) for i in range(start, n)]

    def valuation(self) -> int:
        if not self.c:
            raise PrecisionError("series is zero to working precision")
        return self.val

    def lead(self) -> int:
        if not self.c:
            raise PrecisionError("series is zero to working precision")
        return self.c[0]

    def is_constant(self) -> bool:
        return not self.c or (self.val == 0 and len(self.c) == 1)

    def __repr__(self):
        p = "exact" if self.is_exact else self.prec
        return f"Series(val={self.val}, c={self.c[:8]}{'...' if len(self.c) > 8 else ''}, prec={p})"

    # -- arithmetic ------------------------------------------------------------

    def _coerce(self, o) -> "Series":
        if isinstance(o, Series):
            return o
        if isinstance(o, int):
            return self.ring.const(self.ring.F.scalar(o))
        if isinstance(o, Poly):
            return self.ring.image(o)
        if isinstance(o, RatFunc):
            return self.ring.image_rat(o)
        raise TypeError(f"cannot combine Series with {type(o).__name__}")

    def __add__(self, o):
        o = self._coerce(o)
        R = self.ring
        prec = min(self.prec, o.prec)
        if not self.c:
            return Series(R, o.val, o.c, prec) if o.c else Series(R, prec, [], prec)
        if not o.c:
            return Series(R, self.val, self.c, prec)
        lo = min(self.val, o.val)
        hi = max(self.val + len(self.c), o.val + len(o.c))
        if prec < EXACT:
            hi = min(hi, prec)
        if hi <= lo:
            return Series(R, prec, [], prec)
        out = [0] * (hi - lo)
        F = R.F
        for src in (self, o):
            off = src.val - lo
            for k, x in enumerate(src.c):
                if off + k >= len(out):
                    break
                if x:
                    out[off + k] = F.add(out[off + k], x)
        return Series(R, lo, out, prec)

    __radd__ = __add__

    def __neg__(self):
        F = self.ring.F
        return Series(self.ring, self.val, [F.neg(x) for x in self.c], self.prec)

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) + (-self)

    def scale(self, k: int) -> "Series":
        """Multiply by the constant with code k."""
        F = self.ring.F
        if not k:
            return Series(self.ring, self.prec, [], self.prec)
        return Series(self.ring, self.val, [F.mul(k, x) for x in self.c], self.prec)

    def shift(self, k: int) -> "Series":
        """Multiply by u^k."""
        prec = self.prec if self.is_exact else min(self.prec + k, self.ring.cap)
        return Series(self.ring, self.val + k, self.c, prec)

    def __mul__(self, o):
        o = self._coerce(o)
        R = self.ring
        a, b = self, o
        va, vb = a.val, b.val
        if not a.c or not b.c:
            if (not a.c and a.is_exact) or (not b.c and b.is_exact):
                return R.zero()
            prec = min(va + b.prec, vb + a.prec, R.cap)
            return Series(R, prec, [], prec)
        prec = min(va + b.prec, vb + a.prec)
        top = va + vb + len(a.c) + len(b.c) - 1
        if prec >= EXACT and top <= R.cap:
            n = top - va - vb
        else:
            prec = min(prec, R.cap)
            n = prec - va - vb
            if n <= 0:
                return Series(R, prec, [], prec)
        return Series(R, va + vb, _convolve(R.F, a.c, b.c, n), prec)

    __rmul__ = __mul__

    def inverse(self) -> "Series":
        R = self.ring
        if not self.c:
            raise PrecisionError("inverse of a series that is zero to working precision")
        va = self.val
        if self.is_exact and len(self.c) == 1:
            return Series(R, -va, [R.F.inv(self.c[0])], EXACT)
        rel = self.prec - va if not self.is_exact else EXACT
        prec = min(-va + rel, R.cap)
        n = prec + va
        if n <= 0:
            return Series(R, prec, [], prec)
        return Series(R, -va, _invert(R.F, self.c, n), prec)

    def __truediv__(self, o):
        o = self._coerce(o)
        return self * o.inverse()

    def __rtruediv__(self, o):
        return self._coerce(o) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        acc = self.ring.one()
        base = self
        while k:
            if k & 1:
                acc = acc * base
            k >>= 1
            if k:
                base = base * base
        return acc

    def qpow(self, k: int = 1) -> "Series":
        """x^(q^k), computed exactly via Frobenius on coefficients and exponents."""
        if k == 0:
            return self
        R = self.ring
        Q = R.q ** k
        F = R.F
        prec = EXACT if self.is_exact else self.prec * Q
        if not self.c:
            prec = min(prec, R.cap) if prec < EXACT else R.cap
            return Series(R, prec, [], prec)
        val = self.val * Q
        if prec >= EXACT and val + (len(self.c) - 1) * Q < R.cap:
            pass
        else:
            prec = min(prec, R.cap)
        n = max(0, prec - val) if prec < EXACT else (len(self.c) - 1) * Q + 1
        out = [0] * n
        for i, x in enumerate(self.c):
            j = i * Q
            if j >= n:
                break
            if x:
                out[j] = F.frob(x, k)
        return Series(R, val, out, prec)

    def coef_frob(self, s: int) -> "Series":
        """Apply z -> z^(q^s) to every coefficient (Frobenius on the constants)."""
        F = self.ring.F
        return Series(self.ring, self.val, [F.frob(x, s) for x in self.c], self.prec)

    def truncate(self, prec: int) -> "Series":
        return Series(self.ring, self.val, self.c, min(self.prec, prec))

    def agree(self, o: "Series") -> int:
        """Largest N with self == o modulo u^N, bounded by the joint precision."""
        d = self - o
        if d.c:
            return d.val
        return d.prec

    def equals_mod(self, o: "Series", N: int) -> bool:
        if min(self.prec, o.prec) < N:
            raise PrecisionError(f"cannot compare to index {N}: precision {min(self.prec, o.prec)}")
        return self.agree(o) >= N

    def digest(self, upto: int | None = None) -> str:
        """Canonical text: field, ram index, val and coefficient codes low to high."""
        R = self.ring
        p = self.prec if upto is None else min(self.prec, upto)
        if p >= EXACT:
            p = self.val + len(self.c)
        body = ",".join(str(self.coeff(i)) for i in range(min(self.val, p), p)) if self.c else ""
        return f"{R.tag()}|val={self.val if self.c else p}|prec={p}|{body}"


def _convolve(F: FieldSpec, a: list[int], b: list[int], n: int) -> list[int]:
    """First n coefficients of the product of coefficient lists a and b."""
    log, exp = F.log, F.exp
    la = [(i, log[x]) for i, x in enumerate(a[:n]) if x]
    lb = [(j, log[y]) for j, y in enumerate(b[:n]) if y]
    if F.p == 2:
        out = [0] * n
        for i, x in la:
            lim = n - i
            for j, y in lb:
                if j >= lim:
                    break
                out[i + j] ^= exp[x + y]
        return out
    wide = F.wide
    acc = [0] * n
    for i, x in la:
        lim = n - i
        for j, y in lb:
            if j >= lim:
                break
            acc[i + j] += wide[exp[x + y]]
    narrow = F.narrow
    return [narrow(w) if w else 0 for w in acc]


def _invert(F: FieldSpec, a: list[int], n: int) -> list[int]:
    """First n coefficients of 1/a for a unit power series a."""
    b0 = F.inv(a[0])
    nb0 = F.neg(b0)
    out = [b0]
    log, exp = F.log, F.exp
    la = [(i, log[x]) for i, x in enumerate(a[:n]) if x and i]
    odd = F.p != 2
    for k in range(1, n):
        if odd:
            acc = 0
            for i, x in la:
                if i > k:
                    break
                y = out[k - i]
                if y:
                    acc += F.wide[exp[x + log[y]]]
            s = F.narrow(acc) if acc else 0
        else:
            s = 0
            for i, x in la:
                if i > k:
                    break
                y = out[k - i]
                if y:
                    s ^= exp[x + log[y]]
        out.append(F.mul(nb0, s))
    return out


class LaurentRing:
    """Common machinery: constants, images of F_q[t] via a fixed image of t."""

    kind = "laurent"

    def __init__(self, q: int, F: FieldSpec, cap: int):
        self.q = q
        self.F = F
        self.cap = cap
        self.base_embed = embedding(build_field(q), F)
        self._images: dict = {}

    def tag(self) -> str:
        return f"{self.kind}:F{self.q}^{self.F.m}"

    def series(self, val: int, coeffs: Iterable[int], prec: int = EXACT) -> Series:
        return Series(self, val, list(coeffs), prec)

    def zero(self) -> Series:
        return Series(self, EXACT, [], EXACT)

    def one(self) -> Series:
        return Series(self, 0, [1], EXACT)

    def const(self, code: int) -> Series:
        return Series(self, 0, [code], EXACT)

    def uniformizer(self) -> Series:
        return Series(self, 1, [1], EXACT)

    def base_const(self, c: int) -> Series:
        """The F_q constant with F_q-code c."""
        return self.const(self.base_embed[c])

    def theta(self) -> Series:
        raise NotImplementedError

    def image(self, a: Poly) -> Series:
        hit = self._images.get(a)
        if hit is not None:
            return hit
        T = self.theta()
        acc = self.zero()
        for x in reversed(a.c):
            acc = acc * T + self.base_const(x)
        self._images[a] = acc
        return acc

    def image_rat(self, x: RatFunc) -> Series:
        num, den = self.image(x.num), self.image(x.den)
        if not num.c:
            return self.zero()
        # divide the unit parts so no intermediate valuation runs past the cap
        k = num.val - den.val
        q = num.shift(-num.val) * den.shift(-den.val).inverse()
        return q.shift(k)

    # ring protocol used by the Carlitz routines
    def add(self, x, y):
        return x + y

    def mul(self, x, y):
        return x * y

    def qpow(self, x, k=1):
        return x.qpow(k)
