"""Finite fields F_{q^m} built as towers over F_p.

Every field is F_q[w]/(M(w)) where M is the lexicographically smallest monic
irreducible of degree m over F_q.  When q = p^e with e > 1 the coefficient
field F_q is itself such an extension of F_p, so fields form a tower.

Elements are plain ints ("codes"): the element sum c_i w^i with c_i in F_q is
stored as sum c_i q^i, where each c_i is the code of an F_q element.  Unrolled,
a code is the list of F_p coordinates written in base p.  Arithmetic goes
through discrete-log tables, which keeps the inner loops of the series code
down to a handful of list lookups.

The public wrapper :class:`FFElem` gives operator syntax on top of the codes.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, e) with q = p^e, or raise ValueError."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = 2
    while p * p <= q and q % p:
        p += 1
    if q % p:
        p = q
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, e


def _prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


class FieldSpec:
    """The field F_{q^m}.  Use :func:`build_field` rather than calling this.

    Attributes: p, e (q = p^e), q, m, modulus (tuple of F_q codes, low to high,
    monic), size = q^m, base (FieldSpec of F_q, or None when q is prime).
    """

    def __init__(self, q: int, m: int):
        if m < 1:
            raise ValueError("extension degree must be >= 1")
        p, e = prime_power(q)
        self.p, self.e, self.q, self.m = p, e, q, m
        self.size = q ** m
        self.order = self.size - 1  # multiplicative group order
        self.base = build_field(p, e) if e > 1 else None
        self._embed_cache: dict = {}
        self.modulus = self._find_modulus()
        self._build_tables()

    # -- slow arithmetic used only while building tables -------------------

    def _badd(self, a, b):
        if self.base is None:
            return (a + b) % self.p
        return self.base.add(a, b)

    def _bmul(self, a, b):
        if self.base is None:
            return a * b % self.p
        return self.base.mul(a, b)

    def _bneg(self, a):
        if self.base is None:
            return (-a) % self.p
        return self.base.neg(a)

    def _binv(self, a):
        if self.base is None:
            return pow(a, self.p - 2, self.p)
        return self.base.inv(a)

    def _pmod(self, f, g):
        """Remainder of base-field polynomials (low-to-high lists); g monic."""
        f = list(f)
        dg = len(g) - 1
        while len(f) - 1 >= dg and f:
            c = f[-1]
            if c:
                shift = len(f) - 1 - dg
                for i, gi in enumerate(g):
                    f[shift + i] = self._badd(f[shift + i], self._bneg(self._bmul(c, gi)))
            f.pop()
            while f and f[-1] == 0:
                f.pop()
        return f

    def _pmul(self, f, g):
        if not f or not g:
            return []
        out = [0] * (len(f) + len(g) - 1)
        for i, a in enumerate(f):
            if a:
                for j, b in enumerate(g):
                    if b:
                        out[i + j] = self._badd(out[i + j], self._bmul(a, b))
        while out and out[-1] == 0:
            out.pop()
        return out

    def _pgcd_is_one(self, f, g):
        while g:
            lead_inv = self._binv(g[-1])
            g = [self._bmul(c, lead_inv) for c in g]
            f, g = g, self._pmod(f, g)
        return len(f) == 1

    def _is_irreducible(self, f) -> bool:
        # f has no factor of degree k <= m/2 iff gcd(f, X^{q^k} - X) = 1 for all such k
        m = len(f) - 1
        if m == 1:
            return True
        xpow = [0, 1]
        for _ in range(1, m // 2 + 1):
            # xpow <- xpow^q mod f
            acc, base, k = [1], xpow, self.q
            while k:
                if k & 1:
                    acc = self._pmod(self._pmul(acc, base), f)
                base = self._pmod(self._pmul(base, base), f)
                k >>= 1
            xpow = acc
            diff = list(xpow) + [0] * max(0, 2 - len(xpow))
            diff[1] = self._badd(diff[1], self._bneg(1))
            while diff and diff[-1] == 0:
                diff.pop()
            if not diff or not self._pgcd_is_one(list(f), diff):
                return False
        return True

    def _find_modulus(self):
        q, m = self.q, self.m
        if m == 1:
            return (0, 1)
        # the integer sum c_i q^i orders monic polynomials high coefficient first
        for k in range(q ** m):
            coeffs = [(k // q ** i) % q for i in range(m)] + [1]
            if coeffs[0] == 0:
                continue
            if self._is_irreducible(coeffs):
                return tuple(coeffs)
        raise RuntimeError("no irreducible polynomial found")

    def _vec(self, code):
        q = self.q
        return [(code // q ** i) % q for i in range(self.m)]

    def _code(self, vec):
        out, mult = 0, 1
        for c in vec:
            out += c * mult
            mult *= self.q
        return out

    def _slow_mul(self, a, b):
        prod = self._pmod(self._pmul(self._vec(a), self._vec(b)), list(self.modulus))
        return self._code(prod + [0] * (self.m - len(prod)))

    def _slow_pow(self, a, k):
        acc = 1
        while k:
            if k & 1:
                acc = self._slow_mul(acc, a)
            a = self._slow_mul(a, a)
            k >>= 1
        return acc

    def _digit_add(self, a, b):
        p = self.p
        if p == 2:
            return a ^ b
        out, mult = 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def _build_tables(self):
        n, order = self.size, self.order
        primes = _prime_factors(order)
        gen = None
        for g in range(1, n):
            if all(self._slow_pow(g, order // r) != 1 for r in primes):
                gen = g
                break
        if gen is None:
            raise RuntimeError("no primitive element")
        self.generator = gen
        exp = [0] * (2 * order + 2)
        log = [0] * n
        x = 1
        for k in range(order):
            exp[k] = x
            log[x] = k
            x = self._slow_mul(x, gen)
        for k in range(order, len(exp)):
            exp[k] = exp[k - order]
        self.exp, self.log = exp, log
        self.log_minus_one = 0 if self.p == 2 else order // 2
        if self.p != 2:
            zech = [0] * order
            for k in range(order):
                s = self._digit_add(1, exp[k])
                zech[k] = log[s] if s else -1
            self.zech = zech
        # wide packing used by the odd-characteristic convolution loops
        self.ndigits = self.e * self.m
        if self.p != 2:
            self.wide = [self._widen(c) for c in range(n)]

    def _widen(self, code):
        out, shift = 0, 0
        while code:
            out |= (code % self.p) << shift
            code //= self.p
            shift += 16
        return out

    def narrow(self, w: int) -> int:
        """Inverse of the 16-bit-per-digit packing, reducing every digit mod p."""
        p, out, mult = self.p, 0, 1
        while w:
            out += ((w & 0xFFFF) % p) * mult
            w >>= 16
            mult *= p
        return out

    # -- fast arithmetic on codes -------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if not a:
            return b
        if not b:
            return a
        la = self.log[a]
        z = self.zech[(self.log[b] - la) % self.order]
        if z < 0:
            return 0
        return self.exp[la + z]

    def neg(self, a: int) -> int:
        if self.p == 2 or not a:
            return a
        return self.exp[self.log[a] + self.log_minus_one]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if not a or not b:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def inv(self, a: int) -> int:
        if not a:
            raise ZeroDivisionError("inverse of zero in finite field")
        return self.exp[(self.order - self.log[a]) % self.order]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if not a:
            if k < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if k == 0 else 0
        return self.exp[(self.log[a] * k) % self.order]

    def frob(self, a: int, s: int = 1) -> int:
        """a^(q^s); s may be negative (inverse Frobenius)."""
        if not a:
            return 0
        s %= self.m
        return self.exp[(self.log[a] * pow(self.q, s, self.order)) % self.order] if self.order > 1 else a

    def scalar(self, c: int) -> int:
        """Code of the integer c (image of Z -> F_p)."""
        c %= self.p
        return c

    def elements(self) -> range:
        return range(self.size)

    def element(self, code: int) -> "FFElem":
        return FFElem(self, code)

    def __repr__(self):
        return f"FieldSpec(q={self.q}, m={self.m}, modulus={self.modulus})"


@lru_cache(maxsize=None)
def build_field(q: int, m: int = 1) -> FieldSpec:
    """The deterministic FieldSpec of F_{q^m}; cached, so identical calls share tables."""
    if m < 1:
        raise ValueError("extension degree must be >= 1")
    prime_power(q)
    return FieldSpec(q, m)


def embedding(small: FieldSpec, big: FieldSpec) -> list[int]:
    """Table sending codes of ``small`` to codes of ``big``.

    Uses the smallest root of small's modulus inside big.  Both fields must be
    extensions of the same F_q with small.m dividing big.m.
    """
    if small.q != big.q or big.m % small.m:
        raise ValueError("not a subfield")
    key = small.m
    table = big._embed_cache.get(key)
    if table is not None:
        return table
    if small.m == 1:
        table = list(range(small.size))
    else:
        mod = small.modulus
        root = next(z for z in big.elements() if _eval_codes(big, mod, z) == 0)
        q = small.q
        powers = [1]
        for _ in range(small.m - 1):
            powers.append(big.mul(powers[-1], root))
        table = []
        for code in small.elements():
            acc, c = 0, code
            for pw in powers:
                acc = big.add(acc, big.mul(c % q, pw))
                c //= q
            table.append(acc)
    big._embed_cache.setdefault(key, table)
    return big._embed_cache[key]


def _eval_codes(field: FieldSpec, coeffs: Sequence[int], z: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = field.add(field.mul(acc, z), c)
    return acc


def restrict(x: int, big: FieldSpec, small: FieldSpec) -> int:
    """Pull a code of ``big`` that lies in ``small`` back to small's code."""
    table = embedding(small, big)
    inv = big._embed_cache.get(("inv", small.m))
    if inv is None:
        inv = {b: s for s, b in enumerate(table)}
        big._embed_cache[("inv", small.m)] = inv
    try:
        return inv[x]
    except KeyError:
        raise ValueError("element is not in the subfield") from None


class FFElem:
    """An element of a finite field, with operator syntax."""

    __slots__ = ("spec", "code")

    def __init__(self, spec: FieldSpec, code: int):
        if not 0 <= code < spec.size:
            raise ValueError("code out of range")
        self.spec = spec
        self.code = code

    @property
    def coeffs(self) -> tuple[int, ...]:
        """Coefficient vector over F_q (as F_q codes), low to high."""
        return tuple(self.spec._vec(self.code))

    def _other(self, o):
        if isinstance(o, FFElem):
            if o.spec is not self.spec:
                raise ValueError("elements of different fields")
            return o.code
        if isinstance(o, int):
            return self.spec.scalar(o)
        return NotImplemented

    def __add__(self, o):
        c = self._other(o)
        return NotImplemented if c is NotImplemented else FFElem(self.spec, self.spec.add(self.code, c))

    __radd__ = __add__

    def __sub__(self, o):
        c = self._other(o)
        return NotImplemented if c is NotImplemented else FFElem(self.spec, self.spec.sub(self.code, c))

    def __rsub__(self, o):
        c = self._other(o)
        return NotImplemented if c is NotImplemented else FFElem(self.spec, self.spec.sub(c, self.code))

    def __neg__(self):
        return FFElem(self.spec, self.spec.neg(self.code))

    def __mul__(self, o):
        c = self._other(o)
        return NotImplemented if c is NotImplemented else FFElem(self.spec, self.spec.mul(self.code, c))

    __rmul__ = __mul__

    def __truediv__(self, o):
        c = self._other(o)
        return NotImplemented if c is NotImplemented else FFElem(self.spec, self.spec.div(self.code, c))

    def __pow__(self, k: int):
        return FFElem(self.spec, self.spec.pow(self.code, k))

    def inverse(self) -> "FFElem":
        return FFElem(self.spec, self.spec.inv(self.code))

    def __eq__(self, o):
        if isinstance(o, FFElem):
            return self.spec is o.spec and self.code == o.code
        if isinstance(o, int):
            return self.code == self.spec.scalar(o)
        return NotImplemented

    def __hash__(self):
        return hash((self.spec.q, self.spec.m, self.code))

    def __lt__(self, o: "FFElem"):
        return self.code < o.code

    def __bool__(self):
        return self.code != 0

    def __repr__(self):
        return f"FFElem({self.code} in F_{self.spec.q}^{self.spec.m})"


def frobenius(x: FFElem, s: int) -> FFElem:
    """x^(q^s) with s taken modulo the extension degree."""
    return FFElem(x.spec, x.spec.frob(x.code, s))


def embed(x: FFElem, big: FieldSpec) -> FFElem:
    return FFElem(big, embedding(x.spec, big)[x.code])


def trace_norm(x: FFElem, down_to: FieldSpec) -> tuple[FFElem, FFElem]:
    """Relative trace and norm of x down to a subfield, returned in the subfield."""
    F = x.spec
    if down_to.q != F.q or F.m % down_to.m:
        raise ValueError("target is not a subfield")
    step = down_to.m
    t, nr, y = 0, 1, x.code
    for _ in range(F.m // step):
        t = F.add(t, y)
        nr = F.mul(nr, y)
        y = F.frob(y, step)
    return FFElem(down_to, restrict(t, F, down_to)), FFElem(down_to, restrict(nr, F, down_to))


def roots_over(f: Sequence[FFElem], target: FieldSpec) -> list[FFElem]:
    """All roots in ``target`` of the polynomial with coefficients f (low to high)."""
    coeffs = [embedding(c.spec, target)[c.code] for c in f]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        raise ValueError("zero polynomial")
    return [FFElem(target, z) for z in target.elements() if _eval_codes(target, coeffs, z) == 0]


def root_codes(coeffs: Iterable[int], field: FieldSpec) -> list[int]:
    """Roots (as codes, ascending) of a polynomial whose coefficients are codes of ``field``."""
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        raise ValueError("zero polynomial")
    return [z for z in field.elements() if _eval_codes(field, coeffs, z) == 0]
