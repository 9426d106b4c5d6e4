"""Exact arithmetic in F_q[t] and F_q(t).

Coefficients are codes of F_q as produced by :mod:`ffgauss.ffield`.  A
:class:`Poly` is immutable and normalized (no zero leading coefficient), so
structural equality is mathematical equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

from .ffield import FieldSpec, build_field

DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


class Poly:
    __slots__ = ("q", "c", "_hash")

    def __init__(self, q: int, coeffs: Sequence[int] = ()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.q = q
        self.c = tuple(c)
        self._hash = None

    # -- constructors --------------------------------------------------------

    @classmethod
    def const(cls, q: int, c: int) -> "Poly":
        return cls(q, (c,))

    @classmethod
    def t(cls, q: int) -> "Poly":
        return cls(q, (0, 1))

    @classmethod
    def monomial(cls, q: int, k: int, c: int = 1) -> "Poly":
        return cls(q, (0,) * k + (c,))

    @classmethod
    def parse(cls, q: int, text: str) -> "Poly":
        """Read a low-to-high digit string such as ``"101"`` (= t^2 + 1)."""
        text = text.strip()
        if not text or any(ch not in DIGITS[:q] for ch in text.lower()):
            raise ValueError(f"bad polynomial encoding {text!r} for q={q}")
        return cls(q, [DIGITS.index(ch) for ch in text.lower()])

    # -- basic properties ------------------------------------------------------

    @property
    def F(self) -> FieldSpec:
        return build_field(self.q)

    @property
    def deg(self) -> int:
        """Degree; the zero polynomial has degree -1 here (stands in for -infinity)."""
        return len(self.c) - 1

    @property
    def lead(self) -> int:
        return self.c[-1] if self.c else 0

    def is_zero(self) -> bool:
        return not self.c

    def is_monic(self) -> bool:
        return self.lead == 1

    def coeff(self, i: int) -> int:
        return self.c[i] if 0 <= i < len(self.c) else 0

    def encode(self) -> str:
        return "".join(DIGITS[x] for x in self.c) or "0"

    def __repr__(self):
        return f"Poly({self.encode()})"

    def __str__(self):
        if not self.c:
            return "0"
        terms = []
        for i in range(len(self.c) - 1, -1, -1):
            x = self.c[i]
            if not x:
                continue
            mon = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if not mon:
                terms.append(str(x))
            elif x == 1:
                terms.append(mon)
            else:
                terms.append(f"{x}*{mon}")
        return " + ".join(terms)

    def __eq__(self, o):
        if isinstance(o, Poly):
            return self.q == o.q and self.c == o.c
        if isinstance(o, int):
            return self.c == Poly(self.q, (o % self.F.p,)).c
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.q, self.c))
        return self._hash

    def sort_key(self):
        return (len(self.c), tuple(reversed(self.c)))

    # -- ring operations -----------------------------------------------------

    def _lift(self, o) -> "Poly":
        if isinstance(o, Poly):
            if o.q != self.q:
                raise ValueError("polynomials over different fields")
            return o
        if isinstance(o, int):
            return Poly(self.q, (o % self.F.p,))
        raise TypeError(f"cannot combine Poly with {type(o).__name__}")

    def __add__(self, o):
        o = self._lift(o)
        F = self.F
        a, b = self.c, o.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] = F.add(out[i], x)
        return Poly(self.q, out)

    __radd__ = __add__

    def __neg__(self):
        F = self.F
        return Poly(self.q, [F.neg(x) for x in self.c])

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) + (-self)

    def scale(self, k: int) -> "Poly":
        F = self.F
        return Poly(self.q, [F.mul(k, x) for x in self.c])

    def shift(self, k: int) -> "Poly":
        return Poly(self.q, (0,) * k + self.c) if self.c else self

    def __mul__(self, o):
        o = self._lift(o)
        if not self.c or not o.c:
            return Poly(self.q)
        F = self.F
        exp, log = F.exp, F.log
        out = [0] * (len(self.c) + len(o.c) - 1)
        lb = [(j, log[y]) for j, y in enumerate(o.c) if y]
        add = F.add
        for i, x in enumerate(self.c):
            if not x:
                continue
            lx = log[x]
            for j, ly in lb:
                out[i + j] = add(out[i + j], exp[lx + ly])
        return Poly(self.q, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        acc, base = Poly(self.q, (1,)), self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def divmod(self, o: "Poly") -> tuple["Poly", "Poly"]:
        o = self._lift(o)
        if not o.c:
            raise ZeroDivisionError("polynomial division by zero")
        F = self.F
        r = list(self.c)
        dq = len(r) - len(o.c)
        if dq < 0:
            return Poly(self.q), self
        qt = [0] * (dq + 1)
        inv_lead = F.inv(o.lead)
        neg_o = [F.neg(x) for x in o.c]
        for k in range(dq, -1, -1):
            x = r[k + len(o.c) - 1]
            if not x:
                continue
            f = F.mul(x, inv_lead)
            qt[k] = f
            for j, y in enumerate(neg_o):
                if y:
                    r[k + j] = F.add(r[k + j], F.mul(f, y))
        return Poly(self.q, qt), Poly(self.q, r[: len(o.c) - 1])

    def __floordiv__(self, o):
        return self.divmod(o)[0]

    def __mod__(self, o):
        return self.divmod(o)[1]

    def monic(self) -> "Poly":
        if not self.c:
            return self
        return self.scale(self.F.inv(self.lead))

    def evaluate(self, z: int, field: FieldSpec | None = None) -> int:
        """Value at a code z of ``field`` (an extension of F_q; defaults to F_q)."""
        field = field or self.F
        acc = 0
        for x in reversed(self.c):
            acc = field.add(field.mul(acc, z), x)
        return acc

    def frob_coeffs(self, s: int) -> "Poly":
        """Apply x -> x^(p^s) to the coefficients (identity when q is prime)."""
        F = self.F
        if F.e == 1:
            return self
        base = F.base
        return Poly(self.q, [base.frob(x, s) for x in self.c])

    def derivative(self) -> "Poly":
        F = self.F
        return Poly(self.q, [F.mul(i % F.p, x) for i, x in enumerate(self.c)][1:])


def gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """(g, s, t) with s*a + t*b = g monic."""
    q = a.q
    r0, r1 = a, b
    s0, s1 = Poly(q, (1,)), Poly(q)
    t0, t1 = Poly(q), Poly(q, (1,))
    while not r1.is_zero():
        qt, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - qt * s1
        t0, t1 = t1, t0 - qt * t1
    if r0.is_zero():
        return r0, s0, t0
    k = r0.F.inv(r0.lead)
    return r0.scale(k), s0.scale(k), t0.scale(k)


def inverse_mod(a: Poly, n: Poly) -> Poly:
    g, s, _ = xgcd(a % n, n)
    if g.deg != 0:
        raise ValueError("not invertible modulo n")
    return s % n


def powmod(a: Poly, k: int, n: Poly) -> Poly:
    acc, base = Poly(a.q, (1,)) % n, a % n
    while k:
        if k & 1:
            acc = acc * base % n
        base = base * base % n
        k >>= 1
    return acc


def enumerate_monic(q: int, i: int) -> Iterator[Poly]:
    """The q^i monic polynomials of degree i, ordered by lower coefficients read high to low."""
    if i < 0:
        return
    for low in product(range(q), repeat=i):
        yield Poly(q, tuple(reversed(low)) + (1,))


def enumerate_below(q: int, d: int) -> Iterator[Poly]:
    """All polynomials of degree < d (q^d of them), zero first."""
    for k in range(q ** d):
        yield Poly(q, [(k // q ** i) % q for i in range(d)])


def poly_from_index(q: int, k: int) -> Poly:
    out = []
    while k:
        out.append(k % q)
        k //= q
    return Poly(q, out)


def poly_index(a: Poly) -> int:
    return sum(x * a.q ** i for i, x in enumerate(a.c))


@lru_cache(maxsize=None)
def factor(a: Poly) -> tuple[tuple[Poly, int], ...]:
    """Monic irreducible factorization by trial division (desk-scale degrees)."""
    if a.is_zero():
        raise ValueError("cannot factor zero")
    q = a.q
    rest = a.monic()
    out = []
    deg = 1
    while rest.deg >= 2 * deg:
        for f in enumerate_monic(q, deg):
            k = 0
            while True:
                qt, r = rest.divmod(f)
                if not r.is_zero():
                    break
                rest = qt
                k += 1
            if k:
                out.append((f, k))
        deg += 1
    if rest.deg >= 1:
        for i, (f, k) in enumerate(out):
            if f == rest:
                out[i] = (f, k + 1)
                break
        else:
            out.append((rest, 1))
    out.sort(key=lambda fk: fk[0].sort_key())
    return tuple(out)


def is_irreducible(a: Poly) -> bool:
    if a.deg < 1:
        return False
    fs = factor(a)
    return len(fs) == 1 and fs[0][1] == 1


def monic_divisors(n: Poly) -> list[Poly]:
    q = n.q
    divs = [Poly(q, (1,))]
    for f, k in factor(n):
        divs = [d * f ** j for d in divs for j in range(k + 1)]
    return sorted(divs, key=Poly.sort_key)


def mobius(a: Poly) -> int:
    fs = factor(a)
    if any(k > 1 for _, k in fs):
        return 0
    return -1 if len(fs) % 2 else 1


def units_count(n: Poly) -> int:
    """|(A/n)^x|."""
    q = n.q
    out = 1
    for f, k in factor(n):
        out *= (q ** f.deg - 1) * q ** (f.deg * (k - 1))
    return out


class RatFunc:
    """An element num/den of F_q(t) in lowest terms with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        if den is None:
            den = Poly(num.q, (1,))
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = gcd(num, den)
        if g.deg > 0:
            num, den = num // g, den // g
        k = den.F.inv(den.lead)
        self.num, self.den = num.scale(k), den.scale(k)

    @property
    def q(self) -> int:
        return self.num.q

    @classmethod
    def parse(cls, q: int, text: str) -> "RatFunc":
        text = text.strip()
        if "/" in text:
            a, b = text.split("/", 1)
            return cls(parse_poly(q, a), parse_poly(q, b))
        return cls(parse_poly(q, text))

    def encode(self) -> str:
        return f"{self.num.encode()}/{self.den.encode()}"

    def __repr__(self):
        return f"RatFunc({self.encode()})"

    def _lift(self, o):
        if isinstance(o, RatFunc):
            return o
        if isinstance(o, (Poly, int)):
            return RatFunc(self.num._lift(o))
        raise TypeError(f"cannot combine RatFunc with {type(o).__name__}")

    def __add__(self, o):
        o = self._lift(o)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        o = self._lift(o)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._lift(o)
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero in F_q(t)")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, o):
        return self._lift(o) / self

    def __eq__(self, o):
        if isinstance(o, (Poly, int)):
            o = self._lift(o)
        if isinstance(o, RatFunc):
            return self.num == o.num and self.den == o.den
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def in_ring(self) -> bool:
        return self.den.deg == 0


def parse_poly(q: int, text: str) -> Poly:
    """Accept either a digit string (low to high) or an expression in t such as ``t^2-1``."""
    text = text.strip().replace(" ", "")
    if text and all(ch in DIGITS[:q] for ch in text.lower()):
        return Poly.parse(q, text)
    return _parse_expr(q, text)


def _parse_expr(q: int, text: str) -> Poly:
    if not text:
        raise ValueError("empty polynomial")
    F = build_field(q)
    allowed = set("0123456789t^*+-()")
    if any(ch not in allowed for ch in text):
        raise ValueError(f"bad polynomial expression {text!r}")
    pos = 0

    def peek():
        return text[pos] if pos < len(text) else ""

    def atom():
        nonlocal pos
        ch = peek()
        if ch == "(":
            pos += 1
            val = expr()
            if peek() != ")":
                raise ValueError("unbalanced parentheses")
            pos += 1
        elif ch == "t":
            pos += 1
            val = Poly.t(q)
        elif ch.isdigit():
            start = pos
            while peek().isdigit():
                pos += 1
            n = int(text[start:pos])
            if n >= q and F.e > 1:
                raise ValueError("integer constants must be < q")
            val = Poly(q, (n if F.e > 1 else n % q,))
        else:
            raise ValueError(f"unexpected {ch!r} in {text!r}")
        if peek() == "^":
            pos += 1
            start = pos
            while peek().isdigit():
                pos += 1
            if start == pos:
                raise ValueError("missing exponent")
            val = val ** int(text[start:pos])
        return val

    def term():
        nonlocal pos
        val = atom()
        while peek() in ("*", "t", "("):
            if peek() == "*":
                pos += 1
            val = val * atom()
        return val

    def expr():
        nonlocal pos
        sign = 1
        if peek() in "+-":
            sign = -1 if peek() == "-" else 1
            pos += 1
        val = term()
        if sign < 0:
            val = -val
        while peek() in ("+", "-"):
            op = peek()
            pos += 1
            rhs = term()
            val = val + rhs if op == "+" else val - rhs
        return val

    out = expr()
    if pos != len(text):
        raise ValueError(f"trailing characters in {text!r}")
    return out


# -- residues, dual families, fractional parts -------------------------------


def residue_map(a: Poly, n: Poly) -> int:
    """Res(a/n): the coefficient of t^(deg n - 1) in a mod n, for monic n."""
    if n.deg < 1:
        raise ValueError("modulus must have positive degree")
    if not n.is_monic():
        raise ValueError("modulus must be monic")
    return (a % n).coeff(n.deg - 1)


def _solve_fq(F: FieldSpec, mat: list[list[int]], rhs: list[list[int]]) -> list[list[int]]:
    """Solve mat * X = rhs over F (Gauss-Jordan); raises if singular."""
    n = len(mat)
    aug = [list(mat[i]) + list(rhs[i]) for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        k = F.inv(aug[col][col])
        aug[col] = [F.mul(k, x) for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = F.neg(aug[r][col])
                aug[r] = [F.add(x, F.mul(f, y)) for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


@lru_cache(maxsize=None)
def dual_families(n: Poly) -> tuple[tuple[Poly, ...], tuple[Poly, ...]]:
    """n-dual families: a_i = t^i and b_j solving Res(a_i b_j / n) = delta_ij."""
    D = n.deg
    if D < 1:
        raise ValueError("modulus must have positive degree")
    q, F = n.q, n.F
    a = [Poly.monomial(q, i) for i in range(D)]
    gram = [[residue_map(a[i] * a[j], n) for j in range(D)] for i in range(D)]
    ident = [[1 if i == j else 0 for j in range(D)] for i in range(D)]
    inv = _solve_fq(F, gram, ident)
    b = [Poly(q, [inv[k][j] for k in range(D)]) for j in range(D)]
    for i in range(D):
        for j in range(D):
            if residue_map(a[i] * b[j], n) != (1 if i == j else 0):
                raise AssertionError("dual family check failed")
    return tuple(a), tuple(b)


@dataclass(frozen=True)
class AFrac:
    """x = a0/n with deg a0 < deg n; the canonical representative of x modulo A."""

    a0: Poly
    n: Poly

    def __post_init__(self):
        if not self.n.is_monic():
            raise ValueError("denominator must be monic")
        if self.a0.deg >= self.n.deg:
            raise ValueError("numerator degree must be below denominator degree")

    @property
    def q(self) -> int:
        return self.n.q

    def is_zero(self) -> bool:
        return self.a0.is_zero()

    def ratfunc(self) -> RatFunc:
        return RatFunc(self.a0, self.n)

    def over(self, m: Poly) -> Poly:
        """The numerator when x is written over a multiple m of n."""
        qt, r = m.divmod(self.n)
        if not r.is_zero():
            raise ValueError("denominator does not divide m")
        return self.a0 * qt % m

    def scaled(self, a: Poly) -> "AFrac":
        return AFrac(self.a0 * a % self.n, self.n)

    def encode(self) -> str:
        return f"{self.a0.encode()}/{self.n.encode()}"


def a_fractional(x: RatFunc) -> AFrac:
    return AFrac(x.num % x.den, x.den)


def afrac(a0: Poly, n: Poly) -> AFrac:
    """Fractional part of a0/n (not necessarily in lowest terms) kept over n."""
    k = n.F.inv(n.lead)
    n = n.scale(k)
    return AFrac(a0.scale(k) % n, n)


# -- q-adic digits -----------------------------------------------------------


@dataclass(frozen=True)
class QDigits:
    """The fractional part of r/(q^t - 1) through its t base-q digits, low first."""

    q: int
    t: int
    digits: tuple[int, ...]

    def __post_init__(self):
        if len(self.digits) != self.t or any(not 0 <= x < self.q for x in self.digits):
            raise ValueError("bad digit vector")

    @property
    def numerator(self) -> int:
        return sum(x * self.q ** i for i, x in enumerate(self.digits))

    def value(self) -> Fraction:
        return Fraction(self.numerator, self.q ** self.t - 1)

    def stretch(self, t2: int) -> "QDigits":
        """Same value written with period t2 (a multiple of t)."""
        if t2 % self.t:
            raise ValueError("period must be a multiple")
        return QDigits(self.q, t2, self.digits * (t2 // self.t))


def q_digits(q: int, r: int, t: int) -> QDigits:
    if t < 1:
        raise ValueError("period must be >= 1")
    M = q ** t - 1
    r %= M
    return QDigits(q, t, tuple((r // q ** i) % q for i in range(t)))


def q_digits_of(q: int, y: Fraction, t: int) -> QDigits:
    """Digits of <y> for y whose denominator divides q^t - 1."""
    M = q ** t - 1
    r = y * M
    if r.denominator != 1:
        raise ValueError(f"{y} does not have denominator dividing q^{t}-1")
    return q_digits(q, int(r), t)


def digit_shift(y: QDigits, h: int) -> QDigits:
    """Digits of <q^h y>: a cyclic rotation."""
    h %= y.t
    return QDigits(y.q, y.t, y.digits[-h:] + y.digits[:-h] if h else y.digits)


# -- sign and flat -----------------------------------------------------------


def v_valuation(a: Poly, v: Poly) -> int:
    if a.is_zero():
        raise ValueError("valuation of zero")
    k = 0
    while True:
        qt, r = a.divmod(v)
        if not r.is_zero():
            return k
        a = qt
        k += 1


def sgn_flat(x: RatFunc, v: Poly) -> tuple[int, RatFunc]:
    """(sgn x, x^flat): leading-coefficient ratio, and x or 1 depending on whether v divides x."""
    if x.num.is_zero():
        return 0, RatFunc(Poly.const(x.q, 1))
    if (x.den % v).is_zero():
        raise ValueError("x is not v-integral")
    F = x.num.F
    sgn = F.div(x.num.lead, x.den.lead)
    if (x.num % v).is_zero():
        return sgn, RatFunc(Poly.const(x.q, 1))
    return sgn, x
