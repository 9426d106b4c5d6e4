"""Command line interface: ``python3 -m ffgauss <command> ...``.

Polynomials are written as digit strings, lowest degree first (``21`` is
2 + t, which is t - 1 over F_3), or as expressions in ``t`` such as ``t^2+1``.
Exit status: 0 when every requested check passes, 1 when one fails or is
inconclusive, 2 for malformed input.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from . import lab
from .ffield import build_field
from .gamma import gamma_engine
from .gauss import (
    ari_gauss,
    gauss_monomial,
    geo_gauss,
    pairing_data,
    scalar_product_oracle,
    tilde_gauss,
)
from .poly import AFrac, Poly, QDigits, RatFunc, enumerate_below, gcd, parse_poly, q_digits
from .series import Series
from .vadic import make_context


class UsageError(ValueError):
    pass


# -- parsing ---------------------------------------------------------------------


def parse_q(text: str) -> int:
    try:
        q = int(text)
        build_field(q)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"q must be a prime power: {text}") from exc
    return q


def parse_y(q: int, text: str):
    """``r/(q^t-1)`` gives QDigits; any other fraction with denominator prime to p a Fraction."""
    text = text.replace(" ", "")
    m = re.fullmatch(r"(-?\d+)/\(?(\d+)\^(\d+)-1\)?", text)
    if m:
        base, t = int(m.group(2)), int(m.group(3))
        if base != q or t < 1:
            raise UsageError(f"y must be written over {q}^t-1")
        return q_digits(q, int(m.group(1)), t)
    try:
        y = Fraction(text)
    except ValueError as exc:
        raise UsageError(f"bad y: {text}") from exc
    if y.denominator % build_field(q).p == 0:
        raise UsageError("y must be a p-adic integer")
    return y


def y_fraction(q: int, y) -> Fraction:
    if isinstance(y, QDigits):
        return y.value()
    return y


def y_digits(q: int, y, t: int) -> QDigits:
    """y as digits of period t (its denominator must divide q^t - 1)."""
    if isinstance(y, QDigits):
        if t % y.t:
            raise UsageError(f"digit period {y.t} does not divide {t}")
        return y.stretch(t)
    M = q ** t - 1
    r = y * M
    if r.denominator != 1:
        raise UsageError(f"y = {y} does not have denominator dividing {q}^{t}-1")
    return q_digits(q, int(r), t)


def parse_x(q: int, text: str) -> RatFunc:
    try:
        return RatFunc.parse(q, text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad x: {text}") from exc


def build_context(args):
    q = parse_q(args.q)
    if args.v is None or args.n is None:
        raise UsageError("--v and --n are required")
    try:
        v = parse_poly(q, args.v)
        n = parse_poly(q, args.n)
        return make_context(q, v, n, args.prec)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# -- output -------------------------------------------------------------------------


def series_json(s: Series) -> dict:
    R = s.ring
    e = getattr(R, "e", 1)
    known = s.prec if s.prec < (1 << 59) else s.val + len(s.c)
    start = min(0, s.val) if s.c else 0
    return {
        "field": f"F_{R.q}^{R.F.m}",
        "uniformizer": _uniformizer_name(R),
        "ram_index": e,
        "val": s.val if s.c else known,
        "start": start,
        "coeffs": [s.coeff(i) for i in range(start, known)] if s.c else [],
        "prec": known,
    }


def _uniformizer_name(R) -> str:
    if getattr(R, "kind", "") == "inf":
        return "1/theta~"
    if getattr(R, "e", 1) == 1:
        return f"v={R.v.encode()}"
    return f"(-v)^(1/{R.e}), v={R.v.encode()}"


def emit(obj, args, tsv_rows=None):
    if args.format == "tsv" and tsv_rows is not None:
        text = "\n".join("\t".join(str(c) for c in row) for row in tsv_rows) + "\n"
    else:
        text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- commands -----------------------------------------------------------------------


def cmd_gauss(args) -> int:
    ctx = build_context(args)
    q = ctx.q
    out = {"q": q, "v": ctx.v.encode(), "n": ctx.n.encode(), "l": ctx.l, "kind": args.kind}
    if args.kind == "ari":
        s = ari_gauss(ctx, args.s)
        out.update({"s": args.s % ctx.d, "value": series_json(s)})
        emit(out, args)
        return 0
    if args.x is None:
        raise UsageError("--x is required")
    x = lab.as_afrac(ctx, parse_x(q, args.x))
    a = parse_poly(q, args.a) if args.a else Poly.const(q, 1)
    if gcd(a, ctx.n).deg != 0:
        raise UsageError("a must be a unit modulo n")
    if args.kind == "geo":
        val = geo_gauss(ctx, x, a, args.s)
        out.update({"a": a.encode(), "s": args.s % ctx.dl})
    elif args.kind == "tilde":
        val = tilde_gauss(ctx, x)
    elif args.kind == "oracle":
        val = scalar_product_oracle(ctx, x)
    else:
        y = parse_y(q, args.y) if args.y else lab.ones_digits(q, ctx.dl)
        val = gauss_monomial(ctx, x, y_digits(q, y, ctx.dl))
        out["y"] = args.y or f"1/({q}-1)"
    out.update({"x": x.encode(), "value": series_json(val)})
    emit(out, args)
    return 0


def cmd_gamma(args) -> int:
    from .vadic import unramified

    q = parse_q(args.q)
    if args.v is None or args.y is None:
        raise UsageError("--v and --y are required")
    try:
        v = parse_poly(q, args.v)
        ring = unramified(q, v, build_field(q, v.deg), args.prec)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    eng = gamma_engine(ring)
    y = y_fraction(q, parse_y(q, args.y))
    if args.kind == "ari":
        val = eng.gamma_ari(y)
    else:
        if args.x is None:
            raise UsageError("--x is required for geometric and two-variable gamma")
        x = parse_x(q, args.x)
        if (x.den % v).is_zero():
            raise UsageError("x must be v-integral")
        val = eng.gamma_geo(x, y) if args.kind == "geo" else eng.gamma_two(x, y)
    out = {"q": q, "v": v.encode(), "kind": args.kind, "y": str(y), "value": series_json(val)}
    if args.x is not None:
        out["x"] = parse_x(q, args.x).encode()
    sj = out["value"]
    rows = [["index", "coeff"]] + [[sj["start"] + i, c] for i, c in enumerate(sj["coeffs"])]
    emit(out, args, rows)
    return 0


def cmd_pairing_table(args) -> int:
    ctx = build_context(args)
    rep = lab.verify_pairings(ctx)
    data = pairing_data(ctx)
    K = ctx.K
    bars = [ctx.W.reduce(x) for x in data.lam]
    trace = []
    for sb in data.lam_star_bar:
        row = []
        for lb in bars:
            z = K.mul(sb, lb)
            tr = 0
            for j in range(ctx.dl):
                tr = K.add(tr, K.frob(z, j))
            row.append(tr)
        trace.append(row)
    out = {
        "params": lab._params(ctx),
        "a": [a.encode() for a in data.a],
        "b": [b.encode() for b in data.b],
        "trace": trace,
        "status": rep.status,
    }
    rows = [["i"] + [f"b{j}" for j in range(len(data.b))]]
    rows += [[f"a{i}"] + r for i, r in enumerate(trace)]
    emit(out, args, rows)
    return 0 if rep.ok else 1


def cmd_stickelberger(args) -> int:
    ctx = build_context(args)
    if args.x is None:
        raise UsageError("--x is required")
    x = lab.as_afrac(ctx, parse_x(ctx.q, args.x))
    if x.is_zero() or gcd(x.a0, ctx.n).deg != 0:
        raise UsageError("x = a0/n must be in lowest terms with a0 nonzero")
    eta = lab.stickelberger_element(ctx, x.a0)
    rep = lab.verify_stickelberger(ctx, x)
    out = {"params": lab._params(ctx, x=x), "eta": eta.encode(), "report": rep.to_json()}
    rows = [["sigma", "coefficient"]] + [[k, c] for k, c in eta.encode().items()]
    emit(out, args, rows)
    return 0 if rep.ok else 1


def default_g(ctx):
    """The smallest monic g of degree 1 or 2 coprime to v whose HD context fits the size limit."""
    q = ctx.q
    for deg in (1, 2):
        for low in enumerate_below(q, deg):
            g = Poly.monomial(q, deg) + low
            if gcd(g, ctx.v).deg != 0:
                continue
            try:
                lab.hd_context(ctx, g)
            except ValueError:
                continue
            return g
    return None


def default_lift(ctx):
    """A multiple n2 = n g (g monic of degree 1) with a larger order and a context that fits."""
    q = ctx.q
    for low in enumerate_below(q, 1):
        g = Poly.t(q) + low
        if gcd(g, ctx.v).deg != 0:
            continue
        try:
            big = make_context(q, ctx.v, ctx.n * g, ctx.prec)
        except ValueError:
            continue
        if big.l > ctx.l:
            return ctx.n * g
    return None


def ymult_digits(ctx, n: int = 2):
    """An even y over q^(dl)-1 (so that (y+i)/n keeps the period), or None."""
    q, dl = ctx.q, ctx.dl
    M = q ** dl - 1
    if M % n:
        return None
    for r in range(n, M, n):
        part = [Fraction(r + i * M, n * M) for i in range(n)]
        if all((p * M).denominator == 1 for p in part):
            return q_digits(q, r, dl)
    return None


def _distinct(*ys):
    seen, out = set(), []
    for y in ys:
        if y.value() not in seen:
            seen.add(y.value())
            out.append(y)
    return out


def suite(ctx, x: AFrac | None = None) -> list:
    """Every applicable check on one context."""
    q, dl = ctx.q, ctx.dl
    if x is None:
        x = AFrac(Poly.const(q, 1), ctx.n)
    reps = [lab.verify_oracle(ctx)]
    for s in range(dl):
        reps.append(lab.verify_gkt_first(ctx, x, s))
    ones = lab.ones_digits(q, dl)
    single = q_digits(q, q ** (dl - 1), dl)
    mixed = q_digits(q, 1 + q ** (dl - 1), dl) if dl > 1 else q_digits(q, 1, dl)
    for y in _distinct(ones, single):
        reps.append(lab.verify_gkt_geo(ctx, x, y))
    for y in _distinct(single, mixed):
        reps.append(lab.verify_gkt_ari(ctx, y))
        reps.append(lab.verify_gkt_two(ctx, x, y))
    reps.append(lab.verify_reflection(ctx, x))
    reps.append(lab.verify_reflection_pair(ctx, x, mixed))
    g = default_g(ctx)
    if g is not None:
        big = lab.hd_context(ctx, g)
        reps.append(lab.verify_hd_geo(ctx, g, x))
        reps.append(lab.verify_hd_two(ctx, g, x, q_digits(q, 1, big.dl)))
    n2 = default_lift(ctx)
    if n2 is not None:
        reps.append(lab.verify_hd_lift(ctx, n2, x, ones))
    if q % 2:
        y = ymult_digits(ctx, 2)
        if y is not None:
            reps.append(lab.verify_hd_ymult(ctx, x, y, 2))
    if not x.is_zero() and gcd(x.a0, ctx.n).deg == 0:
        reps.append(lab.verify_stickelberger(ctx, x))
    if not x.is_zero():
        reps.append(lab.verify_infinity(ctx, x))
    reps.append(lab.verify_pairings(ctx))
    reps.append(lab.verify_abp(ctx, 5))
    reps.extend(gamma_suite(ctx))
    return reps


def gamma_suite(ctx) -> list:
    from .vadic import unramified

    q, v = ctx.q, ctx.v
    eng = gamma_engine(unramified(q, v, build_field(q, v.deg), ctx.prec))
    t = Poly.t(q)
    x = RatFunc(t + 1, t * t + t + 1) if gcd(t * t + t + 1, v).deg == 0 else RatFunc(t + 1)
    if (x.den % v).is_zero() or (x.num % v).is_zero():
        x = RatFunc(t + 2 if q > 2 else t * t + t + 1)
    y = Fraction(1, q + 1)
    reps = [
        lab.verify_gamma_levels(eng),
        lab.verify_gamma_reflection(eng, x, y),
        lab.verify_gamma_no_carry(eng, x, Fraction(1), Fraction(q)),
    ]
    for n in (2, 3):
        if n % build_field(q).p:
            reps.append(lab.verify_gamma_multiplication(eng, x, Fraction(1, 5), n, 1))
    for g in (t + 1, t * t + 1):
        if gcd(g, v).deg == 0:
            reps.append(lab.verify_gamma_translation(eng, x, g, Fraction(2, 7)))
    return reps


CHECKS = {
    "oracle": lambda ctx, a: [lab.verify_oracle(ctx)],
    "gkt-first": lambda ctx, a: [lab.verify_gkt_first(ctx, a["x"], s) for s in a["s_all"]],
    "gkt-geo": lambda ctx, a: [lab.verify_gkt_geo(ctx, a["x"], a["y"])],
    "gkt-ari": lambda ctx, a: [lab.verify_gkt_ari(ctx, a["y"])],
    "gkt-two": lambda ctx, a: [lab.verify_gkt_two(ctx, a["x"], a["y"])],
    "reflection": lambda ctx, a: [lab.verify_reflection(ctx, a["x"])],
    "reflection-pair": lambda ctx, a: [lab.verify_reflection_pair(ctx, a["x"], a["y"])],
    "hd-geo": lambda ctx, a: [lab.verify_hd_geo(ctx, a["g"], a["x"], a.get("y_hd"))],
    "hd-two": lambda ctx, a: [lab.verify_hd_two(ctx, a["g"], a["x"], a["y_hd"])],
    "hd-lift": lambda ctx, a: [lab.verify_hd_lift(ctx, a["n2"], a["x"], a["y"])],
    "hd-y-mult": lambda ctx, a: [lab.verify_hd_ymult(ctx, a["x"], a["y"], 2)],
    "stickelberger": lambda ctx, a: [lab.verify_stickelberger(ctx, a["x"])],
    "infinity": lambda ctx, a: [lab.verify_infinity(ctx, a["x"])],
    "pairings": lambda ctx, a: [lab.verify_pairings(ctx)],
    "abp": lambda ctx, a: [lab.verify_abp(ctx, 5)],
    "gamma": lambda ctx, a: gamma_suite(ctx),
}


def cmd_verify(args) -> int:
    ctx = build_context(args)
    lab.TIMING["enabled"] = bool(args.timing)
    q = ctx.q
    x = lab.as_afrac(ctx, parse_x(q, args.x)) if args.x else AFrac(Poly.const(q, 1), ctx.n)
    if args.theorem == "all":
        reps = suite(ctx, x)
    else:
        if args.theorem not in CHECKS:
            raise UsageError(f"unknown theorem id {args.theorem}; choose from all, {', '.join(CHECKS)}")
        a = {"x": x, "s_all": [args.s] if args.s is not None else list(range(ctx.dl))}
        y = parse_y(q, args.y) if args.y else None
        a["y"] = y_digits(q, y, ctx.dl) if y is not None else lab.ones_digits(q, ctx.dl)
        g = parse_poly(q, args.g) if args.g else default_g(ctx)
        if args.theorem in ("hd-geo", "hd-two"):
            if g is None:
                raise UsageError("no suitable g; pass --g")
            a["g"] = g
            big = lab.hd_context(ctx, g)
            a["y_hd"] = y_digits(q, y, big.dl) if y is not None else (
                lab.ones_digits(q, big.dl) if args.theorem == "hd-geo" else q_digits(q, 1, big.dl))
        if args.theorem == "hd-lift":
            n2 = parse_poly(q, args.n2) if args.n2 else default_lift(ctx)
            if n2 is None:
                raise UsageError("no suitable n2; pass --n2")
            a["n2"] = n2
        if args.theorem == "hd-y-mult" and y is None:
            a["y"] = ymult_digits(ctx, 2)
            if a["y"] is None:
                raise UsageError("no y with the needed period; pass --y")
        reps = CHECKS[args.theorem](ctx, a)
    docs = [r.to_json() for r in reps]
    rows = [["theorem_id", "status", "achieved_precision", "params"]]
    rows += [[r.theorem_id, r.status, r.achieved_precision, json.dumps(r.params, sort_keys=True)] for r in reps]
    emit({"reports": docs, "all_pass": all(r.ok for r in reps)}, args, rows)
    return 0 if all(r.ok for r in reps) else 1


# -- entry ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", default="3")
    common.add_argument("--v", default=None, help="prime v, e.g. 01 or t")
    common.add_argument("--n", default=None, help="modulus n, e.g. 21 or t-1")
    common.add_argument("--x", default=None, help="x as a0/n")
    common.add_argument("--y", default=None, help="y as r/(q^t-1), or a p-adic fraction for gamma")
    common.add_argument("--prec", type=int, default=8)
    common.add_argument("--format", choices=("json", "tsv"), default="json")
    common.add_argument("--out", default=None)

    p = argparse.ArgumentParser(prog="ffgauss", description="Geometric Gauss sums and v-adic gamma values")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gauss", parents=[common])
    g.add_argument("--kind", choices=("geo", "tilde", "ari", "oracle", "monomial"), default="geo")
    g.add_argument("--a", default=None)
    g.add_argument("--s", type=int, default=0)
    g.set_defaults(func=cmd_gauss)

    gm = sub.add_parser("gamma", parents=[common])
    gm.add_argument("--kind", choices=("ari", "geo", "two"), default="two")
    gm.set_defaults(func=cmd_gamma)

    vf = sub.add_parser("verify", parents=[common])
    vf.add_argument("theorem", help="theorem id or 'all'")
    vf.add_argument("--s", type=int, default=None)
    vf.add_argument("--g", default=None)
    vf.add_argument("--n2", default=None)
    vf.add_argument("--timing", action="store_true")
    vf.set_defaults(func=cmd_verify)

    pt = sub.add_parser("pairing-table", parents=[common])
    pt.set_defaults(func=cmd_pairing_table)

    st = sub.add_parser("stickelberger", parents=[common])
    st.set_defaults(func=cmd_stickelberger)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.prec < 4:
        parser.error("--prec must be at least 4")
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"ffgauss: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
