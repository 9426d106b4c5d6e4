"""One check per acceptance criterion.

Each test records a line "CRITERION k: PASS|FAIL ..." which the terminal
summary prints (see conftest.py), then asserts.
"""

import filecmp
import time
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE, P, grid_contexts
from ffgauss import lab
from ffgauss.cli import main
from ffgauss.ffield import build_field
from ffgauss.gamma import gamma_engine
from ffgauss.gauss import geo_gauss
from ffgauss.poly import AFrac, Poly, RatFunc, enumerate_below, gcd, q_digits
from ffgauss.series import Series
from ffgauss.vadic import make_context, unramified

# coefficients of (1 - t)^(1/(q-1)) for q = 3 and q = 4, reduced mod p
ROOT_Q3 = [1, 1, 1, 2, 2, 2, 0, 0, 0, 2, 2, 2]
ROOT_Q4 = [1, 1, 1, 1, 0, 0, 0, 0, 1, 1, 1, 1]


def record(k: int, ok: bool, detail: str, seconds: float, limit: float | None = None):
    within = limit is None or seconds < limit
    verdict = "PASS" if ok and within else "FAIL"
    budget = f" (limit {limit:g} s)" if limit is not None else ""
    line = f"CRITERION {k}: {verdict} {detail}; {seconds:.2f} s{budget}"
    ACCEPTANCE[k] = line
    print(line)
    assert ok, line
    assert within, line


def nonzero_x(ctx):
    return [AFrac(a, ctx.n) for a in enumerate_below(ctx.q, ctx.n.deg) if not a.is_zero()]


def failures(reports):
    return [(r.theorem_id, r.status, r.params) for r in reports if not r.ok]


@pytest.fixture(scope="module")
def grid8():
    return grid_contexts(8)


def test_criterion_1_worked_example():
    start = time.perf_counter()
    bad = []
    for q, root in ((3, ROOT_Q3), (4, ROOT_Q4)):
        ctx = make_context(q, Poly.t(q), Poly.t(q) - 1, 12)
        K, W = ctx.K, ctx.W
        # omega(1) = (1 - t)^(1/(q-1)), congruent to 1 mod v
        om = Series(W, 0, root, 12)
        if (om ** (q - 1)).agree(W.one() - W.theta()) < 12 or om.coeff(0) != 1:
            bad.append((q, "omega(1)"))
        for eps in range(1, q):
            got = geo_gauss(ctx, AFrac(Poly.const(q, eps), ctx.n))
            want = [K.sub(1 if i == 0 else 0, K.mul(eps, c)) for i, c in enumerate(root)]
            if [got.coeff(i) for i in range(12)] != want or got.prec < 12:
                bad.append((q, eps))
    record(1, not bad, f"q in {{3, 4}}, all eps, mod v^12, mismatches={bad}", time.perf_counter() - start, 1.0)


def test_criterion_2_oracle(grid8):
    start = time.perf_counter()
    reps = [lab.verify_oracle(ctx) for ctx in grid8]
    bad = failures(reps)
    record(2, not bad, f"{len(grid8)} contexts, every x = a0/n, mod v^8, failures={bad[:3]}",
           time.perf_counter() - start, 60)


def test_criterion_3_reflection():
    start = time.perf_counter()
    ctxs = grid_contexts(12)
    reps = [lab.verify_reflection(ctx, x) for ctx in ctxs for x in nonzero_x(ctx)]
    bad = failures(reps)
    has_l2 = any(ctx.l == 2 for ctx in ctxs)
    record(3, not bad and has_l2,
           f"{len(reps)} (context, x) pairs, mod v^12, l=2 present: {has_l2}, failures={bad[:3]}",
           time.perf_counter() - start, 120)


def test_criterion_4_gkt(grid8):
    start = time.perf_counter()
    reps = []
    ls = set()
    for ctx in grid8:
        q, dl = ctx.q, ctx.dl
        ls.add(ctx.l)
        x = AFrac(Poly.const(q, 1), ctx.n)
        reps += [lab.verify_gkt_first(ctx, x, s) for s in range(dl)]
        ones = lab.ones_digits(q, dl)
        single = q_digits(q, q ** (dl - 1), dl)
        reps += [lab.verify_gkt_geo(ctx, x, ones), lab.verify_gkt_geo(ctx, x, single)]
        reps += [lab.verify_gkt_ari(ctx, single), lab.verify_gkt_two(ctx, x, single)]
    bad = failures(reps)
    record(4, not bad and {1, 2} <= ls, f"{len(reps)} reports, l values {sorted(ls)}, failures={bad[:3]}",
           time.perf_counter() - start, 300)


def test_criterion_5_hasse_davenport():
    start = time.perf_counter()
    reps = []
    for q, v, n, g in ((3, "01", "21", "11"), (3, "01", "11", "21")):
        ctx = make_context(q, P(q, v), P(q, n), 8)
        x = AFrac(Poly.const(q, 1), ctx.n)
        big = lab.hd_context(ctx, P(q, g))
        reps.append(lab.verify_hd_geo(ctx, P(q, g), x))
        reps.append(lab.verify_hd_two(ctx, P(q, g), x, q_digits(q, 1, big.dl)))
    ctx = make_context(3, P(3, "01"), P(3, "101"), 8)
    reps.append(lab.verify_hd_ymult(ctx, AFrac(P(3, "1"), ctx.n), q_digits(3, 2, 4), 2))
    reps.append(lab.verify_hd_ymult(ctx, AFrac(P(3, "11"), ctx.n), q_digits(3, 10, 4), 2))
    for q, v, n, n2 in ((3, "01", "21", "201"), (2, "01", "11", "101")):
        ctx = make_context(q, P(q, v), P(q, n), 8)
        reps.append(lab.verify_hd_lift(ctx, P(q, n2), AFrac(Poly.const(q, 1), ctx.n), lab.ones_digits(q, ctx.dl)))
    counts = {}
    for r in reps:
        counts[r.theorem_id] = counts.get(r.theorem_id, 0) + 1
    bad = failures(reps)
    enough = all(counts.get(k, 0) >= 2 for k in ("hd-geo", "hd-two", "hd-y-mult", "hd-lift"))
    record(5, not bad and enough, f"choices per variant {counts}, mod v^8, failures={bad[:3]}",
           time.perf_counter() - start)


def test_criterion_6_stickelberger(grid8):
    start = time.perf_counter()
    bad, single_prime, checked = [], [], 0
    for ctx in grid8:
        for x in nonzero_x(ctx):
            if gcd(x.a0, ctx.n).deg:
                continue
            rep = lab.verify_stickelberger(ctx, x)
            checked += 1
            if not rep.ok:
                bad.append((rep.params, rep.detail))
            if ctx.n.deg == 1:
                single_prime.append(sum(rep.detail.get("monomial_exponents", [])) == 1)
    ok = not bad and single_prime and all(single_prime)
    record(6, bool(ok), f"{checked} (context, x) pairs, exponent vectors and sum = l, "
           f"deg n = 1 single prime in {sum(single_prime)}/{len(single_prime)}, failures={bad[:2]}",
           time.perf_counter() - start)


PAIRING_CONTEXTS = [(3, "01", "21"), (3, "01", "101"), (2, "01", "11"), (2, "111", "01")]


def test_criterion_7_pairings_and_abp():
    start = time.perf_counter()
    reps = []
    for q, v, n in PAIRING_CONTEXTS:
        ctx = make_context(q, P(q, v), P(q, n), 8)
        reps.append(lab.verify_pairings(ctx))
        reps.append(lab.verify_abp(ctx, 5))
    bad = failures(reps)
    record(7, not bad, f"{len(PAIRING_CONTEXTS)} contexts, four pairing statements, ABP N = 0..5, "
           f"failures={bad[:3]}", time.perf_counter() - start)


def test_criterion_8_infinity(grid8):
    start = time.perf_counter()
    reps = [lab.verify_infinity(ctx, x) for ctx in grid8 for x in nonzero_x(ctx)]
    bad = failures(reps)
    record(8, not bad, f"{len(reps)} (context, x) pairs, valuations and signs, failures={bad[:3]}",
           time.perf_counter() - start)


GAMMA_RINGS = [(3, "01"), (3, "101"), (2, "01"), (2, "111")]


def test_criterion_9_gamma():
    start = time.perf_counter()
    reps, branch_notes = [], []
    for q, v in GAMMA_RINGS:
        vv = P(q, v)
        eng = gamma_engine(unramified(q, vv, build_field(q, vv.deg), 8))
        t = Poly.t(q)
        x = RatFunc(t + 1)
        reps.append(lab.verify_gamma_levels(eng, 6))
        reps.append(lab.verify_gamma_reflection(eng, x, Fraction(1, q + 1)))
        reps.append(lab.verify_gamma_no_carry(eng, x, Fraction(1), Fraction(q)))
        if q % 2:
            for branch in (1, -1):
                rep = lab.verify_gamma_multiplication(eng, x, Fraction(1, 5), 2, branch)
                reps.append(rep)
                branch_notes.append(f"q={q} v={v} branch {branch:+d}: {rep.status}")
        for g in (t + 1, t * t + 1):
            if gcd(g, vv).deg == 0:
                reps.append(lab.verify_gamma_translation(eng, x, g, Fraction(2, 7)))
    # delta_x = 1 and m != 0: x0 = -t with h = 1 < d = 2
    eng = gamma_engine(unramified(3, P(3, "101"), build_field(3, 2), 8))
    reps.append(lab.verify_gamma_translation(eng, RatFunc(Poly.t(3).scale(2)), P(3, "11"), Fraction(1, 4)))
    bad = failures(reps)
    record(9, not bad, f"{len(reps)} reports mod v^8; multiplication n = 2: {'; '.join(branch_notes)}; "
           f"failures={[(b[0], b[2].get('branch')) for b in bad]}", time.perf_counter() - start)


def test_criterion_10_determinism(tmp_path):
    start = time.perf_counter()
    same = []
    for q, v, n in ((3, "01", "21"), (2, "01", "11")):
        paths = []
        for run in range(2):
            out = tmp_path / f"{q}-{v}-{n}-{run}.json"
            main(["verify", "all", "--q", str(q), "--v", v, "--n", n, "--out", str(out)])
            paths.append(out)
        same.append(filecmp.cmp(*paths, shallow=False))
    record(10, all(same), f"byte-identical full-suite JSON on {len(same)} contexts: {same}",
           time.perf_counter() - start)
