import json
import re

import pytest

from conftest import P, context
from ffgauss import cli, lab
from ffgauss.cli import main
from ffgauss.poly import AFrac, Poly, q_digits
from ffgauss.series import Series

DIGEST = re.compile(r"^(vadic|inf):q=\d+:.*\|val=-?\d+\|prec=\d+\|[0-9,]*$")
SCHEMA = {"theorem_id", "params", "status", "achieved_precision", "lhs", "rhs", "runtime_ms"}


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- reports ---------------------------------------------------------------------


def test_report_schema():
    ctx = context(3, "01", "21")
    rep = lab.verify_reflection(ctx, AFrac(Poly.const(3, 1), ctx.n))
    doc = rep.to_json()
    assert SCHEMA <= set(doc)
    assert doc["status"] == "pass"
    assert {"q", "v", "n", "prec"} <= set(doc["params"])
    assert DIGEST.match(doc["lhs"]) and DIGEST.match(doc["rhs"])
    assert doc["runtime_ms"] == 0
    json.dumps(doc)


def test_reports_are_replayable():
    ctx = context(3, "01", "21")
    x = AFrac(Poly.const(3, 1), ctx.n)
    y = lab.ones_digits(3, ctx.dl)
    for check in (lambda: lab.verify_gkt_geo(ctx, x, y), lambda: lab.verify_stickelberger(ctx, x),
                  lambda: lab.verify_infinity(ctx, x)):
        assert check().to_json() == check().to_json()


def test_timing_is_opt_in():
    ctx = context(3, "01", "21")
    lab.TIMING["enabled"] = True
    try:
        rep = lab.verify_oracle(ctx)
    finally:
        lab.TIMING["enabled"] = False
    assert rep.runtime_ms >= 0
    assert lab.verify_oracle(ctx).runtime_ms == 0


def test_precision_starvation_retries_at_double_precision():
    ctx = context(2, "01", "11")
    rep = lab.verify_hd_geo(ctx, P(2, "111"), AFrac(Poly.const(2, 1), ctx.n), q_digits(2, 7, 3))
    assert rep.params.get("retried") is True
    assert rep.params["prec"] == 2 * ctx.prec
    assert rep.status == "pass"


def test_outcome_distinguishes_fail_from_starvation():
    W = context(3, "01", "21").W
    a = Series(W, 0, [1, 0, 1, 2], 4)
    b = Series(W, 0, [1, 0, 2, 2], 4)
    c = Series(W, 0, [1, 0], 2)
    out = lab.Outcome()
    out.series(a, b, 4)
    assert out.status == "fail" and out.achieved == 2
    out = lab.Outcome()
    out.series(a, c, 4)
    assert out.status == "inconclusive-precision"
    out = lab.Outcome()
    out.series(a, a, 4)
    assert out.status == "pass" and out.achieved == 4


def test_fail_needs_a_known_digit_past_the_difference():
    W = context(3, "01", "21").W
    a = Series(W, 0, [1, 0, 1], 3)
    b = Series(W, 0, [1, 0, 2], 3)
    out = lab.Outcome()
    out.series(a, b, 4)
    # both sides known to index 3, the first difference is at index 2
    assert out.status == "fail"
    out = lab.Outcome()
    out.series(a, Series(W, 0, [1, 0], 2), 4)
    assert out.status != "fail"


# -- CLI --------------------------------------------------------------------------


def test_cli_gauss_json(capsys):
    code, out, _ = run_cli(capsys, "gauss", "--q", "3", "--v", "01", "--n", "21", "--x", "1/21")
    assert code == 0
    doc = json.loads(out)
    assert doc["value"]["uniformizer"] == "v=01"
    assert doc["value"]["ram_index"] == 1
    assert doc["value"]["prec"] == 8
    assert len(doc["value"]["coeffs"]) == 8


def test_cli_accepts_t_expressions(capsys):
    a = run_cli(capsys, "gauss", "--q", "3", "--v", "t", "--n", "t-1", "--x", "1/21")
    b = run_cli(capsys, "gauss", "--q", "3", "--v", "01", "--n", "21", "--x", "1/21")
    assert a == b


def test_cli_reflection_on_integral_x(capsys):
    code, out, _ = run_cli(capsys, "verify", "reflection", "--q", "3", "--v", "01", "--n", "21", "--x", "21/21")
    assert code == 0
    rep = json.loads(out)["reports"][0]
    assert rep["status"] == "pass"
    one = "|val=0|prec=8|1,0,0,0,0,0,0,0"
    assert rep["lhs"].endswith(one) and rep["rhs"].endswith(one)


@pytest.mark.parametrize("argv", [
    ["verify", "reflection", "--q", "3", "--v", "10", "--n", "21"],
    ["verify", "nonsense", "--q", "3", "--v", "01", "--n", "21"],
    ["gauss", "--q", "6", "--v", "01", "--n", "21", "--x", "1/21"],
    ["gauss", "--q", "3", "--v", "01", "--n", "01", "--x", "1/01"],
    ["gauss", "--q", "3", "--v", "01", "--n", "21", "--x", "1/21", "--prec", "2"],
    ["frobnicate"],
])
def test_cli_usage_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        raise SystemExit(main(argv))
    assert exc.value.code == 2


def test_cli_failure_exits_1(capsys, monkeypatch):
    def broken(ctx, a):
        out = lab.Outcome()
        out.exact(1, 2)
        return [lab.VerificationReport("broken", {}, out.status, 0, out.lhs, out.rhs)]

    monkeypatch.setitem(cli.CHECKS, "oracle", broken)
    code, out, _ = run_cli(capsys, "verify", "oracle", "--q", "3", "--v", "01", "--n", "21")
    assert code == 1
    assert json.loads(out)["all_pass"] is False


def test_cli_tsv_tables(capsys):
    code, out, _ = run_cli(capsys, "pairing-table", "--q", "3", "--v", "01", "--n", "101", "--format", "tsv")
    assert code == 0
    rows = [r.split("\t") for r in out.strip().split("\n")]
    k = len(rows) - 1
    assert rows[0] == ["i"] + [f"b{j}" for j in range(k)]
    assert [r[1:] for r in rows[1:]] == [["1" if i == j else "0" for j in range(k)] for i in range(k)]
    code, out, _ = run_cli(capsys, "gamma", "--q", "3", "--v", "01", "--x", "1", "--y", "1/4", "--format", "tsv")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "index\tcoeff" and len(lines) == 9


def test_cli_gamma_json(capsys):
    code, out, _ = run_cli(capsys, "gamma", "--q", "3", "--v", "01", "--kind", "ari", "--y", "1/2")
    assert code == 0
    value = json.loads(out)["value"]
    assert {"uniformizer", "ram_index", "coeffs", "prec"} <= set(value)


def test_cli_out_file(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = run_cli(capsys, "stickelberger", "--q", "3", "--v", "01", "--n", "21", "--x", "1/21",
                           "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["report"]["status"] == "pass"


def test_cli_verify_all_is_deterministic(capsys):
    argv = ["verify", "all", "--q", "3", "--v", "01", "--n", "21"]
    first = run_cli(capsys, *argv)
    second = run_cli(capsys, *argv)
    assert first[0] == 0
    assert first == second
