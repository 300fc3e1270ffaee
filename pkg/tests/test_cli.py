import io
import json

import pytest

from hurwitz import cli


def run(*argv):
    out = io.StringIO()
    real = cli.Output.__init__

    def init(self, fmt, stream=None):
        real(self, fmt, out)

    cli.Output.__init__ = init
    try:
        code = cli.main(list(argv))
    finally:
        cli.Output.__init__ = real
    return code, out.getvalue()


def test_expand_rational():
    assert run("expand", "(37+6i)/(129+24i)") == (0, "[3,2,3i,-2,3i] (terminated)\n")
    assert run("expand", "0") == (0, "[] (terminated)\n")


def test_expand_oracle():
    code, text = run("expand", "--oracle", "sqrt10-example", "-n", "9")
    assert code == 0 and text == "[4,-2,1+3i,-2,1+3i,-2,1+3i,-2,1+3i]\n"


def test_expand_jsonl():
    code, text = run("--format", "jsonl", "expand", "(7+3i)/2")
    rec = json.loads(text)
    # 7/2 + 3i/2 rounds up to 4+2i; the remainder -1/2 - i/2 inverts to -1+i
    assert rec == {"quotients": "[-1+i]", "terminated": True, "certified_prefix_len": 1, "integer_part": "4+2i"}


def test_expand_precision_exhaustion():
    # 1/2 written with mixed radicands has no exact form, so its cell is never certified
    code, text = run("expand", "--oracle", "sqrt(2)*sqrt(3)/sqrt(6)/2", "-n", "5", "--max-bits", "128")
    assert code == cli.EXIT_PRECISION and text == "[] (certified 0 of 5)\n"


def test_eval_and_qpair():
    # (12-2i)/37 in canonical form
    assert run("eval", "[3,-2i]")[1] == "(2)/(6+i)\n"
    code, text = run("--format", "jsonl", "qpair", "[-2i]")
    rec = json.loads(text)
    assert (rec["p"], rec["q"], rec["det"]) == ("1", "-2i", "-1")


def test_dd():
    code, text = run("--format", "jsonl", "dd", "sqrt10-example", "(37+6i)/(129+24i)")
    rec = json.loads(text)
    assert code == 0 and rec["dd"] == 4 and rec["psi_check"] == "hit"
    assert 2.8e-5 < float(rec["dist_lo"]) <= float(rec["dist_hi"]) < 3.0e-5
    assert float(rec["dist_hi"]) < float(rec["inv_q_sq"])


def test_dd_rejects_equal_point():
    code, _ = run("dd", "(1+2i)/5", "(1+2i)/5")
    assert code == cli.EXIT_USAGE


def test_prototype_and_classify():
    code, text = run("prototype", "[-2i]")
    assert text.splitlines()[0] == "D \\ closedB(i,1)"
    assert "kind=circle" in text
    assert run("classify", "[2i,-2+i,2i]")[1] == "irregular: D & {|z + i| = 1}\n"
    assert run("classify", "[3]")[1] == "full: D\n"


def test_area():
    code, text = run("--format", "jsonl", "area", "[-2i]", "--prototype")
    rec = json.loads(text)
    assert rec["closed_form"] == "3/2 - sqrt(3)/4 - pi/6"
    code, text = run("--format", "jsonl", "area", "[-2i]")
    assert code == cli.EXIT_USAGE
    code, text = run("--format", "jsonl", "area", "[-2i]", "--method", "montecarlo", "--samples", "1000")
    assert json.loads(text)["method"] == "montecarlo"


def test_gamma_and_annulus():
    code, text = run("--format", "jsonl", "gamma", "--M", "3", "--Q", "3/2")
    assert json.loads(text)["count"] == 18
    code, text = run("--format", "jsonl", "annulus", "1/16")
    assert json.loads(text)["count"] == 1191
    code, text = run("--format", "jsonl", "gamma", "--M", "3", "--measure", "1", "--samples", "1000")
    assert json.loads(text)["samples"] == 1000


def test_search():
    code, text = run("search", "sqrt10-example", "--limit", "20000")
    assert code == 0 and "(37+6i)/(129+24i)" in text
    code, text = run("search", "sqrt10-example", "--c", "1/1000000000", "--lam", "4", "--limit", "50")
    assert code == 0 and "(no approximants)" in text
    code, text = run("--format", "jsonl", "search", "sqrt10-example", "--c", "1/1000000000", "--lam", "4", "--limit", "50")
    assert text == ""


def test_verify_suite_and_flags():
    a = run("--seed", "3", "--format", "jsonl", "verify", "vk")
    b = run("verify", "vk", "--seed", "3", "--format", "jsonl")
    assert a == b and a[0] == 0
    last = json.loads(a[1].splitlines()[-1])
    assert last["summary"]["seed"] == 3 and last["summary"]["ok"]
    assert "runtime_ms" not in a[1]
    code, text = run("--format", "jsonl", "--timings", "verify", "annulus")
    assert "runtime_ms" in text


@pytest.mark.parametrize("argv", [(), ("bogus",), ("expand",), ("eval", "[1]"), ("verify", "nope")])
def test_usage_errors(argv, capsys):
    try:
        code = cli.main(list(argv))
    except SystemExit as exc:
        code = exc.code
    assert code == cli.EXIT_USAGE
