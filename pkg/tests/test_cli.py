import json

import pytest

from bsk.cli import EXIT_BUDGET, EXIT_FAIL, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def report(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_classify(capsys):
    code, rep = report(capsys, "classify", "z2z3", "A:1 B:1")
    assert code == EXIT_OK and rep["passed"]
    res = rep["result"]
    assert res["class"] == "hyperbolic" and res["translation_length"] == 2 == res["tree_amplitude"]
    code, rep = report(capsys, "classify", "z2z3", "B:1 A:1 B:2")
    assert rep["result"]["class"] == "elliptic" and rep["result"]["witness"] == "B:1"


def test_dinf_conventions(capsys):
    code, rep = report(capsys, "dinf", "ab")
    assert code == EXIT_OK
    assert rep["result"]["translation"] == -2 and rep["result"]["amplitude"] == 2
    code, rep = report(capsys, "dinf", "b", "--convention", "with-inversion")
    assert code == EXIT_OK
    assert rep["result"]["kind"] == "inversion" and rep["result"]["inverted_edge"] == [0, 1]


@pytest.mark.parametrize("argv, expect", [
    (("amplitude", "dinf", "ab", "--base", "3"), 2),
    (("amplitude", "z4z6", "A:1 B:1"), 2),
    (("amplitude", "star_s3", "021"), 0),
])
def test_amplitude_routes_reported(capsys, argv, expect):
    code, rep = report(capsys, *argv)
    assert code == EXIT_OK
    assert rep["result"]["formula"] == rep["result"]["direct"] == expect


def test_bs_tree_is_deterministic(capsys):
    _, first = run(capsys, "bs-tree", "z4z6", "--radius", "3")
    _, second = run(capsys, "bs-tree", "z4z6", "--radius", "3")
    assert first == second and json.loads(first)["result"]["vertices"] == 11
    code, dot = run(capsys, "bs-tree", "--radius", "1", "--dot")
    assert code == EXIT_OK
    assert dot.splitlines()[0] == 'graph "BS(z2z3)" {'
    assert '  "(1)A" -- "(A:1)B";' in dot.splitlines()


def test_quotient_and_orient(capsys):
    code, rep = report(capsys, "quotient", "star3")
    assert code == EXIT_OK
    res = rep["result"]
    assert res["geometric_edges"] == 1 and res["cycle_rank"] == 0
    assert res["fundamental_domain"] == ["*", "0"]
    code, rep = report(capsys, "orient", "chain3", "--start", "g0")
    assert code == EXIT_OK
    assert rep["result"]["walk"]["chain"] == ["Z1", "Z2", "Z4"]
    assert rep["result"]["positive"] == ["e01:g0->g1", "e12:g1->g2"]


def test_chain_end(capsys):
    code, rep = report(capsys, "chain-end", "prufer2", "--depth", "6")
    assert code == EXIT_OK
    res = rep["result"]
    assert res["common_fixed_level"] == 6
    assert res["elements"]["1/2"]["level"] == 1 and res["elements"]["1/2"]["kind"] == "neutral"


def test_budget_exhaustion_exit_code(capsys):
    code, rep = report(capsys, "amplitude", "z2z3", "A:1 B:1 A:1 B:1", "--budget", "1")
    assert code == EXIT_BUDGET and rep["error"] == "budget-exhausted" and rep["budget"] == 1


def test_usage_errors(capsys, tmp_path):
    code, rep = report(capsys, "classify", "nope", "A:1")
    assert code == EXIT_USAGE and rep["error"] == "SpecError"
    code, rep = report(capsys, "classify", "z2z3", "A:9")
    assert code == EXIT_USAGE
    bad = tmp_path / "bad.bsk"
    bad.write_text("cyclic 2\nnonsense here\n")
    code, rep = report(capsys, "dinf", "ab", "--spec", str(bad))
    assert code == EXIT_USAGE and "line 2" in rep["message"]
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == EXIT_USAGE


def test_out_file(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, out = run(capsys, "dinf", "ab", "--out", str(target))
    assert code == EXIT_OK and out == ""
    assert json.loads(target.read_text())["result"]["word"] == "ab"


def test_custom_spec_file(capsys, tmp_path):
    f = tmp_path / "g.bsk"
    f.write_text("cyclic 1\ncyclic 3\namalgam T: Z3 *_Z1 Z3\nhom u: Z1 -> Z3\n  0 |-> 0\n"
                 "hom v: Z1 -> Z3\n  0 |-> 0\n")
    code, rep = report(capsys, "classify", "T", "A:1 B:2", "--spec", str(f))
    assert code == EXIT_OK and rep["result"]["translation_length"] == 2


def test_verify_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("BSK_SEED", "5")
    code, rep = report(capsys, "verify", "--suite", "orient")
    assert code == EXIT_OK and rep["seed"] == 5
    code, rep = report(capsys, "verify", "--suite", "orient", "--seed", "9")
    assert rep["seed"] == 9


def test_failure_exit_code(capsys, monkeypatch):
    from bsk import verify

    def broken(env, seed):
        r = verify.SuiteResult("normal-form")
        r.check(False, "forced")
        return r

    monkeypatch.setitem(verify.SUITES, "normal-form", broken)
    code, rep = report(capsys, "verify", "--suite", "normal-form")
    assert code == EXIT_FAIL and not rep["passed"]
