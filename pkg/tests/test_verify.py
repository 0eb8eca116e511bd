import json

import pytest

from bsk.verify import SCHEMA, SUITES, SuiteResult, run_suites

FAST = ["normal-form", "translation-length", "stabilizer", "quotient", "chain", "dinf", "orient"]


@pytest.mark.parametrize("name", FAST)
def test_suite_passes(env, name):
    res = SUITES[name](env, 0)
    assert res.passed, res.failures
    assert res.cases > 0


def test_report_shape_and_determinism(env):
    a = run_suites(["orient", "dinf"], 3, env)
    b = run_suites(["dinf", "orient"], 3, env)
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert set(a) == {"schema", "command", "seed", "suites", "passed"}
    assert a["schema"] == SCHEMA and a["seed"] == 3 and a["passed"]
    assert list(a["suites"]) == ["dinf", "orient"]


def test_seed_changes_only_sampled_cases(env):
    r0 = SUITES["chain"](env, 0).to_dict()
    r1 = SUITES["chain"](env, 1).to_dict()
    assert r0["stats"] == r1["stats"] and r0["passed"] and r1["passed"]


def test_failures_are_capped():
    res = SuiteResult("x")
    for i in range(100):
        res.check(False, lambda i=i: f"case {i}")
    assert res.failed == 100 and not res.passed
    assert 0 < len(res.failures) < 100
    assert res.to_dict()["failures"][0] == "case 0"
