import math

import pytest

from channel_bounds.verify import SUITES, Check, SuiteReport, run_suite


def test_check_margin():
    c = Check("x", 0.5, 1.0)
    assert c.passed and c.margin == 0.5
    assert not Check("y", 2.0, 1.0).passed


def test_report_lines():
    rep = SuiteReport("demo")
    rep.add("a", 0.1, 1.0)
    rep.add("b", 2.0, 1.0)
    assert not rep.passed and [c.name for c in rep.failures()] == ["b"]
    assert rep.lines()[1].startswith("FAIL demo:b")
    assert SuiteReport("empty").min_margin() == math.inf


@pytest.mark.parametrize("name", SUITES)
def test_small_suites_pass(name):
    rep = run_suite(name, samples=2, seed=5)
    assert rep.passed, rep.lines()
    assert rep.checks


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("nothing")
