import random

import pytest

from qpsurf import checks
from qpsurf.brackets import bracket2
from qpsurf.checks import CheckOptions, SUITES, _describe, _require, run_instance, run_suite


def symmetric(rng, opts):
    # deliberately wrong: the 2-bracket is skew, not symmetric
    X = opts.surface(rng)
    a, b = opts.loop(X, rng), opts.loop(X, rng)
    _require(bracket2(X, a, b) == bracket2(X, b, a), "[a,b] != [b,a]", *_describe(X, a=a, b=b))


def crashes(rng, opts):
    raise ZeroDivisionError("boom")


@pytest.fixture
def extra_suites(monkeypatch):
    monkeypatch.setitem(SUITES, "symmetric", symmetric)
    monkeypatch.setitem(SUITES, "crashes", crashes)


def test_failing_suite_reports_first_counterexample(extra_suites):
    report = run_suite("symmetric", 60, 0)
    assert not report.passed
    first = report.failures[0]
    assert report.counterexample.startswith(f"instance {first}: [a,b] != [b,a]")
    assert "surface gates=" in report.counterexample and "loop a" in report.counterexample
    assert "FAIL" in report.render()
    # the named instance replays on its own
    assert run_instance("symmetric", 0, first, CheckOptions()) is not None


def test_crash_counts_as_failure(extra_suites):
    report = run_suite("crashes", 3, 0)
    assert report.failures == [0, 1, 2]
    assert "ZeroDivisionError" in report.counterexample


@pytest.mark.parametrize("suite", sorted(SUITES))
def test_every_suite_passes_a_few_instances(suite):
    assert run_suite(suite, 3, 11).passed


def test_parallel_matches_serial(extra_suites):
    serial = run_suite("symmetric", 40, 5)
    parallel = run_suite("symmetric", 40, 5, parallel=True)
    assert serial.as_dict() == parallel.as_dict()


def test_fixed_surface_options():
    opts = CheckOptions(gates=3, ygens=0)
    X = opts.surface(random.Random(1))
    assert (X.gates, X.ygens) == (3, 0)
    assert run_suite("jacobi", 5, 2, opts).passed


def test_unknown_suite():
    with pytest.raises(KeyError):
        checks.run_suite("nope", 1, 0)
