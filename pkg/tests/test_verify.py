import pytest

from group_type_planar.config import GroupError, SuiteName
from group_type_planar.verify import SuiteReport, VerificationRunner


def assert_passed(report):
    assert report.error is None, report.error
    assert report.checks, f"suite {report.suite} recorded nothing"
    assert report.passed, [c.to_dict() for c in report.failures()]


@pytest.mark.parametrize("name", ["A", "B", "C"])
@pytest.mark.parametrize("suite", ["tl", "assoc", "iso", "gram", "intermediate"])
def test_algebraic_suites(make_algebra, name, suite):
    runner = VerificationRunner(make_algebra(name, max_level=2))
    (report,) = runner.run(suite)
    assert report.suite == suite
    assert_passed(report)


@pytest.mark.parametrize("name", ["A", "B", "D"])
def test_statesum_suite(make_algebra, name):
    (report,) = VerificationRunner(make_algebra(name, max_level=2)).run(SuiteName.STATESUM)
    assert_passed(report)
    assert report.checks["multiplication"].cases > 1


@pytest.mark.parametrize("name", ["A", "D"])
def test_composition_suite(make_algebra, name):
    (report,) = VerificationRunner(make_algebra(name, max_level=1)).run("compose")
    assert_passed(report)
    assert report.checks["composition"].cases > 10


@pytest.mark.parametrize("name", ["A", "B"])
def test_biprojection_suite(make_algebra, name):
    (report,) = VerificationRunner(make_algebra(name)).run("biproj")
    assert_passed(report)
    assert report.checks["centralizer_dimension"].passed


def test_calibration_suite(make_algebra):
    (report,) = VerificationRunner(make_algebra("D")).run("calibration")
    assert_passed(report)
    assert "unique" in report.checks

    (report,) = VerificationRunner(make_algebra("A")).run("calibration")
    assert_passed(report)
    assert "unique" not in report.checks


def test_all_is_reproducible(make_algebra):
    first = [r.to_dict() for r in VerificationRunner(make_algebra("B", max_level=1)).run("all")]
    second = [r.to_dict() for r in VerificationRunner(make_algebra("B", max_level=1)).run("all")]
    assert [r["suite"] for r in first] == [s.value for s in SuiteName if s is not SuiteName.ALL]
    assert first == second
    assert all(r["passed"] for r in first)


def test_suite_errors_are_reported(make_algebra, monkeypatch):
    runner = VerificationRunner(make_algebra("A", max_level=1))

    def broken(report):
        raise GroupError("free-product cap reached")

    monkeypatch.setattr(runner, "_suite_gram", broken)
    (report,) = runner.run("gram")
    assert not report.passed
    assert "cap" in report.error


def test_report_keeps_first_counterexample():
    report = SuiteReport("tl", "A")
    calls = []

    def detail():
        calls.append(1)
        return "first"

    report.record("idempotent", True, detail)
    report.record("idempotent", False, detail)
    report.record("idempotent", False, "second")
    check = report.checks["idempotent"]
    assert check.cases == 3
    assert check.counterexample == "first"
    assert calls == [1]
    assert report.failures() == [check]
    assert report.to_dict()["passed"] is False


@pytest.mark.parametrize("name", ["E", "F"])
@pytest.mark.parametrize("suite, level", [("tl", 2), ("assoc", 2), ("iso", 2), ("statesum", 1), ("gram", 2)])
def test_nonabelian_suites(make_algebra, name, suite, level):
    (report,) = VerificationRunner(make_algebra(name, max_level=level)).run(suite)
    assert_passed(report)
