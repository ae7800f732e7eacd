import pytest

from gstar.report import FAIL, PASS, SKIPPED, Check, Report
from gstar.serialize import dumps
from gstar.suite import SUITES, CheckReport, SuiteConfig, run_suite


def test_config_validation():
    with pytest.raises(ValueError):
        SuiteConfig(suites=("nonsense",))
    with pytest.raises(ValueError):
        SuiteConfig(q_max=1)
    with pytest.raises(ValueError):
        SuiteConfig(budget=0)


def test_restricted_run_marks_other_suites_skipped():
    report = run_suite(SuiteConfig(suites=("adjunction",), random_count=3))
    assert report.ok and report.exit_code == 0
    statuses = report.to_dict()["suites"]
    assert statuses["adjunction"] == PASS
    assert all(statuses[s] == SKIPPED for s in SUITES if s != "adjunction")
    assert report.seeds == {"adjunction": [0, 1, 2]}


def test_checks_are_sorted_and_timing_is_opt_in():
    report = run_suite(SuiteConfig(suites=("emptiness", "hom-counts"), random_count=0))
    names = [c["name"] for c in report.to_dict()["checks"]]
    assert names == sorted(names)
    assert "timing" not in report.to_dict()
    assert set(report.to_dict(timing=True)["timing"]) == set(SUITES)


def test_identical_configs_give_identical_bytes():
    cfg = SuiteConfig(suites=("triangles", "unit-iso"), random_count=4, seed=9)
    assert dumps(run_suite(cfg).to_dict()) == dumps(run_suite(cfg).to_dict())


def test_different_seeds_are_logged():
    a = run_suite(SuiteConfig(suites=("unit-iso",), random_count=2, seed=0))
    b = run_suite(SuiteConfig(suites=("unit-iso",), random_count=2, seed=1))
    assert a.seeds != b.seeds


def test_stability_suite_with_margin():
    report = run_suite(SuiteConfig(suites=("stability",), N=1, stability_margin=1))
    assert report.suite_status("stability") == PASS
    skipped = run_suite(SuiteConfig(suites=("stability",)))
    assert skipped.suite_status("stability") == SKIPPED


def test_exit_code_is_a_function_of_the_checks():
    report = CheckReport(SuiteConfig(), [Check("emptiness.x", PASS), Check("density.y", SKIPPED)])
    assert report.exit_code == 0
    report.checks.append(Check("density.z", FAIL, witness={"seed": 1}))
    assert report.exit_code == 1
    assert report.suite_status("density") == FAIL
    assert report.to_dict()["status"] == FAIL


def test_report_witnesses_only_on_failure():
    rep = Report("r")
    rep.add("good", True, witness={"x": 1})
    rep.add("bad", False, witness={"x": 2})
    assert rep.checks[0].witness is None
    assert rep.failures[0].to_dict()["witness"] == {"x": 2}
    assert "bad" in str(rep)
