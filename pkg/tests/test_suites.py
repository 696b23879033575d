import pytest

from fatsection.suites import SUITES, SuiteResult, run_suite


def test_status_aggregation():
    r = SuiteResult("x", "rot2", 0, None)
    assert r.status == "indeterminate"
    r.add("a", True)
    assert r.status == "pass"
    r.add("b", None)
    assert r.status == "indeterminate"
    r.add("c", False)
    assert r.status == "fail"


def test_details_cannot_shadow_status():
    r = SuiteResult("x", "rot2", 0, None)
    r.add("a", False, status="no collisions")
    assert r.checks["a"]["status"] == "fail"
    assert r.checks["a"]["finding"] == "no collisions"


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nope", "rot2")


@pytest.mark.parametrize("name", sorted(SUITES))
def test_every_suite_runs_on_rot2(name):
    r = run_suite(name, "rot2", seed=3, samples=50)
    # rot2 uses a line as section, so the whole-space suite must refuse it
    expected = "fail" if name == "trivial-section" else "pass"
    assert r.status == expected, r.checks


def test_timings_stay_out_of_json():
    r = run_suite("face-chains", "rot2", seed=1)
    assert r.timings and "timings" not in r.to_json()
