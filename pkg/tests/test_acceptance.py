"""Acceptance gate: one printed PASS/FAIL line per criterion."""
import time

import pytest

from fatsection.registry import entry_names, load_entry
from fatsection.suites import SUITES, run_suite

SEED = 0xC0FFEE
VERDICTS = {"holds", "violated", "inconclusive"}


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail=""):
        with capsys.disabled():
            print(f"\n[criterion {n:2d}] {'PASS' if ok else 'FAIL'} {detail}")
        assert ok, detail
    return emit


def test_criterion_01_restriction_and_lift(report):
    t0 = time.perf_counter()
    rs = [run_suite("restriction", e, SEED, 10000) for e in ("schur-horn-2", "schur-horn-3")]
    dt = time.perf_counter() - t0
    outside = [r.checks["projection_in_P"]["outside"] for r in rs]
    rejected = [r.checks["P_in_E"]["rejected"] for r in rs]
    ok = all(r.passed for r in rs) and dt < 30
    report(1, ok, f"10^4 samples per entry, outside={outside} rejected={rejected}, {dt:.1f}s")


def test_criterion_02_support_functions(report):
    r = run_suite("support-functions", "schur-horn-3", SEED, 1000)
    gap = r.checks["support_functions_agree"]["max_gap"]
    report(2, r.passed and gap <= 1e-6, f"10^3 directions, max gap {gap:.2e}")


def test_criterion_03_face_correspondence(report):
    t0 = time.perf_counter()
    rs = {e: run_suite("face-correspondence", e, SEED, 100) for e in ("schur-horn-2", "schur-horn-3")}
    dt = time.perf_counter() - t0
    counts = {e: r.checks["class_count"]["classes"] for e, r in rs.items()}
    collisions = [len(r.checks["injectivity"]["collisions"]) for r in rs.values()]
    ok = (counts == {"schur-horn-2": 2, "schur-horn-3": 4} and collisions == [0, 0]
          and all(r.passed for r in rs.values()) and dt < 60)
    report(3, ok, f"classes {counts}, collisions {collisions}, 100 directions each, {dt:.1f}s")


def test_criterion_04_exposedness(report):
    rs = [run_suite("exposedness", e, SEED, 10000) for e in ("schur-horn-2", "schur-horn-3")]
    n = sum(len(r.checks) for r in rs)
    report(4, all(r.passed for r in rs), f"{n} classes certified at tol 1e-7")


def test_criterion_05_face_chains(report):
    r = run_suite("face-chains", "schur-horn-3", SEED)
    lengths = sorted({c["length"] for c in r.checks.values()})
    report(5, r.passed and len(r.checks) == 6 and lengths == [3], f"6 hexagon vertices, chain lengths {lengths}")


def test_criterion_06_slices(report):
    rs = [run_suite("slices", e, SEED, 256) for e in ("schur-horn-2", "schur-horn-3")]
    worst = max(c.get("checks", {}).get("projection_max_deviation", 0.0)
                for r in rs for c in r.checks.values())
    levels = sum(1 for r in rs for k in r.checks if "_level_" in k)
    report(6, all(r.passed for r in rs), f"{levels} slices, max projection deviation {worst:.1e}")


def test_criterion_07_weyl_orbits(report):
    modes = {}
    ok = True
    for e in entry_names(include_disabled=False):
        r = run_suite("weyl-orbits", e, SEED, 256)
        ok &= r.passed
        modes[e] = r.checks["base_point_0"]["mode"]
    finite_exact = all(modes[e] == "exact" for e in ("dihedral-4",))
    report(7, ok and finite_exact, f"modes {modes}")


def test_criterion_08_trivial_section(report):
    r = run_suite("trivial-section", "dihedral-8", SEED)
    report(8, r.passed, ", ".join(f"{k}={v['status']}" for k, v in sorted(r.checks.items())))


def test_criterion_09_conjecture_probe(report):
    polar = [e for e in entry_names(include_disabled=False) if load_entry(e).expected.get("polar")]
    rs = [run_suite("conjecture", e, SEED) for e in polar]
    cand = run_suite("conjecture", "copolarity-candidate", SEED)
    verdicts = {c.get("verdict") for c in cand.checks.values()} | {
        c[d]["verdict"] for c in cand.checks.values() for d in ("forward", "reverse") if d in c}
    verdicts.discard(None)
    ok = all(r.passed for r in rs) and verdicts and verdicts <= VERDICTS
    report(9, ok, f"polar entries {polar} hold both ways; candidate verdicts {sorted(verdicts)}")


def test_criterion_10_determinism(report):
    same = []
    for name in sorted(SUITES):
        entry = "dihedral-8" if name == "trivial-section" else "schur-horn-2"
        a = run_suite(name, entry, SEED, 64).to_json()
        b = run_suite(name, entry, SEED, 64).to_json()
        same.append(a == b)
    report(10, all(same), f"{sum(same)}/{len(same)} suites byte-identical on rerun")
