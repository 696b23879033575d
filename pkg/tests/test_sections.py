import json

import numpy as np
import pytest

from fatsection.groups import LieGroupModel, close_generators
from fatsection.linalg import Subspace
from fatsection.registry import load_entry
from fatsection.sections import (
    DescentError,
    SectionCandidate,
    SectionError,
    check_axioms,
    descend,
    fat_weyl_group,
    weyl_orbit_equals_section_slice,
)


def so3():
    basis = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        x = np.zeros((3, 3))
        x[i, j], x[j, i] = -1.0, 1.0
        basis.append(x)
    return LieGroupModel(3, tuple(basis))


def test_rot2_axioms_pass_with_k0():
    r = check_axioms(load_entry("rot2").section, 64)
    assert r.passed and r.k == 0
    d = json.loads(r.to_json())
    assert d["status"] == "numerically validated"


def test_plane_in_r3_is_not_fat_for_so3():
    c = SectionCandidate(so3(), Subspace.from_rational([(1, 0, 0), (0, 1, 0)]))
    r = check_axioms(c, 64)
    assert r.axiom_a.passed and r.axiom_b.passed
    assert not r.axiom_c.passed and not r.passed
    assert r.axiom_c.witness is not None


def test_zero_section_misses_orbits():
    g = load_entry("rot2").group
    r = check_axioms(SectionCandidate(g, Subspace.zero(2)), 16)
    assert not r.axiom_a.passed


def test_line_is_polar_for_so3():
    r = check_axioms(SectionCandidate(so3(), Subspace.from_rational([(0, 0, 1)])), 64)
    assert r.passed and r.k == 0


def test_copolarity_candidate_measures_k1():
    e = load_entry("copolarity-candidate", allow_disabled=True)
    assert e.report.passed and e.report.k == 1


def test_descent_lands_in_section():
    c = load_entry("schur-horn-3").section
    rng = np.random.default_rng(5)
    x = rng.standard_normal(5)
    d = descend(c, x)
    assert c.residual(d.point) < 1e-9
    assert np.allclose(d.element @ x, d.point)
    assert np.isclose(np.linalg.norm(d.point), np.linalg.norm(x))


def test_descent_failure_is_reported():
    c = SectionCandidate(so3(), Subspace.from_rational([(0, 0, 1)]))
    rot_free = c.with_group(LieGroupModel(3, ()))
    with pytest.raises(DescentError):
        descend(rot_free, np.array([1.0, 0.0, 0.0]))


@pytest.mark.parametrize("name, order", [("rot2", 2), ("dihedral-4", 8), ("dihedral-8", 16),
                                         ("schur-horn-2", 2), ("schur-horn-3", 6), ("schur-horn-4", 24)])
def test_weyl_orders(name, order):
    e = load_entry(name)
    assert fat_weyl_group(e.section, e.report).order == order


def test_weyl_needs_a_passing_report():
    e = load_entry("rot2")
    with pytest.raises(SectionError):
        fat_weyl_group(e.section, None)


def test_copolarity_candidate_has_positive_dimensional_weyl_group():
    e = load_entry("copolarity-candidate", allow_disabled=True)
    w = fat_weyl_group(e.section, e.report)
    assert not w.finite and len(w.algebra) == 1


def test_weyl_orbit_of_hexagon_vertex_exact():
    e = load_entry("schur-horn-3")
    w = fat_weyl_group(e.section, e.report)
    assert len(w.orbit(e.base_points[0])) == 6
    d4 = load_entry("dihedral-4")
    res = weyl_orbit_equals_section_slice(d4.section, fat_weyl_group(d4.section, d4.report), d4.base_points[0])
    assert res["mode"] == "exact" and res["equal"] and res["slice_size"] == 4


def test_chart_isometry_enforced():
    g = close_generators([[["0", "-1"], ["1", "0"]]])
    with pytest.raises(SectionError):
        SectionCandidate(g, Subspace.full(2), chart=np.array([[2.0, 0.0], [0.0, 1.0]]))
