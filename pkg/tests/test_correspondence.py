from fractions import Fraction as F

import numpy as np
import pytest

from fatsection.correspondence import (
    conjecture_probe,
    exposed_lift,
    exposedness_transfer,
    face_orbit_classes,
    lift_face,
    membership_E,
    push_face,
    records_to_json,
    restrict,
    round_trip,
    sample_E,
    verify_exposed_lift,
    verify_orbit_bijection,
)
from fatsection.registry import load_entry
from fatsection.sections import fat_weyl_group


def vid(b, v):
    return b.P.vertices.index(tuple(F(x) for x in v))


def test_hexagon_restriction(sh3):
    assert sorted(sh3.P.vertices) == sorted(
        tuple(F(x) for x in p) for p in [(1, 0, -1), (1, -1, 0), (0, 1, -1), (0, -1, 1), (-1, 1, 0), (-1, 0, 1)])
    assert sh3.P.dim == 2


def test_restrict_from_an_unreduced_generator(sh3):
    # a conjugate of diag(1, 0, -1) descends back onto the hexagon
    e = load_entry("schur-horn-3")
    w = fat_weyl_group(e.section, e.report)
    g = sh3.group.random_element(np.random.default_rng(2))
    p = restrict(e.section, w, [g @ sh3.generators_in_V[0]])
    assert sorted(p.vertices) == sorted(sh3.P.vertices)


def test_disk_membership(rot2):
    assert membership_E(rot2, [1.2, -1.5])
    assert not membership_E(rot2, [1.5, 1.5])
    assert membership_E(rot2, [0.0, 2.0])


def test_sampled_points_lie_in_E(sh3):
    z = sample_E(sh3, 200, seed=4)
    assert all(sh3.P.contains(sh3.chart(x), 1e-7) for x in z)


def test_class_counts(rot2, sh2, sh3, d8):
    assert [len(face_orbit_classes(b)) for b in (rot2, sh2, sh3, d8)] == [2, 2, 4, 3]


def test_hexagon_edge_classes_are_told_apart(sh3):
    recs = face_orbit_classes(sh3)
    edges = [r for r in recs if r.q.dim == 1]
    assert [len(r.orbit) for r in edges] == [3, 3]
    # identical metric data, different canonical min-norm points
    assert edges[0].invariants["vertex_norms_sq"] == edges[1].invariants["vertex_norms_sq"] == ["2", "2"]
    forms = {tuple(r.invariants["min_norm_point_class"]) for r in edges}
    assert forms == {("1/2", "1/2", "-1"), ("1", "-1/2", "-1/2")}


def test_lift_dimensions(sh2, sh3):
    # vertex -> point, edge -> 2-disk of 2x2 blocks, hexagon -> whole 5-dim orbitope
    assert [lift_face(sh2, r.q).dim_estimate() for r in face_orbit_classes(sh2)] == [0, 2]
    assert [lift_face(sh3, r.q).dim_estimate() for r in face_orbit_classes(sh3)] == [0, 2, 2, 5]


def test_endpoint_lift_is_the_point(sh2):
    lf = lift_face(sh2, (vid(sh2, (1, -1)),))
    assert np.allclose(lf.samples, sh2.lift_point((1, -1)))
    assert lf.validate(n_segments=20)["passed"]


def test_edge_lift_validates(sh3):
    rec = [r for r in face_orbit_classes(sh3) if r.q.dim == 1][0]
    v = lift_face(sh3, rec.q).validate(n_segments=60)
    assert v["passed"] and v["segments_tested"] > 0


def test_exposed_lift_and_push(sh3):
    lf = exposed_lift(sh3, (1, 0, 0))
    assert lf.q.dim == 1
    assert verify_exposed_lift(lf, 300)["passed"]
    assert push_face(sh3, lf).key == lf.q.key
    assert round_trip(sh3, lf, n=100)["passed"]


def test_push_requires_exposing_vector(sh3):
    top = lift_face(sh3, sh3.lattice.face(sh3.lattice.top()).vertex_ids)
    with pytest.raises(ValueError):
        push_face(sh3, top)


def test_bijection_and_exposedness(sh3):
    v = verify_orbit_bijection(sh3, n_directions=30, n_conjugates=3)
    assert v["passed"]
    assert v["surjectivity"]["classes_reached"] == [0, 1, 2]
    assert exposedness_transfer(sh3, 2000)["passed"]


def test_probe_holds_on_polar_entry(sh3):
    for r in face_orbit_classes(sh3):
        p = conjecture_probe(sh3, r.q, n=8)
        assert p["forward"]["verdict"] == "holds"
        assert p["reverse"]["verdict"] == "holds"


def test_records_serialize(sh2):
    text = records_to_json(face_orbit_classes(sh2))
    assert '"class_id": 1' in text and '"orbit_size": 2' in text
