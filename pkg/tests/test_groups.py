import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fatsection.groups import (
    FiniteMatrixGroup,
    GroupError,
    LieGroupModel,
    close_generators,
    group_from_dict,
    group_to_dict,
    is_regular,
    load_group,
    max_orbit_dim,
    normal_space,
    orbit,
    pointwise_stabilizer,
    restrict_to_subspace,
    sample_orbit,
    stabilizer,
    tangent_space_of_orbit,
)
from fatsection.linalg import Subspace

ROT = [["0", "-1"], ["1", "0"]]
REF = [["1", "0"], ["0", "-1"]]
SO2 = LieGroupModel(2, (np.array([[0.0, -1.0], [1.0, 0.0]]),))


def so3_on_r3():
    basis = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        x = np.zeros((3, 3))
        x[i, j], x[j, i] = -1.0, 1.0
        basis.append(x)
    return LieGroupModel(3, tuple(basis))


def test_dihedral_closure_exact_and_sorted():
    g = close_generators([ROT, REF])
    assert g.exact and g.order == 8
    keys = [tuple(m.ravel()) for m in g.elements]
    assert keys == sorted(keys)


def test_float_closure_octagon():
    c, s = math.cos(math.pi / 4), math.sin(math.pi / 4)
    g = close_generators([[[c, -s], [s, c]], [[1.0, 0.0], [0.0, -1.0]]])
    assert not g.exact and g.order == 16


def test_closure_cap():
    c, s = math.cos(1.0), math.sin(1.0)
    with pytest.raises(GroupError):
        close_generators([[[c, -s], [s, c]]], cap=50)


def test_finite_orbit_of_square_vertex():
    g = close_generators([ROT, REF])
    pts = orbit(g, (1, 0))
    assert len(pts) == 4


def test_lie_orbit_samples_stay_on_circle():
    pts = sample_orbit(SO2, np.array([2.0, 0.0]), 50, seed=3)
    assert np.allclose(np.linalg.norm(pts, axis=1), 2.0)


def test_tangent_and_normal_spaces_so2():
    t = tangent_space_of_orbit(SO2, [2.0, 0.0])
    n = normal_space(SO2, [2.0, 0.0])
    assert t.dim == 1 and t.contains([0.0, 1.0])
    assert n.dim == 1 and n.contains([1.0, 0.0])


def test_regularity():
    g = so3_on_r3()
    assert max_orbit_dim(g) == 2
    assert is_regular(g, [0.0, 0.0, 1.0])
    assert not is_regular(g, [0.0, 0.0, 0.0])


def test_stabilizers():
    g = so3_on_r3()
    assert stabilizer(g, [0.0, 0.0, 1.0]).algebra_dim == 1
    assert pointwise_stabilizer(g, Subspace.full(3)).algebra_dim == 0
    d4 = close_generators([ROT, REF])
    assert stabilizer(d4, (1, 0)).order == 2
    assert stabilizer(d4, (1, 1)).order == 2
    assert stabilizer(d4, (1, 2)).order == 1


def test_restrict_to_invariant_plane():
    g = so3_on_r3()
    h = restrict_to_subspace(stabilizer(g, [0.0, 0.0, 1.0]), Subspace.from_rational([(1, 0, 0), (0, 1, 0)]))
    assert h.ambient_dim == 2 and h.algebra_dim == 1
    with pytest.raises(GroupError):
        restrict_to_subspace(g, Subspace.from_rational([(1, 0, 0)]))


def test_validation_errors():
    with pytest.raises(GroupError):
        LieGroupModel(2, (np.eye(2),))
    with pytest.raises(GroupError):
        LieGroupModel(2, (SO2.algebra_basis[0], 2 * SO2.algebra_basis[0]))
    with pytest.raises(GroupError):
        group_from_dict({"dim": 2, "kind": "finite", "generators": [[["1", "0"]]]})
    with pytest.raises(GroupError):
        group_from_dict({"dim": 2, "kind": "weird"})


def test_json_roundtrip(tmp_path):
    g = close_generators([ROT, REF])
    path = tmp_path / "g.json"
    path.write_text(json.dumps(group_to_dict(g)))
    h = load_group(path)
    assert isinstance(h, FiniteMatrixGroup) and h.order == 8
    l2 = group_from_dict(group_to_dict(SO2))
    assert np.allclose(l2.algebra_basis[0], SO2.algebra_basis[0])


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-np.pi, np.pi), min_size=3, max_size=3))
def test_exponentials_are_rotations(t):
    m = so3_on_r3().element(t)
    assert np.allclose(m @ m.T, np.eye(3), atol=1e-12)
    assert np.isclose(np.linalg.det(m), 1.0)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=3, max_value=12))
def test_dihedral_orders(m):
    c, s = math.cos(2 * math.pi / m), math.sin(2 * math.pi / m)
    g = close_generators([[[c, -s], [s, c]], [[1.0, 0.0], [0.0, -1.0]]])
    assert g.order == 2 * m
