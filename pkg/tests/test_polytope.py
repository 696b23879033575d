import itertools
from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings, strategies as st

from fatsection.polytope import (
    PolytopeError,
    affine_dim,
    face_lattice,
    group_action_on_faces,
    hull,
    is_face,
    maximal_chain,
    relative_interior_point,
    supporting_face,
    vertex_permutation,
)

SQUARE = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
HEXAGON = sorted(set(itertools.permutations((3, 2, 1))))
S3 = [tuple(tuple(int(i == p[j]) for i in range(3)) for j in range(3)) for p in itertools.permutations(range(3))]


def permutohedron(n):
    return sorted(set(itertools.permutations(range(n))))


def test_square_lattice():
    p = hull(SQUARE + [(0, 0), (1, 0)])
    assert len(p.vertices) == 4 and len(p.facets) == 4
    lat = face_lattice(p)
    assert lat.f_vector() == (4, 4, 1)
    assert len(lat.faces) == 10


def test_degenerate_hexagon_lives_in_a_plane():
    p = hull(HEXAGON)
    assert p.dim == 2 and p.ambient_dim == 3
    lat = face_lattice(p)
    assert len(lat.faces) == 14
    assert p.contains((2, 2, 2)) and not p.contains((2, 2, 3))


def test_hexagon_orbits_under_s3():
    lat = face_lattice(hull(HEXAGON))
    orbits = group_action_on_faces(lat, S3)
    assert sorted(len(o) for o in orbits) == [1, 3, 3, 6]


def test_supporting_face_and_is_face():
    p = hull(HEXAGON)
    lat = face_lattice(p)
    q = supporting_face(p, (1, 0, 0), lat)
    assert sorted(p.vertices[i] for i in q.vertex_ids) == [(3, 1, 2), (3, 2, 1)]
    assert q.dim == 1
    v = supporting_face(p, (3, 2, 1), lat)
    assert [p.vertices[i] for i in v.vertex_ids] == [(3, 2, 1)]
    i, j = p.vertices.index((3, 2, 1)), p.vertices.index((1, 2, 3))
    assert is_face(p, q.vertex_ids, lat)
    assert not is_face(p, (i, j), lat)


def test_float_direction_with_tolerance():
    p = hull(SQUARE)
    q = supporting_face(p, (1.0, 1e-12), tol=1e-9)
    assert q.dim == 1


def test_relint_point_and_chain():
    p = hull(HEXAGON)
    lat = face_lattice(p)
    vid = p.vertices.index((3, 2, 1))
    chain = maximal_chain(lat, (vid,))
    assert [lat.dims[c] for c in chain] == [0, 1, 2]
    edge = lat.face(chain[1])
    x = relative_interior_point(p, edge)
    assert lat.relint_face_of(x) == [chain[1]]


def test_exposing_vectors_expose():
    p = hull(permutohedron(4))
    lat = face_lattice(p)
    for i in lat.nonempty():
        u = lat.exposing_vector(i)
        if u is None:
            assert i == lat.top()
            continue
        assert supporting_face(p, u, lat).key == lat.faces[i]


def test_permutohedron_f_vector():
    assert face_lattice(hull(permutohedron(4))).f_vector() == (24, 36, 14, 1)


def test_dot_and_json_exports():
    lat = face_lattice(hull(HEXAGON))
    dot = lat.to_dot()
    assert dot.startswith("digraph") and dot.count("->") == len(lat.covers)
    d = lat.to_dict()
    assert len(d["nodes"]) == 14
    assert all("exposing_vector" in n for n in d["nodes"] if 0 <= n["dim"] < 2)


def test_vertex_permutation_rejects_non_symmetry():
    p = hull(SQUARE)
    with pytest.raises(PolytopeError):
        vertex_permutation(p, [[2, 0], [0, 1]])


def test_errors():
    with pytest.raises(PolytopeError):
        hull([])
    with pytest.raises(PolytopeError):
        hull([(1, 2), (1, 2, 3)])
    with pytest.raises(ValueError):
        supporting_face(hull(SQUARE), (0, 0))


coords = st.integers(min_value=-6, max_value=6)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(coords, coords, coords), min_size=5, max_size=14, unique=True))
def test_random_hulls(points):
    assume(affine_dim(points) == 3)
    p = hull(points)
    assert set(p.vertices) <= {tuple(F(x) for x in q) for q in points}
    assert all(p.contains(q) for q in points)
    f0, f1, f2, _ = face_lattice(p, n_check=50).f_vector()
    assert f0 - f1 + f2 == 2


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(coords, coords), min_size=3, max_size=10, unique=True),
       st.tuples(coords, coords))
def test_supporting_face_maximizes(points, u):
    assume(affine_dim(points) == 2 and any(u))
    p = hull(points)
    q = supporting_face(p, u)
    vals = [sum(a * b for a, b in zip(u, v)) for v in p.vertices]
    assert {p.vertices[i] for i in q.vertex_ids} == {v for v, x in zip(p.vertices, vals) if x == max(vals)}
