from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fatsection.linalg import (
    Subspace,
    exact_nullspace,
    exact_rank,
    exact_solve,
    float_rank,
    format_scalar,
    intersect,
    orthogonal_complement,
    parse_scalar,
    project,
    rref,
    to_fraction,
)


def test_rref_pivots():
    rows, piv = rref([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert piv == [0, 1]
    assert rows == [[1, 0, 1], [0, 1, 1]]


def test_nullspace_is_annihilated():
    a = [[1, 1, 1], [1, -1, 0]]
    ns = exact_nullspace(a, 3)
    assert len(ns) == 1
    assert all(sum(x * y for x, y in zip(r, ns[0])) == 0 for r in a)


def test_exact_solve():
    assert exact_solve([[2, 1], [1, 3]], [3, 5]) == (F(4, 5), F(7, 5))


def test_exact_solve_singular():
    with pytest.raises(np.linalg.LinAlgError):
        exact_solve([[1, 2], [2, 4]], [1, 2])


def test_scalars_roundtrip():
    assert to_fraction("3/4") == F(3, 4)
    assert to_fraction(0.5) == F(1, 2)
    assert parse_scalar(format_scalar(F(-2, 7))) == F(-2, 7)


def test_exact_projection_onto_diagonal_line():
    s = Subspace.from_rational([(1, 1, 0)])
    assert project(s, (2, 0, 5)) == (1, 1, 0)


def test_complement_and_intersection():
    a = Subspace.from_rational([(1, 0, 0), (0, 1, 0)])
    b = Subspace.from_rational([(0, 1, 0), (0, 0, 1)])
    i = intersect(a, b)
    assert i.dim == 1 and i.contains((0, 1, 0))
    c = orthogonal_complement(i, a)
    assert c.dim == 1 and c.contains((1, 0, 0))
    with pytest.raises(ValueError):
        orthogonal_complement(b, a)


def test_float_rank_scale_invariant():
    m = np.array([[1e-12, 0], [0, 2e-12]])
    assert float_rank(m) == 2


ints = st.integers(min_value=-5, max_value=5)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(ints, min_size=4, max_size=4), min_size=1, max_size=4))
def test_rank_nullity(rows):
    assert exact_rank(rows) + len(exact_nullspace(rows, 4)) == 4


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(ints, min_size=4, max_size=4), min_size=1, max_size=3),
       st.lists(ints, min_size=4, max_size=4))
def test_projection_properties(rows, v):
    s = Subspace.from_rational(rows, 4) if any(any(r) for r in rows) else Subspace.zero(4)
    p = project(s, v) if s.dim else (0,) * 4
    if s.dim:
        assert project(s, p) == p
        # residual is orthogonal to the subspace
        r = [a - b for a, b in zip(v, p)]
        assert all(sum(x * y for x, y in zip(r, b)) == 0 for b in s.rational_basis)
    comp = orthogonal_complement(s)
    assert comp.dim + s.dim == 4
