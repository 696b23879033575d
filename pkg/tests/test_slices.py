from fractions import Fraction as F

import numpy as np
import pytest

from fatsection.correspondence import face_orbit_classes
from fatsection.groups import FiniteMatrixGroup
from fatsection.sections import SectionError
from fatsection.slices import chain_reduce, covering_exposer, slice, verify_projection_restriction


def vid(b, v):
    return b.P.vertices.index(tuple(F(x) for x in v))


def test_slice_of_2x2_at_diagonal(sh2):
    s = slice(sh2, (1, -1))
    assert s.V1.dim == 1 and s.Sigma1.dim == 1
    assert s.G1.algebra_dim == 0
    assert s.V1.contains(s.u1) and s.Sigma1.contains(s.u1)
    assert s.report.passed and s.direct_sum_ok()


def test_slice_of_3x3_at_regular_diagonal(sh3):
    s = slice(sh3, (2, 0, -2))
    assert s.V1.dim == 2 and s.Sigma1.dim == 2
    assert s.G1.algebra_dim == 0
    assert verify_projection_restriction(s, 256)["passed"]


def test_slice_at_singular_diagonal(sh3):
    # diag(1, 1, -2) commutes with a copy of SO(2)
    s = slice(sh3, (1, 1, -2))
    assert s.V1.dim == 3 and s.Sigma1.dim == 2 and s.G1.algebra_dim == 1
    assert s.direct_sum_ok() and s.invariance_ok()
    assert s.report.passed


def test_finite_group_slice_is_everything(d4):
    s = slice(d4, (1, 0))
    assert s.V1.dim == 2 and s.Sigma1.dim == 2
    assert isinstance(s.G1, FiniteMatrixGroup) and s.G1.order == 2


def test_projection_restriction_trivial_cases(sh3):
    s = slice(sh3, (1, 1, -2))
    x = s.Sigma1.basis[:, 0]
    assert np.allclose(s.Sigma1.projector @ x, x)
    assert np.allclose(s.parent_sigma.projector @ x, x)


def test_slice_errors(sh3):
    with pytest.raises(SectionError):
        slice(sh3, (0, 0, 0))
    with pytest.raises(ValueError):
        slice(sh3, (1, -1))


def test_chain_for_P_is_empty(sh3):
    c = chain_reduce(sh3, sh3.lattice.face(sh3.lattice.top()))
    assert c.levels == [] and c.passed
    assert c.final["K"] == {"kind": "lie", "algebra_dim": 3}


def test_endpoint_chain_2x2(sh2):
    c = chain_reduce(sh2, (vid(sh2, (1, -1)),))
    assert len(c.levels) == 1 and c.passed
    assert c.levels[0].u == (1, -1)
    assert c.final["K"]["algebra_dim"] == 0


def test_vertex_chain_3x3(sh3):
    c = chain_reduce(sh3, (vid(sh3, (1, 0, -1)),))
    assert [f.dim for f in c.chain] == [2, 1, 0]
    assert c.passed
    assert all(lv.slice_rep.report.passed for lv in c.levels)
    # nested slices
    assert c.levels[0].slice_rep.V1.contains_subspace(c.levels[1].slice_rep.V1, 1e-9)
    d = c.to_dict()
    assert [lv["dim_Sigma"] for lv in d["levels"]] == [2, 2]


def test_covering_exposers_are_exact(sh3):
    for r in face_orbit_classes(sh3):
        c = chain_reduce(sh3, r.q, n_samples=10, n_projection=32)
        for outer, inner, lv in zip(c.chain, c.chain[1:], c.levels):
            assert covering_exposer(sh3, outer, inner) == lv.u
            assert all(isinstance(x, F) for x in lv.u)
