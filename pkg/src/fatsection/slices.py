"""Slice representations at exposing directions and chain reduction down a face chain.

At a direction u in the section, the stabilizer G_u acts on the normal space
V_u of the orbit through u, and V_u cap sigma is again a fat section.  Walking
a maximal chain P = Q_0 > Q_1 > ... > Q_n = Q and slicing once per step ends
with a group K = G_n whose orbit of Q is F_Q.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .correspondence import (
    DescentError,
    InvariantBody,
    lift_face,
    _fmt,
    _sample_orbit_of_face,
)
from .groups import (
    FiniteMatrixGroup,
    GroupModel,
    normal_space,
    restrict_to_subspace,
    stabilizer,
)
from .linalg import Subspace, dot, intersect, orthogonal_complement, project, to_fractions
from .polytope import PFace, _primitive, maximal_chain
from .sections import AxiomReport, SectionCandidate, SectionError, check_axioms

__all__ = [
    "SliceRep",
    "ChainLevel",
    "ChainReduction",
    "slice",
    "make_slice",
    "verify_projection_restriction",
    "chain_reduce",
    "SLICE_AXIOM_SAMPLES",
]

SLICE_AXIOM_SAMPLES = 64
SUBSPACE_TOL = 1e-9


@dataclass(eq=False)
class SliceRep:
    u1: np.ndarray
    V1: Subspace
    G1: GroupModel
    Sigma1: Subspace
    parent_sigma: Subspace
    section: SectionCandidate
    report: AxiomReport | None = None

    def decomposition_dims(self) -> tuple[int, int, int]:
        """(dim V1, dim V1 cap sigma, dim V1 cap sigma-perp)."""
        perp = _complement(self.parent_sigma)
        return self.V1.dim, self.Sigma1.dim, intersect(self.V1, perp).dim

    def direct_sum_ok(self) -> bool:
        d, a, b = self.decomposition_dims()
        return d == a + b

    def invariance_ok(self, n: int = 16, seed: int = 0) -> bool:
        rng = np.random.default_rng(seed)
        b = self.V1.basis
        for _ in range(n):
            m = self.G1.random_element(rng)
            if np.max(np.abs(m @ b - self.V1.projector @ m @ b), initial=0.0) > 1e-8:
                return False
        return True


def _complement(s: Subspace) -> Subspace:
    return orthogonal_complement(s)


def _slice_section(g1: GroupModel, v1: Subspace, sigma1: Subspace) -> SectionCandidate:
    """(G1, Sigma1) written in orthonormal coordinates of V1."""
    h = restrict_to_subspace(g1, v1)
    coords = [v1.basis.T @ sigma1.basis[:, i] for i in range(sigma1.dim)]
    sig = Subspace.span(coords, v1.dim) if coords else Subspace.zero(v1.dim)
    return SectionCandidate(h, sig)


def make_slice(group: GroupModel, within: Subspace, sigma: Subspace, u1, n_axiom: int = SLICE_AXIOM_SAMPLES,
               seed: int = 0, check: bool = True) -> SliceRep:
    """Slice of (group acting on ``within``, ``sigma``) at ``u1``."""
    u = np.asarray([float(t) for t in u1])
    if not np.any(u):
        raise SectionError("zero slice direction")
    if not sigma.contains(u, SUBSPACE_TOL * (1 + np.linalg.norm(u))):
        raise SectionError("slice direction is not in the section")
    v1 = intersect(within, normal_space(group, u))
    exact_u = u1 if all(isinstance(t, (int, Fraction)) for t in u1) else u
    g1 = stabilizer(group, exact_u)
    sigma1 = intersect(v1, sigma)
    sec = _slice_section(g1, v1, sigma1)
    rep = check_axioms(sec, n_axiom, seed) if check else None
    return SliceRep(u, v1, g1, sigma1, sigma, sec, rep)


def slice(b: InvariantBody, u1) -> SliceRep:  # noqa: A001
    """Slice representation (V1, G1, Sigma1) at a direction u1 given in chart coordinates."""
    c = to_fractions(u1)
    if len(c) != b.section.chart_dim:
        raise ValueError("u1 must be given in chart coordinates")
    if all(t == 0 for t in c):
        raise SectionError("zero slice direction")
    u = _lift_direction(b, c)
    return make_slice(b.group, Subspace.full(b.section.ambient_dim), b.section.sigma, u, seed=b.seed)


def _lift_direction(b: InvariantBody, c):
    if b.section.chart_exact is not None:
        return b.section.from_chart_exact(c)
    return b.section.from_chart(c)


def verify_projection_restriction(s: SliceRep, n: int = 256, seed: int = 0, tol: float = 1e-9) -> dict:
    """Projection onto Sigma1 agrees with projection onto the parent section on V1."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    p1, p0 = s.Sigma1.projector, s.parent_sigma.projector
    for _ in range(n):
        x = s.V1.basis @ rng.standard_normal(s.V1.dim)
        worst = max(worst, float(np.max(np.abs(p1 @ x - p0 @ x), initial=0.0)))
    return {"samples": n, "max_deviation": worst, "passed": worst <= tol}


# -- chain reduction -----------------------------------------------------------

@dataclass(eq=False)
class ChainLevel:
    face: PFace
    u: tuple
    slice_rep: SliceRep
    checks: dict

    def to_dict(self) -> dict:
        g = self.slice_rep.G1
        stab = ({"kind": "finite", "order": g.order} if isinstance(g, FiniteMatrixGroup)
                else {"kind": "lie", "algebra_dim": g.algebra_dim})
        return {
            "face": list(self.face.vertex_ids),
            "face_dim": self.face.dim,
            "u": [_fmt(t) for t in self.u],
            "dim_V": self.slice_rep.V1.dim,
            "dim_Sigma": self.slice_rep.Sigma1.dim,
            "stabilizer": stab,
            "checks": self.checks,
        }


@dataclass(eq=False)
class ChainReduction:
    chain: list
    levels: list
    final: dict = field(default_factory=dict)

    @property
    def K(self) -> GroupModel | None:
        return self.levels[-1].slice_rep.G1 if self.levels else None

    @property
    def passed(self) -> bool:
        return all(lv.checks["passed"] for lv in self.levels) and self.final.get("passed", False)

    def to_dict(self) -> dict:
        return {"chain": [list(f.vertex_ids) for f in self.chain],
                "levels": [lv.to_dict() for lv in self.levels],
                "final": self.final, "passed": self.passed}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _direction_basis(b: InvariantBody, ids) -> Subspace:
    verts = [b.P.vertices[i] for i in sorted(ids)]
    diffs = [tuple(a - c for a, c in zip(v, verts[0])) for v in verts[1:]]
    diffs = [d for d in diffs if any(d)]
    if not diffs:
        return Subspace.from_rational([], b.section.chart_dim)
    return Subspace.from_rational(diffs, b.section.chart_dim)


def covering_exposer(b: InvariantBody, outer: PFace, inner: PFace) -> tuple:
    """Exact outward normal of the facet ``inner`` of ``outer`` within aff(outer)."""
    d_in = _direction_basis(b, inner.vertex_ids)
    v_in = b.P.vertices[inner.vertex_ids[0]]
    out_ids = [i for i in outer.vertex_ids if i not in set(inner.vertex_ids)]
    if not out_ids:
        raise ArithmeticError("covering step without new vertices")
    w = tuple(a - c for a, c in zip(b.P.vertices[out_ids[0]], v_in))
    u = tuple(-(x - y) for x, y in zip(w, project(d_in, w)))
    if not any(u):
        raise ArithmeticError("no exposing vector for a covering step")
    u = _primitive(u)
    # must expose exactly ``inner`` inside ``outer``
    vals = {i: dot(u, b.P.vertices[i]) for i in outer.vertex_ids}
    m = max(vals.values())
    if sorted(i for i, v in vals.items() if v == m) != sorted(inner.vertex_ids):
        raise ArithmeticError("no exposing vector for a covering step")
    return u


def chain_reduce(b: InvariantBody, q, n_samples: int = 40, n_projection: int = 256,
                 n_axiom: int = SLICE_AXIOM_SAMPLES, seed: int | None = None, tol: float = 1e-7) -> ChainReduction:
    seed = b.seed if seed is None else seed
    ids = q.vertex_ids if isinstance(q, PFace) else tuple(sorted(q))
    target = b.lattice.index(ids)
    if b.lattice.dims[target] < 0:
        raise ValueError("the empty face has no chain")
    chain_ids = maximal_chain(b.lattice, ids)[::-1]  # P first
    chain = [b.lattice.face(i) for i in chain_ids]
    group: GroupModel = b.group
    within = Subspace.full(b.section.ambient_dim)
    sigma = b.section.sigma
    levels = []
    for step, (outer, inner) in enumerate(zip(chain, chain[1:])):
        u_chart = covering_exposer(b, outer, inner)
        u = _lift_direction(b, u_chart)
        uv = np.asarray([float(t) for t in u])
        in_sigma = sigma.contains(uv, SUBSPACE_TOL * (1 + np.linalg.norm(uv)))
        s = make_slice(group, within, sigma, u, n_axiom, seed + step)
        proj = verify_projection_restriction(s, n_projection, seed + step)
        lift_ok = _lift_refines(b, outer, inner, u_chart, n_samples, seed + step, tol)
        nested = within.contains_subspace(s.V1, SUBSPACE_TOL) and sigma.contains_subspace(s.Sigma1, SUBSPACE_TOL)
        checks = {
            "u_in_section": bool(in_sigma),
            "supporting_face": True,
            "axioms": bool(s.report.passed),
            "projection_restriction": proj["passed"],
            "projection_max_deviation": proj["max_deviation"],
            "direct_sum": s.direct_sum_ok(),
            "nested": bool(nested),
            "lift_refines": lift_ok["refines"],
            "lift_exposed": lift_ok["exposed"],
        }
        checks["passed"] = all(v for k, v in checks.items() if k != "projection_max_deviation")
        levels.append(ChainLevel(inner, u_chart, s, checks))
        group, within, sigma = s.G1, s.V1, s.Sigma1
    final = _final_check(b, chain[-1], group, n_samples, seed, tol)
    return ChainReduction(chain, levels, final)


def _lift_refines(b: InvariantBody, outer: PFace, inner: PFace, u_chart, n: int, seed: int, tol: float) -> dict:
    f_in = lift_face(b, inner)
    f_out = lift_face(b, outer)
    pts = f_in.sample(n, seed)
    refines = True
    for z in pts:
        try:
            refines &= f_out.contains(z, tol)
        except DescentError:
            refines = False
    u = b.lift_point(u_chart)
    h = max(float(dot(u_chart, b.P.vertices[i])) for i in outer.vertex_ids)
    scale = tol * (1 + abs(h)) * (1 + np.linalg.norm(u))
    out_vals = f_out.sample(n, seed + 1) @ u
    exposed = bool(np.all(out_vals <= h + scale) and np.all(np.abs(pts @ u - h) <= scale))
    return {"refines": bool(refines), "exposed": exposed}


def _final_check(b: InvariantBody, q: PFace, k: GroupModel, n: int, seed: int, tol: float) -> dict:
    lf = lift_face(b, q)
    pts = _sample_orbit_of_face(b, k, q, n, seed + 17)
    bad = indeterminate = 0
    for z in pts:
        try:
            bad += not lf.contains(z, tol)
        except DescentError:
            indeterminate += 1
    kinfo = ({"kind": "finite", "order": k.order} if isinstance(k, FiniteMatrixGroup)
             else {"kind": "lie", "algebra_dim": k.algebra_dim})
    return {"K": kinfo, "samples": len(pts), "outside": bad, "indeterminate": indeterminate,
            "passed": bad == 0 and indeterminate == 0}
