"""Invariant convex bodies E = G.P handled entirely through P = E cap sigma.

E is never materialized.  Membership in E descends a point into the section
and tests the descended point against the exact polytope P; faces of E are
lifted from faces Q of P as F_Q = sigma^-1(Q) cap E, sampled as G_u.Q for an
exposing direction u of Q.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.optimize

from .groups import (
    FiniteMatrixGroup,
    GroupModel,
    LieGroupModel,
    pointwise_stabilizer,
    stabilizer,
)
from .linalg import Subspace, dot, orthogonal_complement, rref, to_fractions
from .polytope import (
    FaceLattice,
    OrbitPolytope,
    PFace,
    face_lattice,
    group_action_on_faces,
    hull,
    supporting_face,
)
from .sections import (
    AxiomReport,
    DescentError,
    FatWeylGroup,
    SectionCandidate,
    SectionError,
    descend,
    fat_weyl_group,
)

__all__ = [
    "InvariantBody",
    "LiftedFace",
    "CorrespondenceRecord",
    "restrict",
    "body_from_entry",
    "descend_to_section",
    "membership_E",
    "sample_E",
    "lift_face",
    "exposed_lift",
    "push_face",
    "face_orbit_classes",
    "verify_orbit_bijection",
    "exposedness_transfer",
    "conjecture_probe",
    "MEMBERSHIP_TOL",
]

MEMBERSHIP_TOL = 1e-7


def _snap_rational(x: float, den: int = 10**6, tol: float = 1e-9):
    f = Fraction(float(x)).limit_denominator(den)
    return f if abs(float(f) - x) <= tol else Fraction(float(x))


def _fmt(x, digits: int = 12):
    """Exact string for small rationals, rounded float otherwise."""
    if isinstance(x, Fraction) and x.denominator <= 10**6:
        return str(x)
    r = round(float(x), digits) + 0.0
    f = Fraction(r).limit_denominator(10**6)
    return str(f) if abs(float(f) - r) <= 10.0**-digits else r


# -- the body ------------------------------------------------------------------

@dataclass(eq=False)
class InvariantBody:
    section: SectionCandidate
    weyl: FatWeylGroup
    restriction: OrbitPolytope
    lattice: FaceLattice
    report: AxiomReport
    generators_in_V: tuple | None = None
    seed: int = 0
    _lifts: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.report.passed:
            raise SectionError("section axioms failed; refusing to build the body")
        if self.weyl.finite:
            # P must be W-invariant
            group_action_on_faces(self.lattice, self.weyl.matrices)

    @property
    def group(self) -> GroupModel:
        return self.section.group

    @property
    def P(self) -> OrbitPolytope:
        return self.restriction

    def lift_point(self, c) -> np.ndarray:
        return self.section.from_chart(c)

    def chart(self, x) -> np.ndarray:
        return self.section.to_chart(x)

    def vertices_V(self) -> np.ndarray:
        return np.array([self.lift_point(v) for v in self.P.vertices])

    def random_group_element(self, rng, group: GroupModel | None = None) -> np.ndarray:
        g = self.group if group is None else group
        return g.random_element(rng)


def restrict(section: SectionCandidate, weyl: FatWeylGroup, generators, seed: int = 0,
             chart_points=None) -> OrbitPolytope:
    """P = conv of the W-saturated descents of the generators (chart coordinates).

    ``chart_points`` are generators already lying in the section, given in
    exact chart coordinates; they skip the descent.
    """
    if not weyl.finite:
        raise SectionError("restriction to a polytope needs a finite fat Weyl group")
    pts = []
    for c in chart_points or ():
        pts.extend(weyl.orbit(to_fractions(c)))
    for i, x in enumerate(generators or ()):
        d = descend(section, x, seed=seed + i)
        c = tuple(_snap_rational(t) for t in section.to_chart(d.point))
        pts.extend(weyl.orbit(c))
    if not pts:
        raise ValueError("no generators")
    return hull(pts)


def body_from_entry(entry, base_index: int = 0, seed: int = 0, n_check: int = 1000) -> InvariantBody:
    """E = conv(G.x) for a registry base point x (given in chart coordinates)."""
    w = fat_weyl_group(entry.section, entry.report, seed=seed)
    p = restrict(entry.section, w, (), seed, chart_points=[entry.base_points[base_index]])
    lat = face_lattice(p, n_check=n_check, seed=seed)
    gens = (entry.section.from_chart(entry.base_points[base_index]),)
    return InvariantBody(entry.section, w, p, lat, entry.report, gens, seed)


def descend_to_section(b: InvariantBody, x, seed: int | None = None):
    """A point of (G.x) cap sigma together with the group element realizing it."""
    return descend(b.section, x, seed=b.seed if seed is None else seed)


def membership_E(b: InvariantBody, x, tol: float = MEMBERSHIP_TOL, seed: int | None = None) -> bool:
    """x in E = G.P.  Raises DescentError when the descent is indeterminate."""
    x = np.asarray(x, dtype=float)
    if np.linalg.norm(x) > _max_vertex_norm(b) + tol:
        return False
    d = descend_to_section(b, x, seed)
    return b.P.contains(b.chart(d.point), tol)


def _max_vertex_norm(b: InvariantBody) -> float:
    if "max_norm" not in b._lifts:
        b._lifts["max_norm"] = float(max(np.linalg.norm(v) for v in b.P.vertex_array()))
    return b._lifts["max_norm"]


def _random_P_point(b: InvariantBody, rng, vertex_ids=None) -> np.ndarray:
    va = b.P.vertex_array()
    if vertex_ids is not None:
        va = va[list(vertex_ids)]
    w = rng.dirichlet(np.ones(len(va)) * 0.5)
    return b.lift_point(w @ va)


def sample_E(b: InvariantBody, n: int, seed: int = 0) -> np.ndarray:
    """Points of E: group images of random points of P, and convex mixtures of those."""
    rng = np.random.default_rng(seed)
    out = np.empty((n, b.section.ambient_dim))
    for i in range(n):
        k = 1 if i % 2 == 0 else int(rng.integers(2, 4))
        w = rng.dirichlet(np.ones(k))
        z = sum(wj * (b.random_group_element(rng) @ _random_P_point(b, rng)) for wj in w)
        out[i] = z
    return out


# -- lifted faces --------------------------------------------------------------

@dataclass(eq=False)
class LiftedFace:
    """F_Q = sigma^-1(Q) cap E, represented by an oracle and samples."""

    body: InvariantBody
    q: PFace
    exposing_vector: tuple | None
    stabilizer: GroupModel
    samples: np.ndarray
    face_index: int

    @property
    def exposing_vector_V(self) -> np.ndarray | None:
        if self.exposing_vector is None:
            return None
        return self.body.lift_point(self.exposing_vector)

    def in_Q(self, c, tol: float = MEMBERSHIP_TOL) -> bool:
        p = self.body.P
        if not p.contains(c, tol):
            return False
        for j in self.body.lattice.facet_sets[self.face_index]:
            a, off = p.facets[j]
            av = np.array([float(t) for t in a])
            if abs(av @ np.asarray(c, dtype=float) - float(off)) > tol * np.linalg.norm(av):
                return False
        return True

    def contains(self, x, tol: float = MEMBERSHIP_TOL, seed: int | None = None) -> bool:
        x = np.asarray(x, dtype=float)
        if not self.in_Q(self.body.chart(x), tol):
            return False
        return membership_E(self.body, x, tol, seed)

    def sample(self, n: int, seed: int = 0) -> np.ndarray:
        return _sample_orbit_of_face(self.body, self.stabilizer, self.q, n, seed)

    def dim_estimate(self) -> int:
        return _affine_rank(self.samples)

    def validate(self, n_segments: int = 100, seed: int = 0, tol: float = MEMBERSHIP_TOL) -> dict:
        """sigma(F_Q) = Q = F_Q cap sigma on samples, Q inside F_Q, and segment tests."""
        b = self.body
        proj_ok = all(self.in_Q(b.chart(z), tol) for z in self.samples)
        q_in_f = all(self.contains(b.lift_point(b.P.vertices[i]), tol) for i in self.q.vertex_ids)
        in_sigma = [z for z in self.samples if b.section.residual(z) <= 1e-9]
        cap_ok = all(self.in_Q(b.chart(z), tol) for z in in_sigma)
        rng = np.random.default_rng(seed)
        tested = violations = 0
        span = self.samples - self.samples.mean(axis=0)
        for i in range(n_segments):
            m = self.stabilizer.random_element(rng) @ _centroid_V(b, self.q)
            if i % 2 == 0:
                d = rng.standard_normal(b.section.ambient_dim)
            else:
                d = span[rng.integers(len(span))] + 1e-3 * rng.standard_normal(b.section.ambient_dim) * (i % 4 == 1)
            nd = np.linalg.norm(d)
            if nd == 0:
                continue
            d = 1e-2 * d / nd
            try:
                ends_in_E = membership_E(b, m + d, tol) and membership_E(b, m - d, tol)
                if not ends_in_E:
                    continue
                tested += 1
                if not (self.contains(m + d, tol) and self.contains(m - d, tol)):
                    violations += 1
            except DescentError:
                continue
        return {"projection_in_Q": proj_ok, "Q_in_F": q_in_f, "section_slice_is_Q": cap_ok,
                "segments_tested": tested, "segment_violations": violations,
                "passed": proj_ok and q_in_f and cap_ok and violations == 0}


def _centroid_V(b: InvariantBody, q: PFace) -> np.ndarray:
    va = b.P.vertex_array()[list(q.vertex_ids)]
    return b.lift_point(va.mean(axis=0))


def _sample_orbit_of_face(b: InvariantBody, k: GroupModel, q: PFace, n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    verts = [b.lift_point(b.P.vertices[i]) for i in q.vertex_ids]
    out = list(verts)
    out.append(_centroid_V(b, q))
    while len(out) < n:
        out.append(k.random_element(rng) @ _random_P_point(b, rng, q.vertex_ids))
    return np.array(out[:n]) if n >= len(verts) + 1 else np.array(out)


def _affine_rank(samples, rel_tol: float = 1e-8) -> int:
    if len(samples) < 2:
        return 0
    centered = samples - samples.mean(axis=0)
    s = np.linalg.svd(centered, compute_uv=False)
    scale = max(1.0, float(np.max(np.abs(samples))))
    return int(np.sum(s > rel_tol * scale * np.sqrt(len(samples))))


def lift_face(b: InvariantBody, q, n_samples: int = 200, seed: int | None = None) -> LiftedFace:
    """The lifted face F_Q of a face ``q`` of P (PFace or vertex ids)."""
    ids = q.vertex_ids if isinstance(q, PFace) else tuple(sorted(q))
    idx = b.lattice.index(ids)
    if b.lattice.dims[idx] < 0:
        raise ValueError("the empty face has no lift")
    u = b.lattice.exposing_vector(idx)
    return _make_lift(b, idx, u, n_samples, b.seed if seed is None else seed)


def _make_lift(b: InvariantBody, idx: int, u, n_samples: int, seed: int) -> LiftedFace:
    key = (idx, tuple(u) if u is not None else None, n_samples, seed)
    if key in b._lifts:
        return b._lifts[key]
    qf = b.lattice.face(idx)
    if u is None:
        k = b.group
    else:
        k = stabilizer(b.group, b.lift_point(u))
    q = PFace(qf.vertex_ids, qf.dim, tuple(u) if u is not None else None)
    samples = _sample_orbit_of_face(b, k, q, n_samples, seed)
    lf = LiftedFace(b, q, q.exposing_vector, k, samples, idx)
    b._lifts[key] = lf
    return lf


def exposed_lift(b: InvariantBody, u, n_samples: int = 200, seed: int | None = None) -> LiftedFace:
    """F_u(E) computed as the lift of F_u(P); ``u`` in chart coordinates."""
    uf = to_fractions(u)
    if all(x == 0 for x in uf):
        raise ValueError("zero direction")
    q = supporting_face(b.P, uf, b.lattice)
    idx = b.lattice.index(q.vertex_ids)
    return _make_lift(b, idx, uf, n_samples, b.seed if seed is None else seed)


def support_value(b: InvariantBody, u) -> float:
    return float(np.max(b.P.vertex_array() @ np.asarray([float(t) for t in u])))


def verify_exposed_lift(lf: LiftedFace, n: int = 1000, seed: int = 0, tol: float = 1e-8) -> dict:
    """max of <., u> over sampled E matches the max over P and is attained on F samples."""
    b = lf.body
    u = lf.exposing_vector_V
    h = support_value(b, lf.exposing_vector)
    e_max = float(np.max(sample_E(b, n, seed) @ u))
    f_vals = lf.samples @ u
    return {"support_P": h, "max_E_samples": e_max,
            "face_attains": bool(np.all(np.abs(f_vals - h) <= tol * (1 + abs(h)))),
            "passed": e_max <= h + tol * (1 + abs(h)) and bool(np.all(np.abs(f_vals - h) <= tol * (1 + abs(h))))}


def push_face(b: InvariantBody, f: LiftedFace) -> PFace:
    """Q = sigma(F) for an exposed face F = F_u(E) with u in the section."""
    if f.exposing_vector is None:
        raise ValueError("face carries no exposing vector in the section")
    return supporting_face(b.P, f.exposing_vector, b.lattice)


def round_trip(b: InvariantBody, f: LiftedFace, n: int = 1000, seed: int = 0) -> dict:
    """Compare the oracle of F with that of lift_face(push_face(F)) on samples."""
    g = lift_face(b, push_face(b, f))
    pts = np.vstack([sample_E(b, n // 2, seed), f.sample(n - n // 2, seed + 1)])
    disagree = 0
    for z in pts:
        try:
            if f.contains(z) != g.contains(z):
                disagree += 1
        except DescentError:
            continue
    return {"samples": len(pts), "disagreements": disagree, "passed": disagree == 0}


# -- face classes --------------------------------------------------------------

@dataclass
class CorrespondenceRecord:
    class_id: int
    q: PFace
    orbit: list
    invariants: dict
    exposing_vector: tuple | None
    exposed: bool = True
    conjecture: dict | None = None

    @property
    def key(self) -> tuple:
        inv = self.invariants
        return (inv["dim"], tuple(map(str, inv["vertex_norms_sq"])), tuple(map(str, inv["gram_charpoly"])),
                tuple(map(str, inv["min_norm_point_class"])))

    def to_dict(self) -> dict:
        d = {
            "class_id": self.class_id,
            "Q": {"vertex_ids": list(self.q.vertex_ids), "dim": self.q.dim},
            "orbit_size": len(self.orbit),
            "invariants": self.invariants,
            "exposed": self.exposed,
        }
        if self.exposing_vector is not None:
            d["exposing_vector"] = [_fmt(x) for x in self.exposing_vector]
        if self.conjecture is not None:
            d["conjecture"] = self.conjecture
        return d


def _charpoly(m) -> list:
    """Characteristic polynomial coefficients (Faddeev-LeVerrier), exact."""
    n = len(m)
    ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    coeffs = [Fraction(1)]
    mk = [[Fraction(0)] * n for _ in range(n)]
    c = Fraction(1)
    for k in range(1, n + 1):
        mk = [[sum((m[i][t] * mk[t][j] for t in range(n)), Fraction(0)) + c * ident[i][j]
               for j in range(n)] for i in range(n)]
        am = [[sum((m[i][t] * mk[t][j] for t in range(n)), Fraction(0)) for j in range(n)] for i in range(n)]
        c = -sum(am[i][i] for i in range(n)) / k
        coeffs.append(c)
    return coeffs


def _min_norm_point(b: InvariantBody, idx: int) -> tuple:
    """Exact nearest point to the origin in face ``idx`` of P."""
    lat, p = b.lattice, b.P
    target = lat.faces[idx]
    best = None
    for j, f in enumerate(lat.faces):
        if lat.dims[j] < 0 or not f <= target:
            continue
        verts = [p.vertices[i] for i in sorted(f)]
        p0 = verts[0]
        diffs = [[a - c for a, c in zip(v, p0)] for v in verts[1:]]
        red, _ = rref(diffs) if diffs else ([], [])
        if red:
            gram = [[dot(r1, r2) for r2 in red] for r1 in red]
            rhs = [-dot(r, p0) for r in red]
            aug = [row + [r] for row, r in zip(gram, rhs)]
            sol, _ = rref(aug)
            coef = [row[-1] for row in sol]
            x = tuple(p0[k] + sum((c * r[k] for c, r in zip(coef, red)), Fraction(0)) for k in range(len(p0)))
        else:
            x = p0
        if not p.contains(x):
            continue
        if any(dot(p.facets[t][0], x) != p.facets[t][1] for t in lat.facet_sets[j]):
            continue
        nrm = dot(x, x)
        if best is None or nrm < best[0]:
            best = (nrm, x)
    return best[1]


def _canonical_weyl_form(b: InvariantBody, x) -> tuple:
    pts = b.weyl.orbit(x)
    if b.weyl.group.exact and all(isinstance(t, Fraction) for t in x):
        return tuple(_fmt(t) for t in max(pts))
    rounded = [tuple(round(float(t), 9) + 0.0 for t in p) for p in pts]
    return max(rounded)


def face_invariants(b: InvariantBody, idx: int, n_samples: int = 200) -> dict:
    lf = lift_face(b, b.lattice.face(idx), n_samples)
    verts = [b.P.vertices[i] for i in sorted(b.lattice.faces[idx])]
    norms = sorted(dot(v, v) for v in verts)
    gram = [[dot(u, v) for v in verts] for u in verts]
    eig = np.linalg.eigvalsh(np.array([[float(x) for x in r] for r in gram]))
    mn = _min_norm_point(b, idx)
    s_norms = np.linalg.norm(lf.samples, axis=1)
    return {
        "dim": lf.dim_estimate(),
        "vertex_norms_sq": [_fmt(x) for x in norms],
        "gram_charpoly": [_fmt(x) for x in _charpoly(gram)],
        "gram_spectrum": [round(float(e), 9) + 0.0 for e in sorted(eig)],
        "min_norm_point_class": list(_canonical_weyl_form(b, mn)),
        "max_distance": round(float(max(s_norms.max(), 0.0)), 9),
        "min_distance": round(float(min(s_norms.min(), np.sqrt(float(dot(mn, mn))))), 9),
    }


def face_orbit_classes(b: InvariantBody, n_samples: int = 200) -> list[CorrespondenceRecord]:
    """One record per W-orbit of nonempty faces of P."""
    if not b.weyl.finite:
        raise SectionError("face classes need a finite fat Weyl group")
    if "classes" in b._lifts:
        return b._lifts["classes"]
    orbits = group_action_on_faces(b.lattice, b.weyl.matrices)
    records = []
    for cid, orb in enumerate(orbits):
        invs = [face_invariants(b, i, n_samples) for i in orb]
        rep = orb[0]
        rec = CorrespondenceRecord(cid, b.lattice.face(rep), orb, invs[0], b.lattice.exposing_vector(rep))
        keys = {CorrespondenceRecord(cid, rec.q, orb, inv, None).key for inv in invs}
        if len(keys) != 1:
            raise ArithmeticError(f"W-equivalent faces of class {cid} have different invariants")
        records.append(rec)
    b._lifts["classes"] = records
    return records


def class_of_face(b: InvariantBody, vertex_ids) -> int:
    idx = b.lattice.index(vertex_ids)
    for rec in face_orbit_classes(b):
        if idx in rec.orbit:
            return rec.class_id
    raise KeyError("face not in any class")


def verify_orbit_bijection(b: InvariantBody, n_directions: int = 100, n_conjugates: int = 10,
                           n_inclusion: int = 10, seed: int = 0) -> dict:
    """Injectivity, inclusion compatibility and surjectivity evidence for Q -> F_Q."""
    records = face_orbit_classes(b)
    collisions = []
    for i, r in enumerate(records):
        for s in records[i + 1:]:
            if r.q.dim == s.q.dim and r.key == s.key:
                collisions.append([r.class_id, s.class_id])
    # inclusion: samples of F_Q satisfy the oracle of F_Q' for Q inside Q'
    lat = b.lattice
    incl_checked = incl_fail = incl_indeterminate = 0
    for r in records:
        qi = lat.index(r.q.vertex_ids)
        fq = lift_face(b, r.q)
        pts = fq.sample(n_inclusion, seed + qi)
        for j in lat.nonempty():
            if j == qi or not lat.faces[qi] < lat.faces[j]:
                continue
            fq2 = lift_face(b, lat.face(j))
            for z in pts:
                incl_checked += 1
                try:
                    if not fq2.contains(z):
                        incl_fail += 1
                except DescentError:
                    incl_indeterminate += 1
    # surjectivity evidence: exposed faces of E for directions in V
    rng = np.random.default_rng(seed)
    hits: dict[int, int] = {}
    unknown = transfer_fail = indeterminate = 0
    e_samples = sample_E(b, 500, seed + 7)

    def push_direction(ut):
        nonlocal unknown, transfer_fail, indeterminate
        try:
            d = descend(b.section, ut, seed=seed)
        except DescentError:
            indeterminate += 1
            return None
        u = b.chart(d.point)
        q = supporting_face(b.P, u, b.lattice, tol=1e-7 * (1 + np.linalg.norm(u)))
        try:
            cid = class_of_face(b, q.vertex_ids)
        except KeyError:
            unknown += 1
            return None
        hits[cid] = hits.get(cid, 0) + 1
        # F_ut(E) = g^-1 F_Q: support values agree and g^-1 F_Q attains them
        h = support_value(b, u)
        fq = lift_face(b, q, n_samples=20)
        back = (d.element.T @ fq.samples.T).T
        ok = float(np.max(e_samples @ ut)) <= h + 1e-7 * (1 + abs(h)) and np.all(
            np.abs(back @ ut - h) <= 1e-7 * (1 + abs(h)))
        if not ok:
            transfer_fail += 1
        return cid

    for _ in range(n_directions):
        push_direction(rng.standard_normal(b.section.ambient_dim))
    random_hits = dict(hits)
    conj_mismatch = 0
    for r in records:
        if r.exposing_vector is None:
            continue
        u = b.lift_point(r.exposing_vector)
        for _ in range(n_conjugates):
            cid = push_direction(b.random_group_element(rng) @ u)
            if cid is not None and cid != r.class_id:
                conj_mismatch += 1
    covered = sorted(hits)
    proper = [r.class_id for r in records if r.exposing_vector is not None]
    passed = (not collisions and incl_fail == 0 and incl_indeterminate == 0 and unknown == 0
              and transfer_fail == 0 and indeterminate == 0 and conj_mismatch == 0
              and all(c in hits for c in proper))
    return {
        "classes": len(records),
        "injectivity": {"collisions": collisions, "status": "no collisions" if not collisions else "discrepancy"},
        "inclusion": {"checked": incl_checked, "failures": incl_fail, "indeterminate": incl_indeterminate},
        "surjectivity": {"random_directions": n_directions,
                         "random_hits": {str(k): v for k, v in sorted(random_hits.items())},
                         "conjugated_exposers": n_conjugates * len(proper),
                         "class_mismatches": conj_mismatch,
                         "unknown_faces": unknown, "support_transfer_failures": transfer_fail,
                         "indeterminate": indeterminate, "classes_reached": covered,
                         "status": "evidence"},
        "passed": bool(passed),
    }


def exposedness_transfer(b: InvariantBody, n_samples: int = 10000, seed: int = 0,
                         tol: float = 1e-7) -> dict:
    """Each face class gets an exposing vector u in the section, checked on E samples."""
    records = face_orbit_classes(b)
    e = sample_E(b, n_samples, seed)
    out = []
    for r in records:
        if r.exposing_vector is None:
            out.append({"class_id": r.class_id, "exposing_vector": None, "passed": True,
                        "note": "improper face (E itself)"})
            continue
        lf = lift_face(b, r.q)
        u = lf.exposing_vector_V
        pts = np.vstack([e, lf.samples])
        vals = pts @ u
        m = float(vals.max())
        h = support_value(b, r.exposing_vector)
        arg = pts[vals >= m - tol * (1 + abs(m))]
        accepted = 0
        for z in arg:
            try:
                accepted += lf.contains(z, tol)
            except DescentError:
                pass
        ok = accepted == len(arg) and m <= h + tol * (1 + abs(h)) and abs(m - h) <= tol * (1 + abs(h))
        out.append({"class_id": r.class_id, "exposing_vector": [_fmt(x) for x in r.exposing_vector],
                    "max_value": round(m, 9), "support_P": round(h, 9), "argmax_samples": len(arg),
                    "argmax_in_face": accepted, "passed": bool(ok)})
    return {"classes": out, "passed": all(c["passed"] for c in out)}


# -- the open question ---------------------------------------------------------

def _face_direction(b: InvariantBody, q: PFace) -> Subspace:
    verts = [b.P.vertices[i] for i in q.vertex_ids]
    diffs = [b.lift_point([a - c for a, c in zip(v, verts[0])]) for v in verts[1:]]
    return Subspace.span(diffs, b.section.ambient_dim)


def _nearest_in_face(b: InvariantBody, idx: int, c) -> np.ndarray:
    """Nearest point of face ``idx`` of P to chart point ``c`` (float)."""
    key = ("subfaces", idx)
    if key not in b._lifts:
        lat = b.lattice
        target = lat.faces[idx]
        va = b.P.vertex_array()
        subs = []
        for j, f in enumerate(lat.faces):
            if lat.dims[j] < 0 or not f <= target:
                continue
            vs = va[sorted(f)]
            p0 = vs[0]
            d = (vs[1:] - p0).T
            if d.size:
                q = np.linalg.svd(d, full_matrices=False)[0][:, : lat.dims[j]]
            else:
                q = np.zeros((len(p0), 0))
            subs.append((p0, q))
        b._lifts[key] = subs
    a, off = b.P.facet_arrays()
    norms = np.linalg.norm(a, axis=1) if len(a) else np.zeros(0)
    best, best_d = None, np.inf
    for p0, q in b._lifts[key]:
        x = p0 + q @ (q.T @ (c - p0))
        if len(a) and np.any(a @ x - off > 1e-12 * (1 + norms)):
            continue
        dd = np.linalg.norm(x - c)
        if dd < best_d:
            best, best_d = x, dd
    return best


def _distance_to_orbit_of_face(b: InvariantBody, k: GroupModel, idx: int, z, rng, starts: int = 8) -> float:
    sec = b.section

    def dist_after(m):
        y = m @ z
        c = sec.to_chart(y)
        near = _nearest_in_face(b, idx, c)
        return y - sec.from_chart(near)

    if isinstance(k, FiniteMatrixGroup):
        return float(min(np.linalg.norm(dist_after(m)) for m in k.elements))
    if not k.algebra_basis:
        return float(np.linalg.norm(dist_after(np.eye(len(z)))))
    inits = [np.zeros(k.algebra_dim)]
    try:
        d = descend(sec.with_group(k), z, seed=int(rng.integers(1 << 30)), starts=4)
        inits.insert(0, None)
        m0 = d.element
    except DescentError:
        m0 = None
    inits += [k.random_coefficients(rng) for _ in range(starts)]
    best = np.inf
    for t0 in inits:
        base = m0 if t0 is None else np.eye(len(z))
        s0 = np.zeros(k.algebra_dim) if t0 is None else t0
        sol = scipy.optimize.least_squares(lambda s: dist_after(k.element(s) @ base), s0,
                                           xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=400)
        best = min(best, float(np.linalg.norm(sol.fun)))
        if best <= 1e-9:
            break
    return best


def conjecture_probe(b: InvariantBody, q, n: int = 40, seed: int = 0, tol: float = 1e-5) -> dict:
    """Compare F_Q with K.Q, K = pointwise stabilizer of the orthogonal complement
    (inside the section) of the direction of Q.  Report-only."""
    ids = q.vertex_ids if isinstance(q, PFace) else tuple(sorted(q))
    idx = b.lattice.index(ids)
    face = b.lattice.face(idx)
    if not face.vertex_ids:
        raise ValueError("empty face")
    direction = _face_direction(b, face)
    qperp = orthogonal_complement(direction, b.section.sigma)
    k = pointwise_stabilizer(b.group, qperp)
    lf = lift_face(b, face)
    rng = np.random.default_rng(seed)
    # forward: K.Q inside F_Q
    kq = _sample_orbit_of_face(b, k, face, n, seed + 1)
    fwd_bad, fwd_ind = [], 0
    for z in kq:
        try:
            if not lf.contains(z):
                fwd_bad.append(z)
        except DescentError:
            fwd_ind += 1
    if fwd_bad:
        forward = {"verdict": "violated", "witness": [round(float(t), 12) for t in fwd_bad[0]]}
    elif fwd_ind:
        forward = {"verdict": "inconclusive", "indeterminate": fwd_ind}
    else:
        forward = {"verdict": "holds", "checked": len(kq)}
    # reverse: F_Q samples near K.Q
    fq = lf.sample(n, seed + 2)
    dists = [_distance_to_orbit_of_face(b, k, idx, z, rng) for z in fq]
    worst = float(max(dists))
    if worst <= tol:
        reverse = {"verdict": "holds", "max_distance": worst}
    elif worst > 100 * tol:
        j = int(np.argmax(dists))
        reverse = {"verdict": "violated", "max_distance": worst,
                   "witness": [round(float(t), 12) for t in fq[j]]}
    else:
        reverse = {"verdict": "inconclusive", "max_distance": worst}
    kdim = k.algebra_dim if isinstance(k, LieGroupModel) else 0
    korder = k.order if isinstance(k, FiniteMatrixGroup) else None
    return {"face": list(face.vertex_ids), "dim": face.dim, "qperp_dim": qperp.dim,
            "K": {"algebra_dim": kdim, "order": korder},
            "forward": forward, "reverse": reverse}


def records_to_json(records) -> str:
    return json.dumps([r.to_dict() for r in records], indent=2, sort_keys=True)
