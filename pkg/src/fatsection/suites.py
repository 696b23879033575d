"""Property suites over registry entries.

Each suite returns a :class:`SuiteResult` whose JSON form depends only on
(suite, entry, seed, samples); wall-clock timings are kept on the object but
left out of the JSON.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .correspondence import (
    DescentError,
    InvariantBody,
    body_from_entry,
    conjecture_probe,
    exposedness_transfer,
    face_orbit_classes,
    lift_face,
    membership_E,
    sample_E,
    support_value,
    verify_orbit_bijection,
)
from .groups import FiniteMatrixGroup
from .polytope import group_action_on_faces, is_face, maximal_chain
from .registry import load_entry
from .sections import SectionError, fat_weyl_group, weyl_orbit_equals_section_slice
from .slices import chain_reduce

__all__ = ["SuiteResult", "SUITES", "run_suite", "DEFAULT_SEED"]

DEFAULT_SEED = 0xC0FFEE

PASS, FAIL, INDETERMINATE = "pass", "fail", "indeterminate"


def _status(ok: bool | None) -> str:
    if ok is None:
        return INDETERMINATE
    return PASS if ok else FAIL


def _clean(x):
    """Round floats so the JSON form is stable."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not np.isfinite(x):
            return str(x)
        return float(f"{x:.10g}") + 0.0
    return x


@dataclass
class SuiteResult:
    suite: str
    entry: str
    seed: int
    samples: int | None
    checks: dict = field(default_factory=dict)
    artifacts: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    def add(self, name: str, ok: bool | None, **details):
        if "status" in details:
            details["finding"] = details.pop("status")
        self.checks[name] = {"status": _status(ok), **details}

    @property
    def status(self) -> str:
        states = [c["status"] for c in self.checks.values()]
        if FAIL in states:
            return FAIL
        if INDETERMINATE in states or not states:
            return INDETERMINATE
        return PASS

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> dict:
        return _clean({"suite": self.suite, "entry": self.entry, "seed": self.seed,
                       "samples": self.samples, "status": self.status,
                       "checks": dict(sorted(self.checks.items())), "artifacts": self.artifacts})

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


# -- suites ---------------------------------------------------------------------

def _body(entry_name: str, seed: int, allow_disabled: bool = False) -> InvariantBody:
    return body_from_entry(load_entry(entry_name, seed=0, allow_disabled=allow_disabled), seed=seed)


def suite_restriction(r: SuiteResult, samples: int | None):
    """sigma(E) lies in P and points of P lie in E."""
    n = samples or 10000
    b = _body(r.entry, r.seed)
    z = sample_E(b, n, r.seed)
    outside = sum(not b.P.contains(b.chart(x), 1e-7) for x in z)
    r.add("projection_in_P", outside == 0, samples=n, outside=outside)
    rng = np.random.default_rng(r.seed + 1)
    va = b.P.vertex_array()
    missed = indeterminate = 0
    for _ in range(n):
        c = rng.dirichlet(np.ones(len(va)) * 0.5) @ va
        try:
            missed += not membership_E(b, b.lift_point(c))
        except DescentError:
            indeterminate += 1
    r.add("P_in_E", None if indeterminate else missed == 0, samples=n, rejected=missed,
          indeterminate=indeterminate)


def max_over_orbit(b: InvariantBody, u, rng, starts: int = 16, refine: int = 2) -> float:
    """sup <g.x, u> over G for the generating point x, by multi-start Newton ascent."""
    x = b.generators_in_V[0]
    g = b.group
    if isinstance(g, FiniteMatrixGroup):
        return float(max((m @ x) @ u for m in g.elements))
    if not g.algebra_basis:
        return float(x @ u)
    ys = [g.random_element(rng) @ x for _ in range(starts)]
    ys.sort(key=lambda y: -(y @ u))
    return max(_newton_ascent(g.algebra_basis, y, u) for y in ys[:refine])


def _newton_ascent(basis, y, u, max_iter: int = 100) -> float:
    """Local max of <exp(A) y, u> over the algebra, stepping from the current point."""
    f = y @ u
    for _ in range(max_iter):
        yy = np.array([a @ y for a in basis])
        grad = yy @ u
        if np.linalg.norm(grad) <= 1e-14 * (1 + abs(f)):
            break
        h = np.array([[u @ (a @ c) for c in yy] for a in basis])
        lam, vec = np.linalg.eigh((h + h.T) / 2)
        gc = vec.T @ grad
        step = vec @ np.where(lam < -1e-9, -gc / np.where(lam < -1e-9, lam, 1.0), gc)
        t = 1.0
        for _ in range(40):
            y_new = scipy.linalg.expm(sum(si * a for si, a in zip(t * step, basis))) @ y
            if y_new @ u >= f:
                break
            t /= 2
        else:
            break
        if y_new @ u - f <= 1e-16 * (1 + abs(f)):
            y, f = y_new, y_new @ u
            break
        y, f = y_new, y_new @ u
    return float(f)


def suite_support(r: SuiteResult, samples: int | None):
    """Support functions of sigma(E) and of P agree on directions in the section."""
    n = samples or 1000
    b = _body(r.entry, r.seed)
    rng = np.random.default_rng(r.seed)
    z = sample_E(b, 2000, r.seed + 1)
    worst = 0.0
    above = 0
    for _ in range(n):
        uv = b.section.random_section_point(rng)
        uc = b.chart(uv)
        hp = support_value(b, uc)
        he = max_over_orbit(b, uv, rng)
        worst = max(worst, abs(he - hp))
        above += float(np.max(z @ uv)) > hp + 1e-9 * (1 + abs(hp))
    r.add("support_functions_agree", worst <= 1e-6, directions=n, max_gap=worst)
    r.add("samples_below_support", above == 0, directions=n, exceeding=above)


def suite_correspondence(r: SuiteResult, samples: int | None):
    """Face classes of P modulo W against face classes of E modulo G."""
    t0 = time.perf_counter()
    entry = load_entry(r.entry, seed=0)
    b = body_from_entry(entry, seed=r.seed)
    recs = face_orbit_classes(b)
    expected = entry.expected.get("face_classes", [None])[0]
    r.add("class_count", None if expected is None else len(recs) == expected,
          classes=len(recs), expected=expected, dims=[x.q.dim for x in recs])
    v = verify_orbit_bijection(b, n_directions=samples or 100, seed=r.seed)
    r.add("injectivity", not v["injectivity"]["collisions"], **v["injectivity"])
    r.add("inclusion", v["inclusion"]["failures"] == 0 and v["inclusion"]["indeterminate"] == 0,
          **v["inclusion"])
    s = v["surjectivity"]
    r.add("surjectivity", s["unknown_faces"] == 0 and s["support_transfer_failures"] == 0
          and s["class_mismatches"] == 0 and s["indeterminate"] == 0, **s)
    r.artifacts.append({"classes": [x.to_dict() for x in recs]})
    r.timings["correspondence"] = time.perf_counter() - t0


def suite_exposedness(r: SuiteResult, samples: int | None):
    b = _body(r.entry, r.seed)
    res = exposedness_transfer(b, samples or 10000, r.seed)
    for c in res["classes"]:
        r.add(f"class_{c['class_id']:02d}", c["passed"], **{k: v for k, v in c.items() if k != "passed"})


def suite_chains(r: SuiteResult, samples: int | None):
    """Maximal chains from every vertex of P, exact."""
    b = _body(r.entry, r.seed)
    lat = b.lattice
    for i in range(len(b.P.vertices)):
        chain = maximal_chain(lat, (i,))
        faces = [lat.faces[j] for j in chain]
        graded = all(lat.dims[a] + 1 == lat.dims[c] for a, c in zip(chain, chain[1:]))
        nested = all(f < g for f, g in zip(faces, faces[1:]))
        all_faces = all(is_face(b.P, f, lat) for f in faces)
        r.add(f"vertex_{i:02d}", len(chain) == b.P.dim + 1 and graded and nested and all_faces,
              length=len(chain), dims=[lat.dims[j] for j in chain])


def suite_slices(r: SuiteResult, samples: int | None):
    b = _body(r.entry, r.seed)
    for rec in face_orbit_classes(b):
        c = chain_reduce(b, rec.q, n_projection=samples or 256, seed=r.seed)
        for lv_i, lv in enumerate(c.levels):
            ch = lv.checks
            r.add(f"class_{rec.class_id:02d}_level_{lv_i}", ch["passed"], **lv.to_dict())
        r.add(f"class_{rec.class_id:02d}_final", c.final["passed"], levels=len(c.levels), **c.final)


def suite_weyl(r: SuiteResult, samples: int | None):
    entry = load_entry(r.entry, seed=0)
    w = fat_weyl_group(entry.section, entry.report, seed=r.seed)
    for i, x in enumerate(entry.base_points):
        res = weyl_orbit_equals_section_slice(entry.section, w, x, samples or 256, r.seed)
        r.add(f"base_point_{i}", res["equal"], **res)
    expected = entry.expected.get("weyl_order")
    if expected is not None:
        r.add("weyl_order", w.order == expected, order=w.order, expected=expected)


def suite_trivial_section(r: SuiteResult, samples: int | None):
    """With the whole space as section: W = G, restriction and lift are identities."""
    entry = load_entry(r.entry, seed=0)
    if not entry.section.is_whole_space:
        r.add("whole_space", False, note="entry does not use the whole space as section")
        return
    b = body_from_entry(entry, seed=r.seed)
    g = b.group
    if not isinstance(g, FiniteMatrixGroup):
        r.add("finite_group", False)
        return
    wm = [np.array([[float(t) for t in row] for row in m]) for m in b.weyl.matrices]
    same = len(wm) == g.order and all(any(np.max(np.abs(a - m)) <= 1e-9 for m in g.elements) for a in wm)
    r.add("weyl_equals_group", same, weyl_order=len(wm), group_order=g.order)
    x = b.generators_in_V[0]
    orbit_pts = {tuple(np.round(m @ x, 9) + 0.0) for m in g.elements}
    verts = {tuple(np.round(v, 9) + 0.0) for v in b.P.vertex_array()}
    r.add("restriction_is_orbit_hull", orbit_pts == verts, vertices=len(verts))
    ok = True
    for rec in face_orbit_classes(b):
        lf = lift_face(b, rec.q, n_samples=samples or 50)
        qpts = {tuple(np.round(b.P.vertex_array()[i], 9) + 0.0) for i in rec.q.vertex_ids}
        ok &= all(lf.in_Q(b.chart(z)) for z in lf.samples)
        ok &= qpts <= {tuple(np.round(z, 9) + 0.0) for z in lf.samples}
    r.add("lift_is_identity", bool(ok))
    direct = sorted(sorted(o) for o in group_action_on_faces(b.lattice, g.elements))
    classes = sorted(sorted(rec.orbit) for rec in face_orbit_classes(b))
    r.add("classes_equal_lattice_orbits", direct == classes, classes=len(classes))


def suite_conjecture(r: SuiteResult, samples: int | None):
    """Report-only comparison of F_Q with K.Q; on polar entries both directions must hold."""
    entry = load_entry(r.entry, seed=0, allow_disabled=True)
    polar = bool(entry.expected.get("polar"))
    try:
        b = body_from_entry(entry, seed=r.seed)
    except SectionError as exc:
        r.add("probe", None if not polar else False, verdict="inconclusive", reason=str(exc))
        return
    for rec in face_orbit_classes(b):
        p = conjecture_probe(b, rec.q, n=samples or 20, seed=r.seed)
        verdicts = (p["forward"]["verdict"], p["reverse"]["verdict"])
        ok = all(v == "holds" for v in verdicts) if polar else True
        r.add(f"class_{rec.class_id:02d}", ok, **p)


SUITES = {
    "restriction": suite_restriction,
    "support-functions": suite_support,
    "face-correspondence": suite_correspondence,
    "exposedness": suite_exposedness,
    "face-chains": suite_chains,
    "slices": suite_slices,
    "weyl-orbits": suite_weyl,
    "trivial-section": suite_trivial_section,
    "conjecture": suite_conjecture,
}


def run_suite(name: str, entry: str, seed: int = DEFAULT_SEED, samples: int | None = None) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    r = SuiteResult(name, entry, seed, samples)
    t0 = time.perf_counter()
    SUITES[name](r, samples)
    r.timings["total"] = time.perf_counter() - t0
    return r
