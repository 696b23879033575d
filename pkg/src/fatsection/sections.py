"""Fat-section candidates: descent into the section, axiom checks, and the
fat Weyl group acting on section coordinates.

Points of a section are handled in *chart coordinates*: a partial isometry
``C`` (``m x n``) whose restriction to the section is an isometry onto its
image and which vanishes on the orthogonal complement.  For a plain section
``C`` is the transpose of its orthonormal basis; registry entries may use a
more readable chart (e.g. the diagonal entries of a traceless matrix), which
keeps orbit polytopes rational.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.linalg
import scipy.optimize

from .groups import (
    FiniteMatrixGroup,
    GroupError,
    GroupModel,
    LieGroupModel,
    close_generators,
    is_regular,
    normal_space,
)
from .linalg import Subspace, float_nullspace, to_fraction, to_fractions

__all__ = [
    "SectionError",
    "DescentError",
    "SectionCandidate",
    "Descent",
    "descend",
    "AxiomResult",
    "AxiomReport",
    "check_axiom_A",
    "check_axiom_B",
    "check_axiom_C",
    "check_axioms",
    "FatWeylGroup",
    "fat_weyl_group",
    "weyl_orbit_equals_section_slice",
]

AXIOM_SAMPLES = 256
DESCENT_STARTS = 16
DESCENT_ITERATIONS = 500
DESCENT_TOL = 1e-9


class SectionError(ValueError):
    pass


class DescentError(RuntimeError):
    """No start of the descent reached the section; ``residual`` is the best seen."""

    def __init__(self, msg, residual=float("nan")):
        super().__init__(msg)
        self.residual = residual


@dataclass(frozen=True, eq=False)
class SectionCandidate:
    group: GroupModel
    sigma: Subspace
    chart: np.ndarray | None = None
    chart_exact: tuple | None = None

    def __post_init__(self):
        n = self.group.ambient_dim
        if self.sigma.ambient_dim != n:
            raise SectionError("section and group act on different spaces")
        if self.chart_exact is not None and self.chart is None:
            object.__setattr__(self, "chart",
                               np.array([[float(x) for x in row] for row in self.chart_exact]).reshape(-1, n))
        if self.chart is None:
            object.__setattr__(self, "chart", self.sigma.basis.T.copy())
        c = self.chart
        if c.shape[1] != n:
            raise SectionError("chart has the wrong number of columns")
        if np.max(np.abs(c.T @ c - self.sigma.projector), initial=0.0) > 1e-9:
            raise SectionError("chart is not an isometry of the section")

    @property
    def ambient_dim(self) -> int:
        return self.group.ambient_dim

    @property
    def chart_dim(self) -> int:
        return self.chart.shape[0]

    @property
    def is_whole_space(self) -> bool:
        return self.sigma.dim == self.ambient_dim

    def to_chart(self, x) -> np.ndarray:
        return self.chart @ np.asarray(x, dtype=float)

    def to_chart_exact(self, x) -> tuple:
        if self.chart_exact is None:
            raise SectionError("section has no exact chart")
        x = to_fractions(x)
        return tuple(sum((to_fraction(a) * b for a, b in zip(row, x)), Fraction(0)) for row in self.chart_exact)

    def from_chart(self, c) -> np.ndarray:
        return self.chart.T @ np.asarray([float(t) for t in c])

    def from_chart_exact(self, c) -> tuple:
        if self.chart_exact is None:
            raise SectionError("section has no exact chart")
        c = to_fractions(c)
        cols = list(zip(*self.chart_exact))
        return tuple(sum((to_fraction(a) * b for a, b in zip(col, c)), Fraction(0)) for col in cols)

    def residual(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return float(np.linalg.norm(x - self.sigma.projector @ x))

    def random_point(self, rng) -> np.ndarray:
        return rng.standard_normal(self.ambient_dim)

    def random_section_point(self, rng) -> np.ndarray:
        return self.sigma.basis @ rng.standard_normal(self.sigma.dim)

    def chart_action(self, m) -> np.ndarray:
        """Matrix of a section-preserving ``m`` in chart coordinates, extended
        by the identity off the chart image."""
        c = self.chart
        return c @ m @ c.T + (np.eye(self.chart_dim) - c @ c.T)

    def with_group(self, group: GroupModel) -> "SectionCandidate":
        return SectionCandidate(group, self.sigma, self.chart, self.chart_exact)


# -- descent -------------------------------------------------------------------

@dataclass(frozen=True)
class Descent:
    point: np.ndarray
    element: np.ndarray
    residual: float
    start: int


def descend(c: SectionCandidate, x, seed: int = 0, starts: int = DESCENT_STARTS,
            max_iter: int = DESCENT_ITERATIONS, tol: float = DESCENT_TOL) -> Descent:
    """Find y = g.x in the section.

    Finite groups: the lexicographically first orbit point in the section.
    Lie models: Gauss-Newton on the algebra coordinates of g, minimizing the
    squared distance of g.x to the section, with backtracking and multi-start.
    """
    x = np.asarray(x, dtype=float)
    n = c.ambient_dim
    if x.shape != (n,):
        raise ValueError("dimension mismatch")
    thresh = tol * (1 + np.linalg.norm(x))
    g = c.group
    if c.residual(x) <= thresh:
        return Descent(x.copy(), np.eye(n), c.residual(x), 0)
    if isinstance(g, FiniteMatrixGroup):
        hits = []
        best = np.inf
        for m in g.elements:
            y = m @ x
            r = c.residual(y)
            best = min(best, r)
            if r <= thresh:
                hits.append((tuple(np.round(c.to_chart(y), 12)), y, m, r))
        if not hits:
            raise DescentError("orbit misses the section", best)
        hits.sort(key=lambda h: h[0])
        _, y, m, r = hits[0]
        return Descent(y, m, r, 0)
    if not g.algebra_basis:
        raise DescentError("trivial group and point off the section", c.residual(x))
    proj_perp = np.eye(n) - c.sigma.projector
    rng = np.random.default_rng(seed)
    best = np.inf
    for s in range(starts):
        m = np.eye(n) if s == 0 else g.random_element(rng)
        m, r = _gauss_newton(g, proj_perp, m, x, max_iter, thresh)
        best = min(best, r)
        if r <= thresh:
            return Descent(m @ x, m, r, s)
    raise DescentError(f"descent failed on all {starts} starts", best)


def _gauss_newton(g: LieGroupModel, proj_perp, m, x, max_iter, thresh):
    y = m @ x
    r = proj_perp @ y
    rn = np.linalg.norm(r)
    target = min(thresh, 1e-3 * thresh + 1e-14 * (1 + np.linalg.norm(x)))
    for _ in range(max_iter):
        if rn <= target:
            break
        jac = np.array([proj_perp @ (a @ y) for a in g.algebra_basis]).T
        step, *_ = np.linalg.lstsq(jac, -r, rcond=1e-12)
        improved = False
        for direction in (step, -jac.T @ r):
            alpha = 1.0
            for _ in range(40):
                cand = g.element(alpha * direction) @ m
                yc = cand @ x
                rc = proj_perp @ yc
                rcn = np.linalg.norm(rc)
                if rcn < rn:
                    m, y, r, rn = cand, yc, rc, rcn
                    improved = True
                    break
                alpha *= 0.5
            if improved:
                break
        if not improved:
            break
    return m, rn


# -- axioms --------------------------------------------------------------------

@dataclass
class AxiomResult:
    passed: bool
    stats: dict = field(default_factory=dict)
    witness: dict | None = None

    def to_dict(self) -> dict:
        d = {"passed": self.passed, "stats": self.stats}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


@dataclass
class AxiomReport:
    axiom_a: AxiomResult
    axiom_b: AxiomResult
    axiom_c: AxiomResult
    n_samples: int
    seed: int

    @property
    def passed(self) -> bool:
        return self.axiom_a.passed and self.axiom_b.passed and self.axiom_c.passed

    @property
    def k(self) -> int | None:
        return self.axiom_b.stats.get("k") if self.axiom_b.passed else None

    def to_dict(self) -> dict:
        return {
            "status": "numerically validated" if self.passed else "failed",
            "passed": self.passed,
            "k": self.k,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "A": self.axiom_a.to_dict(),
            "B": self.axiom_b.to_dict(),
            "C": self.axiom_c.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _vec(v) -> list:
    return [round(float(t), 12) for t in v]


def check_axiom_A(c: SectionCandidate, n: int = AXIOM_SAMPLES, seed: int = 0) -> AxiomResult:
    """Every sampled orbit meets the section (descent residual <= 1e-6)."""
    if n < 1:
        raise ValueError("n must be positive")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(n):
        x = c.random_point(rng)
        try:
            d = descend(c, x, seed=seed + i)
            worst = max(worst, d.residual)
            ok = d.residual <= 1e-6
            res = d.residual
        except DescentError as exc:
            ok, res = exc.residual <= 1e-6, exc.residual
            worst = max(worst, res)
        if not ok:
            return AxiomResult(False, {"checked": i + 1, "max_residual": float(worst)},
                               {"x": _vec(x), "residual": float(res)})
    return AxiomResult(True, {"checked": n, "max_residual": float(worst)})


def _regular_section_point(c: SectionCandidate, rng, tries: int = 20):
    for _ in range(tries):
        p = c.random_section_point(rng)
        if is_regular(c.group, p):
            return p
    return None


def check_axiom_B(c: SectionCandidate, n: int = AXIOM_SAMPLES, seed: int = 0) -> AxiomResult:
    """Normal spaces at regular section points lie in the section; k = codimension."""
    if n < 1:
        raise ValueError("n must be positive")
    rng = np.random.default_rng(seed)
    ks = set()
    worst = 0.0
    for i in range(n):
        p = _regular_section_point(c, rng)
        if p is None:
            return AxiomResult(False, {"checked": i, "reason": "no regular point found in section"},
                               {"reason": "no regular point found in section"})
        nu = normal_space(c.group, p)
        for j in range(nu.dim):
            b = nu.basis[:, j]
            r = c.residual(b)
            worst = max(worst, r)
            if r > 1e-8:
                return AxiomResult(False, {"checked": i + 1, "max_residual": worst},
                                   {"p": _vec(p), "normal_vector": _vec(b), "residual": r})
        ks.add(c.sigma.dim - nu.dim)
        if len(ks) > 1:
            return AxiomResult(False, {"checked": i + 1, "k_values": sorted(ks)},
                               {"p": _vec(p), "reason": "codimension varies"})
    return AxiomResult(True, {"checked": n, "k": ks.pop(), "max_residual": float(worst)})


def _preserves(c: SectionCandidate, m, tol: float) -> tuple[bool, float]:
    img = m @ c.sigma.basis
    r = float(np.max(np.linalg.norm(img - c.sigma.projector @ img, axis=0), initial=0.0))
    return r <= tol, r


def check_axiom_C(c: SectionCandidate, n: int = AXIOM_SAMPLES, seed: int = 0) -> AxiomResult:
    """Elements moving a regular section point into the section preserve it."""
    if n < 1:
        raise ValueError("n must be positive")
    if c.is_whole_space:
        return AxiomResult(True, {"checked": 0, "trivial": True})
    rng = np.random.default_rng(seed)
    tested = 0
    g = c.group
    for i in range(n):
        p = _regular_section_point(c, rng)
        if p is None:
            return AxiomResult(False, {"checked": i, "reason": "no regular point found in section"},
                               {"reason": "no regular point found in section"})
        scale = 1 + np.linalg.norm(p)
        if isinstance(g, FiniteMatrixGroup):
            candidates = [m for m in g.elements if c.residual(m @ p) <= 1e-8 * scale]
        else:
            h = g.random_element(rng)
            try:
                d = descend(c, h @ p, seed=seed + i)
            except DescentError:
                continue
            candidates = [d.element @ h]
        for m in candidates:
            tested += 1
            ok, r = _preserves(c, m, 1e-6)
            if not ok:
                return AxiomResult(False, {"checked": i + 1, "tested_pairs": tested},
                                   {"p": _vec(p), "element": np.round(m, 12).tolist(), "residual": r})
    return AxiomResult(True, {"checked": n, "tested_pairs": tested})


def check_axioms(c: SectionCandidate, n: int = AXIOM_SAMPLES, seed: int = 0) -> AxiomReport:
    return AxiomReport(check_axiom_A(c, n, seed), check_axiom_B(c, n, seed + 1),
                       check_axiom_C(c, n, seed + 2), n, seed)


# -- fat Weyl group ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FatWeylGroup:
    """Action of N_G(sigma)/Z_G(sigma) on chart coordinates.

    ``group`` is set when the quotient is finite.  For positive-dimensional
    quotients only sampled action matrices and the restricted normalizer
    algebra (in the section's orthonormal coordinates) are kept.
    """

    section: SectionCandidate
    group: FiniteMatrixGroup | None
    samples: tuple
    algebra: tuple = ()
    lifts: tuple = ()  # representatives in N_G(sigma), matching ``samples``

    @property
    def finite(self) -> bool:
        return self.group is not None

    @property
    def order(self) -> int | None:
        return self.group.order if self.group is not None else None

    @property
    def matrices(self) -> tuple:
        if self.group is None:
            return self.samples
        if self.group.exact:
            return self.group.exact_elements
        return self.group.elements

    def orbit(self, x) -> list:
        """W.x in chart coordinates (exact when possible)."""
        if self.group is None:
            raise SectionError("fat Weyl group is not finite")
        exact = self.group.exact and all(isinstance(t, (int, Fraction)) for t in x)
        if exact:
            xv = to_fractions(x)
            return sorted({tuple(sum((a * b for a, b in zip(row, xv)), Fraction(0)) for row in m)
                           for m in self.group.exact_elements})
        xv = np.array([float(t) for t in x])
        pts = []
        for m in self.group.elements:
            y = m @ xv
            if not any(np.max(np.abs(y - q)) <= 1e-8 for q in pts):
                pts.append(y)
        return sorted(pts, key=tuple)


def _snap(m, den: int = 1000, tol: float = 1e-9):
    out = []
    for row in m:
        r = []
        for x in row:
            f = Fraction(float(x)).limit_denominator(den)
            if abs(float(f) - x) > tol:
                return None
            r.append(f)
        out.append(r)
    return out


def _normalizer_algebra(c: SectionCandidate) -> tuple:
    g = c.group
    if not isinstance(g, LieGroupModel) or not g.algebra_basis:
        return ()
    b = c.sigma.basis
    perp = np.eye(c.ambient_dim) - c.sigma.projector
    cols = [(perp @ x @ b).ravel() for x in g.algebra_basis]
    ker = float_nullspace(np.array(cols).T, 1e-9, ncols=len(cols))
    out = []
    for coef in ker.T:
        r = b.T @ g.algebra_element(coef) @ b
        if np.max(np.abs(r), initial=0.0) > 1e-9:
            out.append(r)
    return tuple(out)


def fat_weyl_group(c: SectionCandidate, report: AxiomReport | None, n: int = 64, seed: int = 0,
                   cap: int = 5000) -> FatWeylGroup:
    if report is None or not report.passed:
        raise SectionError("fat Weyl group requested for a section whose axioms are not validated")
    g = c.group
    if isinstance(g, FiniteMatrixGroup):
        mats, lifts = [], []
        for i, m in enumerate(g.elements):
            ok, _ = _preserves(c, m, 1e-9)
            if not ok:
                continue
            lifts.append(m)
            if g.exact and c.chart_exact is not None:
                mats.append(_exact_chart_action(c, g.exact_elements[i]))
            else:
                mats.append(c.chart_action(m))
        return FatWeylGroup(c, close_generators(mats, cap=cap), tuple(np.asarray(_as_float(m)) for m in mats),
                            (), tuple(lifts))
    rng = np.random.default_rng(seed)
    x = _regular_section_point(c, rng)
    if x is None:
        raise SectionError("no regular section point for the Weyl group construction")
    mats, lifts = [], []
    for i in range(n):
        h = g.random_element(rng)
        try:
            d = descend(c, h @ x, seed=seed + i)
        except DescentError:
            continue
        m = d.element @ h
        ok, _ = _preserves(c, m, 1e-6)
        if not ok:
            continue
        a = c.chart_action(m)
        if not any(np.max(np.abs(a - q)) <= 1e-7 for q in mats):
            mats.append(a)
            lifts.append(m)
    algebra = _normalizer_algebra(c)
    order = sorted(range(len(mats)), key=lambda i: tuple(np.round(mats[i].ravel(), 9)))
    mats = [mats[i] for i in order]
    lifts = [lifts[i] for i in order]
    if algebra:
        return FatWeylGroup(c, None, tuple(mats), algebra, tuple(lifts))
    snapped = [_snap(m) for m in mats]
    gens = snapped if all(s is not None for s in snapped) else mats
    try:
        grp = close_generators(gens, cap=cap)
    except GroupError:
        return FatWeylGroup(c, None, tuple(mats), algebra, tuple(lifts))
    return FatWeylGroup(c, grp, tuple(mats), algebra, tuple(lifts))


def _as_float(m):
    return [[float(x) for x in row] for row in m]


def _exact_chart_action(c: SectionCandidate, m) -> list:
    ce = [[to_fraction(x) for x in row] for row in c.chart_exact]
    k = len(ce)
    n = len(m)
    cm = [[sum((ce[i][a] * m[a][b] for a in range(n)), Fraction(0)) for b in range(n)] for i in range(k)]
    out = []
    for i in range(k):
        row = []
        for j in range(k):
            v = sum((cm[i][b] * ce[j][b] for b in range(n)), Fraction(0))
            cc = sum((ce[i][b] * ce[j][b] for b in range(n)), Fraction(0))
            row.append(v + (Fraction(int(i == j)) - cc))
        out.append(row)
    return out


# -- W.x versus (G.x) cap sigma ------------------------------------------------

def weyl_orbit_equals_section_slice(c: SectionCandidate, w: FatWeylGroup, x, n: int = AXIOM_SAMPLES,
                                    seed: int = 0, tol: float = 1e-6) -> dict:
    """Compare W.x with the points of G.x lying in the section (chart coordinates)."""
    g = c.group
    if isinstance(g, FiniteMatrixGroup):
        exact = (g.exact and c.chart_exact is not None and w.finite and w.group.exact
                 and all(isinstance(t, (int, Fraction)) for t in x))
        if exact:
            xv = c.from_chart_exact(x)
            slice_pts = set()
            for m in g.exact_elements:
                y = tuple(sum((a * b for a, b in zip(row, xv)), Fraction(0)) for row in m)
                if c.from_chart_exact(c.to_chart_exact(y)) == y:
                    slice_pts.add(c.to_chart_exact(y))
            wx = set(w.orbit(x))
            return {"mode": "exact", "equal": slice_pts == wx, "slice_size": len(slice_pts),
                    "weyl_orbit_size": len(wx)}
        xv = c.from_chart(x)
        slice_pts = []
        for m in g.elements:
            y = m @ xv
            if c.residual(y) <= 1e-9 * (1 + np.linalg.norm(y)):
                cy = c.to_chart(y)
                if not any(np.max(np.abs(cy - q)) <= 1e-9 for q in slice_pts):
                    slice_pts.append(cy)
        wx = [np.array([float(t) for t in p]) for p in w.orbit(x)]
        fwd = all(any(np.max(np.abs(p - q)) <= 1e-9 for q in wx) for p in slice_pts)
        bwd = all(any(np.max(np.abs(p - q)) <= 1e-9 for q in slice_pts) for p in wx)
        return {"mode": "float-dedupe", "equal": fwd and bwd and len(slice_pts) == len(wx),
                "slice_size": len(slice_pts), "weyl_orbit_size": len(wx)}
    rng = np.random.default_rng(seed)
    xv = c.from_chart(x)
    xc = np.array([float(t) for t in x])
    found = []
    failures = 0
    for i in range(n):
        h = g.random_element(rng)
        try:
            d = descend(c, h @ xv, seed=seed + i)
        except DescentError:
            failures += 1
            continue
        found.append(c.to_chart(d.point))
    if w.finite:
        wx = [np.array([float(t) for t in p]) for p in w.orbit(x)]
        fwd = [min(np.linalg.norm(p - q) for q in wx) for p in found]
        bwd = [min(np.linalg.norm(q - p) for p in found) if found else np.inf for q in wx]
    else:
        fwd = [_distance_to_lie_orbit(c, w, xc, p) for p in found]
        # converse: every sampled W image is realized by an element of G
        bwd = [float(np.linalg.norm(c.to_chart(lift @ xv) - a @ xc)) for a, lift in zip(w.samples, w.lifts)]
    max_fwd = float(max(fwd, default=0.0))
    max_bwd = float(max(bwd, default=0.0))
    return {"mode": "sampled", "equal": failures == 0 and max_fwd <= tol and max_bwd <= tol,
            "descents": len(found), "descent_failures": failures,
            "max_slice_to_weyl": max_fwd, "max_weyl_to_slice": max_bwd}


def _distance_to_lie_orbit(c: SectionCandidate, w: FatWeylGroup, x, y) -> float:
    """min over sampled components and normalizer algebra of |a exp(A) x - y|."""
    b = c.sigma.basis
    xs = b.T @ c.from_chart(x)
    ys = b.T @ c.from_chart(y)
    best = np.inf
    for lift in w.lifts:
        base = b.T @ lift @ b

        def resid(s):
            a = np.zeros_like(base)
            for si, ai in zip(s, w.algebra):
                a += si * ai
            return scipy.linalg.expm(a) @ base @ xs - ys

        for s0 in (np.zeros(len(w.algebra)), np.full(len(w.algebra), np.pi / 2)):
            sol = scipy.optimize.least_squares(resid, s0, xtol=1e-14, ftol=1e-14, gtol=1e-14)
            best = min(best, float(np.linalg.norm(sol.fun)))
    return best
