"""Compact groups acting orthogonally on R^n.

Finite groups are stored by their full element list, closed from generators.
Connected groups are stored by a skew-symmetric basis of their Lie algebra
(already written in the representation) and sampled with matrix exponentials.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np
import scipy.linalg

from .linalg import (
    DEFAULT_POLICY,
    ScalarPolicy,
    Subspace,
    float_nullspace,
    float_rank,
    format_scalar,
    orthogonal_complement,
    to_fraction,
    to_fractions,
)

__all__ = [
    "FiniteMatrixGroup",
    "LieGroupModel",
    "GroupModel",
    "GroupError",
    "close_generators",
    "orbit",
    "sample_orbit",
    "tangent_space_of_orbit",
    "normal_space",
    "stabilizer",
    "pointwise_stabilizer",
    "max_orbit_dim",
    "is_regular",
    "restrict_to_subspace",
    "group_from_dict",
    "group_to_dict",
    "load_group",
]

REGULARITY_SAMPLES = 64


class GroupError(ValueError):
    pass


def _is_exact_entry(x) -> bool:
    return isinstance(x, (int, Fraction, str, np.integer))


def _exact_matrix(m) -> tuple:
    return tuple(tuple(to_fraction(x) for x in row) for row in m)


def _exact_mul(a, b) -> tuple:
    bt = tuple(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt) for row in a)


def _exact_apply(m, v) -> tuple:
    return tuple(sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in m)


@dataclass(frozen=True, eq=False)
class FiniteMatrixGroup:
    ambient_dim: int
    generators: tuple
    elements: tuple  # float matrices, lexicographically ordered
    exact_elements: tuple | None = None  # matching Fraction matrices, if exact
    policy: ScalarPolicy = DEFAULT_POLICY

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def exact(self) -> bool:
        return self.exact_elements is not None

    def __len__(self):
        return len(self.elements)

    def index_of(self, m) -> int:
        m = np.asarray(m, dtype=float)
        for i, e in enumerate(self.elements):
            if np.max(np.abs(e - m)) <= self.policy.dedupe_tol:
                return i
        raise KeyError("matrix is not an element of the group")

    def random_element(self, rng) -> np.ndarray:
        return self.elements[int(rng.integers(len(self.elements)))]


@dataclass(frozen=True, eq=False)
class LieGroupModel:
    ambient_dim: int
    algebra_basis: tuple  # skew-symmetric matrices
    rng_seed: int = 0
    policy: ScalarPolicy = DEFAULT_POLICY
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for x in self.algebra_basis:
            if x.shape != (self.ambient_dim, self.ambient_dim):
                raise GroupError("algebra basis matrix has wrong shape")
            if np.max(np.abs(x + x.T), initial=0.0) > self.policy.abs_tol * max(1.0, np.max(np.abs(x))):
                raise GroupError("algebra basis matrix is not skew-symmetric")
        if self.algebra_basis:
            flat = np.array([x.ravel() for x in self.algebra_basis])
            if float_rank(flat, self.policy.abs_tol) < len(self.algebra_basis):
                raise GroupError("algebra basis is linearly dependent")

    @property
    def algebra_dim(self) -> int:
        return len(self.algebra_basis)

    def algebra_element(self, t) -> np.ndarray:
        out = np.zeros((self.ambient_dim, self.ambient_dim))
        for ti, x in zip(t, self.algebra_basis):
            out += ti * x
        return out

    def element(self, t) -> np.ndarray:
        """exp(sum t_i X_i); scipy uses scaling and squaring with Pade."""
        if not self.algebra_basis:
            return np.eye(self.ambient_dim)
        return scipy.linalg.expm(self.algebra_element(t))

    def random_coefficients(self, rng) -> np.ndarray:
        return rng.uniform(-np.pi, np.pi, size=self.algebra_dim)

    def random_element(self, rng) -> np.ndarray:
        return self.element(self.random_coefficients(rng))


GroupModel = Union[FiniteMatrixGroup, LieGroupModel]


def _lex_key(m) -> tuple:
    return tuple(np.round(np.asarray(m, dtype=float).ravel(), 12))


def close_generators(gens, cap: int = 100000, policy: ScalarPolicy = DEFAULT_POLICY) -> FiniteMatrixGroup:
    """Enumerate the finite group generated by orthogonal ``gens``."""
    gens = [g for g in gens]
    if not gens:
        raise GroupError("at least one generator required")
    n = len(gens[0])
    exact = all(_is_exact_entry(x) for g in gens for row in g for x in row)
    for g in gens:
        a = np.asarray([[float(to_fraction(x)) if _is_exact_entry(x) else float(x) for x in row] for row in g])
        if a.shape != (n, n):
            raise GroupError("generator has wrong shape")
        if np.max(np.abs(a.T @ a - np.eye(n))) > max(policy.abs_tol, 1e-12) * 10:
            raise GroupError("generator is not orthogonal")
    ident = np.eye(n)
    if exact:
        egens = [_exact_matrix(g) for g in gens]
        for g in egens:
            if _exact_mul(tuple(zip(*g)), g) != _exact_matrix(np.eye(n, dtype=int)):
                raise GroupError("generator is not orthogonal")
        eid = _exact_matrix(np.eye(n, dtype=int))
        seen = {eid}
        frontier = [eid]
        while frontier:
            nxt = []
            for h in frontier:
                for g in egens:
                    p = _exact_mul(g, h)
                    if p not in seen:
                        seen.add(p)
                        nxt.append(p)
                        if len(seen) > cap:
                            raise GroupError(f"closure exceeds cap {cap}")
            frontier = nxt
        ex = sorted(seen)
        fl = tuple(np.array([[float(x) for x in row] for row in m]) for m in ex)
        order = sorted(range(len(ex)), key=lambda i: (_lex_key(fl[i]), ex[i]))
        return FiniteMatrixGroup(n, tuple(egens), tuple(fl[i] for i in order),
                                 tuple(ex[i] for i in order), policy)
    fgens = [np.asarray(g, dtype=float) for g in gens]
    tol = policy.dedupe_tol

    def key(m):
        return tuple(np.round(m.ravel() / (100 * tol)).astype(np.int64))

    table = {key(ident): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for h in frontier:
            for g in fgens:
                p = g @ h
                k = key(p)
                if k in table:
                    continue
                if any(np.max(np.abs(p - q)) <= tol for q in _near(table, k)):
                    continue
                table[k] = p
                nxt.append(p)
                if len(table) > cap:
                    raise GroupError(f"closure exceeds cap {cap}")
        frontier = nxt
    elems = sorted(table.values(), key=_lex_key)
    return FiniteMatrixGroup(n, tuple(fgens), tuple(elems), None, policy)


def _near(table, k):
    # rounding boundary guard: compare against entries differing by one unit
    out = []
    for kk, v in table.items():
        if max(abs(a - b) for a, b in zip(kk, k)) <= 1:
            out.append(v)
    return out


# -- orbits ------------------------------------------------------------------

def orbit(g: GroupModel, x) -> list:
    """The orbit of ``x`` under a finite group, deduplicated and sorted."""
    if isinstance(g, LieGroupModel):
        raise GroupError("orbit() needs a finite group; use sample_orbit for Lie models")
    if len(x) != g.ambient_dim:
        raise ValueError("dimension mismatch")
    if g.exact and all(_is_exact_entry(t) for t in x):
        xv = to_fractions(x)
        return sorted({_exact_apply(m, xv) for m in g.exact_elements})
    xv = np.asarray(x, dtype=float)
    pts: list[np.ndarray] = []
    for m in g.elements:
        y = m @ xv
        if not any(np.max(np.abs(y - q)) <= g.policy.dedupe_tol for q in pts):
            pts.append(y)
    return sorted(pts, key=lambda p: tuple(p))


def sample_orbit(g: LieGroupModel, x, n: int, seed: int | None = None) -> np.ndarray:
    """``n`` seeded points exp(sum t_i X_i) x with t_i uniform in [-pi, pi]."""
    if n < 1:
        raise ValueError("n must be positive")
    rng = np.random.default_rng(g.rng_seed if seed is None else seed)
    xv = np.asarray(x, dtype=float)
    return np.array([g.random_element(rng) @ xv for _ in range(n)])


def tangent_space_of_orbit(g: GroupModel, p) -> Subspace:
    n = g.ambient_dim
    if isinstance(g, FiniteMatrixGroup) or not g.algebra_basis:
        return Subspace.zero(n)
    pv = np.asarray(p, dtype=float)
    return Subspace.span([x @ pv for x in g.algebra_basis], n, g.policy)


def normal_space(g: GroupModel, p) -> Subspace:
    t = tangent_space_of_orbit(g, p)
    nu = orthogonal_complement(t, Subspace.full(g.ambient_dim), g.policy)
    if isinstance(g, LieGroupModel) and g.algebra_basis:
        pv = np.asarray(p, dtype=float)
        # skew generators make p orthogonal to its own tangent space
        if not nu.contains(pv, 1e-8):
            raise ArithmeticError("point is not orthogonal to its orbit tangent space")
    return nu


def _kernel_algebra(g: LieGroupModel, vectors) -> LieGroupModel:
    if not g.algebra_basis or not vectors:
        return g
    vs = [np.asarray(v, dtype=float) for v in vectors]
    # coefficient map c -> (sum c_i X_i v)_v, stacked
    cols = [np.concatenate([x @ v for v in vs]) for x in g.algebra_basis]
    m = np.array(cols).T
    scale = max(1.0, float(np.max(np.abs(m))))
    if np.max(np.abs(m)) <= g.policy.abs_tol * scale:
        return g
    ker = float_nullspace(m, g.policy.abs_tol, ncols=len(g.algebra_basis))
    basis = tuple(g.algebra_element(c) for c in ker.T)
    return LieGroupModel(g.ambient_dim, basis, g.rng_seed, g.policy)


def stabilizer(g: GroupModel, p) -> GroupModel:
    """Subgroup fixing ``p`` (for Lie models: its identity component)."""
    if isinstance(g, FiniteMatrixGroup):
        return _filter_finite(g, [p])
    return _kernel_algebra(g, [p])


def pointwise_stabilizer(g: GroupModel, s: Subspace) -> GroupModel:
    vectors = [s.basis[:, i] for i in range(s.dim)]
    if s.exact:
        vectors = list(s.rational_basis)
    if isinstance(g, FiniteMatrixGroup):
        return _filter_finite(g, vectors)
    return _kernel_algebra(g, [np.asarray(v, dtype=float) for v in vectors])


def _filter_finite(g: FiniteMatrixGroup, vectors) -> FiniteMatrixGroup:
    keep = []
    for i, m in enumerate(g.elements):
        ok = True
        for v in vectors:
            if g.exact and all(_is_exact_entry(t) for t in v):
                vv = to_fractions(v)
                ok = _exact_apply(g.exact_elements[i], vv) == vv
            else:
                vv = np.asarray(v, dtype=float)
                ok = np.max(np.abs(m @ vv - vv), initial=0.0) <= g.policy.dedupe_tol * max(1.0, np.max(np.abs(vv), initial=0.0))
            if not ok:
                break
        if ok:
            keep.append(i)
    ex = tuple(g.exact_elements[i] for i in keep) if g.exact else None
    return FiniteMatrixGroup(g.ambient_dim, tuple(g.elements[i] for i in keep),
                             tuple(g.elements[i] for i in keep), ex, g.policy)


# -- regularity --------------------------------------------------------------

def max_orbit_dim(g: GroupModel, n: int = REGULARITY_SAMPLES, seed: int = 0) -> int:
    if isinstance(g, FiniteMatrixGroup) or not g.algebra_basis:
        return 0
    key = ("max_orbit_dim", n, seed)
    if key not in g._cache:
        rng = np.random.default_rng(seed)
        g._cache[key] = max(tangent_space_of_orbit(g, rng.standard_normal(g.ambient_dim)).dim
                            for _ in range(n))
    return g._cache[key]


def is_regular(g: GroupModel, p) -> bool:
    """Rank surrogate: the orbit through ``p`` has maximal dimension."""
    return tangent_space_of_orbit(g, p).dim == max_orbit_dim(g)


# -- restriction to invariant subspaces --------------------------------------

def restrict_to_subspace(g: GroupModel, s: Subspace, tol: float = 1e-8) -> GroupModel:
    """The action of ``g`` on an invariant subspace, in its orthonormal coordinates."""
    b = s.basis
    if isinstance(g, FiniteMatrixGroup):
        mats = []
        for m in g.elements:
            r = b.T @ m @ b
            if np.max(np.abs(m @ b - b @ r), initial=0.0) > tol:
                raise GroupError("subspace is not invariant")
            mats.append(r)
        return close_generators(mats, policy=g.policy)
    red = []
    for x in g.algebra_basis:
        r = b.T @ x @ b
        if np.max(np.abs(x @ b - b @ r), initial=0.0) > tol:
            raise GroupError("subspace is not invariant")
        red.append(r)
    if not red or s.dim == 0:
        return LieGroupModel(s.dim, (), g.rng_seed, g.policy)
    flat = np.array([r.ravel() for r in red])
    u, sv, vt = np.linalg.svd(flat, full_matrices=False)
    rank = 0 if sv[0] <= g.policy.abs_tol else int(np.sum(sv > g.policy.abs_tol * sv[0]))
    basis = []
    for i in range(rank):
        r = vt[i].reshape(s.dim, s.dim)
        basis.append((r - r.T) / 2)
    return LieGroupModel(s.dim, tuple(basis), g.rng_seed, g.policy)


# -- JSON --------------------------------------------------------------------

def _parse_matrix(rows, n):
    out = []
    for row in rows:
        out.append([Fraction(x) if isinstance(x, str) else x for x in row])
    if len(out) != n or any(len(r) != n for r in out):
        raise GroupError(f"matrix is not {n}x{n}")
    return out


def group_from_dict(d: dict, policy: ScalarPolicy = DEFAULT_POLICY) -> GroupModel:
    """Build a group from {"dim", "kind", "generators" | "algebra_basis"}."""
    try:
        n = int(d["dim"])
        kind = d["kind"]
    except (KeyError, TypeError, ValueError) as exc:
        raise GroupError(f"malformed group spec: {exc}") from exc
    if kind == "finite":
        gens = [_parse_matrix(m, n) for m in d["generators"]]
        return close_generators(gens, d.get("cap", 100000), policy)
    if kind == "lie":
        basis = tuple(np.array(_parse_matrix(m, n), dtype=float) for m in d["algebra_basis"])
        return LieGroupModel(n, basis, int(d.get("seed", 0)), policy)
    raise GroupError(f"unknown group kind {kind!r}")


def group_to_dict(g: GroupModel) -> dict:
    if isinstance(g, FiniteMatrixGroup):
        gens = [[[format_scalar(to_fraction(x)) if g.exact else float(x) for x in row] for row in m]
                for m in g.generators]
        return {"dim": g.ambient_dim, "kind": "finite", "generators": gens}
    return {"dim": g.ambient_dim, "kind": "lie",
            "algebra_basis": [x.tolist() for x in g.algebra_basis], "seed": g.rng_seed}


def load_group(path) -> GroupModel:
    with open(path) as fh:
        return group_from_dict(json.load(fh))
