"""Scalar policies, exact rational helpers and subspaces.

Two backends live side by side: exact rationals (``fractions.Fraction``) for
everything combinatorial, and numpy floats for everything produced by Lie
exponentials.  A :class:`Subspace` carries either an orthonormal float basis
or a rational basis with its Gram matrix cached.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

__all__ = [
    "ScalarPolicy",
    "DEFAULT_POLICY",
    "Subspace",
    "to_fraction",
    "to_fractions",
    "format_scalar",
    "parse_scalar",
    "rref",
    "exact_rank",
    "exact_nullspace",
    "exact_solve",
    "float_rank",
    "float_nullspace",
    "project",
    "intersect",
    "orthogonal_complement",
]


@dataclass(frozen=True)
class ScalarPolicy:
    mode: str = "float"
    abs_tol: float = 1e-9
    dedupe_tol: float = 1e-8

    def __post_init__(self):
        if self.mode not in ("exact", "float"):
            raise ValueError(f"unknown scalar mode {self.mode!r}")

    @property
    def exact(self) -> bool:
        return self.mode == "exact"

    def eq(self, a, b) -> bool:
        if self.exact:
            return a == b
        return abs(a - b) <= self.abs_tol


DEFAULT_POLICY = ScalarPolicy()
EXACT_POLICY = ScalarPolicy(mode="exact")


# -- scalars ---------------------------------------------------------------

def to_fraction(x) -> Fraction:
    """Exact rational value of ``x``; floats convert to their binary value."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(float(x))


def to_fractions(v) -> tuple:
    return tuple(to_fraction(x) for x in v)


def format_scalar(x) -> str | float:
    if isinstance(x, Fraction):
        return str(x)
    return float(x)


def parse_scalar(x):
    if isinstance(x, str):
        return Fraction(x)
    return x


# -- exact linear algebra --------------------------------------------------

def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals.  Returns (rows, pivots)."""
    m = [[to_fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def exact_rank(rows) -> int:
    return len(rref(rows)[1])


def exact_nullspace(rows, ncols: int | None = None) -> list[tuple[Fraction, ...]]:
    """Rational basis of {x : rows @ x = 0}."""
    rows = list(rows)
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def exact_solve(a_rows, b) -> tuple[Fraction, ...]:
    """Solve the square nonsingular system a @ x = b exactly."""
    n = len(a_rows)
    aug = [list(to_fractions(r)) + [to_fraction(bi)] for r, bi in zip(a_rows, b)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise np.linalg.LinAlgError("singular system")
    return tuple(row[n] for row in red)


def dot(u, v):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


# -- float linear algebra --------------------------------------------------

def float_rank(a, abs_tol: float = DEFAULT_POLICY.abs_tol) -> int:
    """Rank with threshold ``abs_tol * largest singular value``."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > abs_tol * s[0]))


def float_nullspace(a, abs_tol: float = DEFAULT_POLICY.abs_tol, ncols: int | None = None):
    """Orthonormal basis (as columns) of the kernel of ``a``."""
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        n = ncols if ncols is not None else a.shape[-1]
        return np.eye(n)
    a = np.atleast_2d(a)
    _, s, vt = np.linalg.svd(a)
    r = 0 if s[0] == 0 else int(np.sum(s > abs_tol * s[0]))
    return vt[r:].T.copy()


def _orthonormalize(vectors, abs_tol: float, dim: int):
    a = np.asarray(vectors, dtype=float).reshape(-1, dim)
    if a.shape[0] == 0:
        return np.zeros((dim, 0))
    u, s, _ = np.linalg.svd(a.T, full_matrices=False)
    if s[0] == 0:
        return np.zeros((dim, 0))
    r = int(np.sum(s > abs_tol * s[0]))
    return u[:, :r].copy()


# -- subspaces -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Subspace:
    """A linear subspace of R^n.

    Float subspaces keep an orthonormal basis as the columns of ``basis``.
    Exact subspaces keep ``rational_basis`` (tuples of Fractions) and the
    inverse Gram matrix needed for exact projections.
    """

    ambient_dim: int
    basis: np.ndarray
    rational_basis: tuple | None = None
    _gram_inv: tuple | None = field(default=None, repr=False)

    @classmethod
    def span(cls, vectors, ambient_dim: int | None = None, policy: ScalarPolicy = DEFAULT_POLICY):
        vectors = list(vectors)
        if ambient_dim is None:
            if not vectors:
                raise ValueError("ambient_dim required for an empty spanning set")
            ambient_dim = len(vectors[0])
        for v in vectors:
            if len(v) != ambient_dim:
                raise ValueError("dimension mismatch")
        if policy.exact:
            return cls.from_rational(vectors, ambient_dim)
        return cls(ambient_dim, _orthonormalize(vectors, policy.abs_tol, ambient_dim))

    @classmethod
    def from_rational(cls, vectors, ambient_dim: int | None = None):
        vectors = [to_fractions(v) for v in vectors]
        if ambient_dim is None:
            ambient_dim = len(vectors[0])
        red, _ = rref(vectors) if vectors else ([], [])
        rb = tuple(tuple(r) for r in red)
        k = len(rb)
        gram = [[dot(a, b) for b in rb] for a in rb]
        inv = []
        for j in range(k):
            e = [Fraction(int(i == j)) for i in range(k)]
            inv.append(exact_solve(gram, e))
        inv_t = tuple(tuple(inv[j][i] for j in range(k)) for i in range(k))
        fb = _orthonormalize([[float(x) for x in r] for r in rb], 1e-12, ambient_dim)
        return cls(ambient_dim, fb, rb, inv_t)

    @classmethod
    def full(cls, n: int):
        return cls(n, np.eye(n))

    @classmethod
    def zero(cls, n: int):
        return cls(n, np.zeros((n, 0)))

    @property
    def dim(self) -> int:
        if self.rational_basis is not None:
            return len(self.rational_basis)
        return self.basis.shape[1]

    @property
    def exact(self) -> bool:
        return self.rational_basis is not None

    @property
    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.T

    def contains(self, v, tol: float = 1e-8) -> bool:
        if self.exact and all(isinstance(x, (int, Fraction)) for x in v):
            return list(project(self, v)) == list(to_fractions(v))
        v = np.asarray(v, dtype=float)
        return float(np.linalg.norm(v - self.projector @ v)) <= tol * max(1.0, float(np.linalg.norm(v)))

    def contains_subspace(self, other: "Subspace", tol: float = 1e-8) -> bool:
        if self.exact and other.exact:
            return all(self.contains(v) for v in other.rational_basis)
        return all(self.contains(other.basis[:, i], tol) for i in range(other.dim))

    def coordinates(self, v) -> np.ndarray:
        """Coordinates of ``v`` in the orthonormal float basis."""
        return self.basis.T @ np.asarray(v, dtype=float)

    def embed(self, c) -> np.ndarray:
        return self.basis @ np.asarray(c, dtype=float)


def project(s: Subspace, v):
    """Orthogonal projection of ``v`` onto ``s``."""
    if len(v) != s.ambient_dim:
        raise ValueError(f"dimension mismatch: {len(v)} vs {s.ambient_dim}")
    if s.exact and all(isinstance(x, (int, Fraction, np.integer)) for x in v):
        v = to_fractions(v)
        rb = s.rational_basis
        rhs = [dot(b, v) for b in rb]
        coef = [dot(row, rhs) for row in s._gram_inv]
        out = [Fraction(0)] * s.ambient_dim
        for c, b in zip(coef, rb):
            for i, x in enumerate(b):
                out[i] += c * x
        return tuple(out)
    v = np.asarray(v, dtype=float)
    return s.basis @ (s.basis.T @ v)


def intersect(a: Subspace, b: Subspace, policy: ScalarPolicy = DEFAULT_POLICY) -> Subspace:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("dimension mismatch")
    n = a.ambient_dim
    if a.exact and b.exact:
        # x = sum c_i a_i with x orthogonal to the complement of b
        comp_b = exact_nullspace(list(b.rational_basis), n)
        if not a.dim:
            return Subspace.from_rational([], n)
        rows = [[dot(w, ai) for ai in a.rational_basis] for w in comp_b]
        coefs = exact_nullspace(rows, a.dim)
        vecs = []
        for c in coefs:
            x = [Fraction(0)] * n
            for ci, ai in zip(c, a.rational_basis):
                for i, t in enumerate(ai):
                    x[i] += ci * t
            vecs.append(x)
        return Subspace.from_rational(vecs, n)
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(n)
    # kernel of [A, -B] gives the common vectors
    m = np.hstack([a.basis, -b.basis])
    ker = float_nullspace(m, policy.abs_tol)
    if ker.shape[1] == 0:
        return Subspace.zero(n)
    vecs = (a.basis @ ker[: a.dim]).T
    out = Subspace.span(list(vecs), n, policy)
    for i in range(out.dim):
        w = out.basis[:, i]
        if not (a.contains(w, 10 * policy.abs_tol ** 0.5) and b.contains(w, 10 * policy.abs_tol ** 0.5)):
            raise ArithmeticError("intersection basis vector failed membership check")
    return out


def orthogonal_complement(a: Subspace, within: Subspace | None = None,
                          policy: ScalarPolicy = DEFAULT_POLICY) -> Subspace:
    """Complement of ``a`` inside ``within`` (default: the whole space)."""
    n = a.ambient_dim
    if within is None:
        within = Subspace(n, np.eye(n), None) if not a.exact else Subspace.from_rational(
            [[int(i == j) for j in range(n)] for i in range(n)], n)
    if within.ambient_dim != n:
        raise ValueError("dimension mismatch")
    if not within.contains_subspace(a):
        raise ValueError("subspace is not contained in `within`")
    if a.exact and within.exact:
        if a.dim == 0:
            return within
        perp = exact_nullspace(list(a.rational_basis), n)
        return intersect(within, Subspace.from_rational(perp, n), EXACT_POLICY)
    if a.dim == 0:
        return Subspace(n, within.basis.copy())
    # restrict to within-coordinates, take kernel of a's coordinates
    coords = within.basis.T @ a.basis
    ker = float_nullspace(coords.T, policy.abs_tol, ncols=within.dim)
    return Subspace(n, within.basis @ ker)
