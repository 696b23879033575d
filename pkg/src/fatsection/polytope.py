"""Exact convex hulls and face lattices of finite point sets.

All combinatorics run over ``fractions.Fraction``; float inputs enter through
their exact binary value.  Facets come from a double-description pass on the
homogenized polar cone, computed inside the affine hull so degenerate inputs
need no special casing.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

import numpy as np

from .linalg import Subspace, dot, exact_rank, project, rref, to_fraction, to_fractions

__all__ = [
    "PolytopeError",
    "OrbitPolytope",
    "PFace",
    "FaceLattice",
    "hull",
    "face_lattice",
    "supporting_face",
    "is_face",
    "relative_interior_point",
    "maximal_chain",
    "group_action_on_faces",
    "vertex_permutation",
    "affine_dim",
    "MAX_DIM",
    "MAX_POINTS",
]

MAX_DIM = 8
MAX_POINTS = 2000


class PolytopeError(ValueError):
    pass


def _primitive(v) -> tuple:
    """Scale a rational vector to a primitive integer vector (same direction)."""
    v = to_fractions(v)
    nz = [x for x in v if x != 0]
    if not nz:
        return tuple(Fraction(0) for _ in v)
    den = reduce(lambda a, b: a * b // math.gcd(a, b), (x.denominator for x in v), 1)
    ints = [int(x * den) for x in v]
    g = reduce(math.gcd, (abs(i) for i in ints if i), 0)
    return tuple(Fraction(i // g) for i in ints)


def affine_dim(points) -> int:
    pts = [to_fractions(p) for p in points]
    if not pts:
        return -1
    p0 = pts[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in pts[1:]]
    return exact_rank(diffs) if diffs else 0


# -- double description ------------------------------------------------------

def _extreme_rays(rows: list, d: int) -> list[tuple]:
    """Extreme rays of the pointed cone {x : row . x >= 0 for all rows}."""
    chosen: list[int] = []
    basis: list = []
    for i, r in enumerate(rows):
        if exact_rank(basis + [r]) > len(basis):
            basis.append(r)
            chosen.append(i)
            if len(chosen) == d:
                break
    if len(chosen) < d:
        raise PolytopeError("cone is not pointed")
    # rays = columns of the inverse of the chosen square block
    inv_cols = []
    for j in range(d):
        red, piv = rref([list(basis[k]) + [Fraction(int(k == j))] for k in range(d)])
        inv_cols.append(tuple(row[d] for row in red))
    rays = [_primitive(c) for c in inv_cols]
    zeros = []
    for j in range(d):
        z = 0
        for k, idx in enumerate(chosen):
            if k != j:
                z |= 1 << idx
        zeros.append(z)
    chosen_set = set(chosen)
    for idx, r in enumerate(rows):
        if idx in chosen_set:
            continue
        vals = [dot(r, ray) for ray in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        zer = [k for k, v in enumerate(vals) if v == 0]
        new_rays = [rays[k] for k in pos] + [rays[k] for k in zer]
        new_zeros = [zeros[k] for k in pos] + [zeros[k] | (1 << idx) for k in zer]
        for p in pos:
            for n in neg:
                common = zeros[p] & zeros[n]
                if bin(common).count("1") < d - 2:
                    continue
                if any(k != p and k != n and (zeros[k] & common) == common for k in range(len(rays))):
                    continue
                vp, vn = vals[p], vals[n]
                ray = tuple(vp * a - vn * b for a, b in zip(rays[n], rays[p]))
                new_rays.append(_primitive(ray))
                new_zeros.append(common | (1 << idx))
        rays, zeros = new_rays, new_zeros
    return rays


# -- polytopes ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class OrbitPolytope:
    """conv(points): vertices, facets ``normal . x <= offset`` and affine hull.

    Facet normals are primitive integer vectors lying in the direction space
    of the affine hull.  ``incidence[i]`` holds the vertex ids on facet ``i``.
    """

    ambient_dim: int
    vertices: tuple
    facets: tuple
    incidence: tuple
    base_point: tuple
    direction: Subspace
    dim: int

    def vertex_array(self) -> np.ndarray:
        return np.array([[float(x) for x in v] for v in self.vertices]).reshape(-1, self.ambient_dim)

    def contains(self, x, tol: float | None = None) -> bool:
        """Exact membership (``tol=None``) or float membership with scaled slack."""
        if tol is None:
            x = to_fractions(x)
            d = tuple(a - b for a, b in zip(x, self.base_point))
            if self.dim < self.ambient_dim and list(project(self.direction, d)) != list(d):
                return False
            return all(dot(a, x) <= b for a, b in self.facets)
        xv = np.asarray(x, dtype=float)
        d = xv - np.array([float(t) for t in self.base_point])
        if np.linalg.norm(d - self.direction.projector @ d) > tol:
            return False
        for a, b in self.facets:
            av = np.array([float(t) for t in a])
            if av @ xv - float(b) > tol * np.linalg.norm(av):
                return False
        return True

    def facet_arrays(self):
        a = np.array([[float(t) for t in n] for n, _ in self.facets]).reshape(-1, self.ambient_dim)
        b = np.array([float(o) for _, o in self.facets])
        return a, b


def hull(points) -> OrbitPolytope:
    pts = sorted({to_fractions(p) for p in points})
    if not pts:
        raise PolytopeError("hull of an empty point set")
    if len(pts) > MAX_POINTS:
        raise PolytopeError(f"too many points ({len(pts)} > {MAX_POINTS})")
    n = len(pts[0])
    if any(len(p) != n for p in pts):
        raise PolytopeError("points have different dimensions")
    p0 = pts[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in pts]
    red, pivots = rref(diffs)
    r = len(pivots)
    if r > MAX_DIM:
        raise PolytopeError(f"affine hull dimension {r} exceeds cap {MAX_DIM}")
    direction = Subspace.from_rational(red, n)
    if r == 0:
        return OrbitPolytope(n, (p0,), (), (), p0, direction, 0)
    coords = [tuple(dv[c] for c in pivots) for dv in diffs]
    rows = [tuple(-y for y in c) + (Fraction(1),) for c in coords]
    rays = _extreme_rays(rows, r + 1)
    facets_y = []
    for ray in rays:
        a, b = ray[:r], ray[r]
        if all(x == 0 for x in a):
            continue
        tight = [i for i, c in enumerate(coords) if dot(a, c) == b]
        if tight and exact_rank([[x - y for x, y in zip(coords[i], coords[tight[0]])] for i in tight]) == r - 1:
            facets_y.append((a, b, tight))
    # vertices: tight facet normals of full rank
    vert_ids = []
    for i in range(len(coords)):
        normals = [a for a, b, t in facets_y if i in t]
        if exact_rank(normals) == r if normals else r == 0:
            vert_ids.append(i)
    vertices = tuple(pts[i] for i in vert_ids)
    remap = {old: new for new, old in enumerate(vert_ids)}
    facets = []
    for a, b, tight in facets_y:
        n0 = [Fraction(0)] * n
        for k, c in enumerate(pivots):
            n0[c] = a[k]
        nv = project(direction, n0)
        scale = _primitive(nv)
        # nv and scale are parallel with positive ratio
        ratio = next(s / t for s, t in zip(scale, nv) if t != 0)
        normal = scale
        offset = (b + dot(nv, p0)) * ratio
        inc = frozenset(remap[i] for i in tight if i in remap)
        facets.append((normal, offset, inc))
    facets.sort(key=lambda f: (f[0], f[1]))
    return OrbitPolytope(
        n, vertices,
        tuple((f[0], f[1]) for f in facets),
        tuple(f[2] for f in facets),
        p0, direction, r,
    )


@dataclass(frozen=True)
class PFace:
    vertex_ids: tuple
    dim: int
    exposing_vector: tuple | None = None

    @property
    def key(self) -> frozenset:
        return frozenset(self.vertex_ids)

    def __len__(self):
        return len(self.vertex_ids)


@dataclass(frozen=True, eq=False)
class FaceLattice:
    polytope: OrbitPolytope
    faces: tuple  # frozensets of vertex ids, ordered by (dim, sorted ids)
    dims: tuple
    facet_sets: tuple  # facet ids containing each face
    covers: tuple  # (i, j): face i is covered by face j
    _index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._index.update({f: i for i, f in enumerate(self.faces)})

    def __len__(self):
        return len(self.faces)

    def index(self, vertex_ids) -> int:
        key = frozenset(vertex_ids)
        if key not in self._index:
            raise PolytopeError(f"{sorted(key)} is not a face")
        return self._index[key]

    def face(self, i: int, exposing: bool = True) -> PFace:
        ids = tuple(sorted(self.faces[i]))
        u = self.exposing_vector(i) if exposing and self.dims[i] >= 0 else None
        return PFace(ids, self.dims[i], u)

    def nonempty(self) -> list[int]:
        return [i for i, d in enumerate(self.dims) if d >= 0]

    def top(self) -> int:
        return len(self.faces) - 1

    def f_vector(self) -> tuple:
        p = self.polytope.dim
        return tuple(sum(1 for d in self.dims if d == k) for k in range(p + 1))

    def minimal_face(self, vertex_ids) -> int:
        """Smallest face containing the given vertices."""
        s = frozenset(vertex_ids)
        contained = frozenset(j for j, inc in enumerate(self.polytope.incidence) if s <= inc)
        for i, fs in enumerate(self.facet_sets):
            if fs == contained and s <= self.faces[i]:
                return i
        raise PolytopeError("lattice is incomplete")

    def exposing_vector(self, i: int) -> tuple | None:
        """Sum of primitive normals of facets containing face ``i`` (zero for P)."""
        poly = self.polytope
        if self.dims[i] == poly.dim:
            return None
        normals = [poly.facets[j][0] for j in sorted(self.facet_sets[i])]
        exact_sum = tuple(sum(col, Fraction(0)) for col in zip(*normals))
        if len({dot(a, a) for a in normals}) == 1:
            return exact_sum
        # unequal primitive lengths (float-derived facets): the plain sum is
        # numerically dominated by one facet, so use a snapped sum of unit normals
        unit = sum(np.array([float(t) for t in a]) / np.sqrt(float(dot(a, a))) for a in normals)
        snapped = tuple(Fraction(float(t)).limit_denominator(10**4) for t in unit)
        if self._exposes(i, snapped):
            return snapped
        return exact_sum

    def _exposes(self, i: int, u) -> bool:
        vals = [dot(u, v) for v in self.polytope.vertices]
        m = max(vals)
        return frozenset(k for k, v in enumerate(vals) if v == m) == self.faces[i]

    def relint_face_of(self, x) -> list[int]:
        x = to_fractions(x)
        tight = frozenset(j for j, (a, b) in enumerate(self.polytope.facets) if dot(a, x) == b)
        return [i for i, fs in enumerate(self.facet_sets) if fs == tight and self.dims[i] >= 0]

    def to_dict(self) -> dict:
        nodes = []
        for i, f in enumerate(self.faces):
            node = {"id": i, "dim": self.dims[i], "vertex_ids": sorted(f)}
            u = self.exposing_vector(i) if self.dims[i] >= 0 else None
            if u is not None:
                node["exposing_vector"] = [str(x) for x in u]
            nodes.append(node)
        return {
            "vertices": [[str(x) for x in v] for v in self.polytope.vertices],
            "nodes": nodes,
            "edges": [list(e) for e in self.covers],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_dot(self, name: str = "faces") -> str:
        lines = [f"digraph {json.dumps(name)} {{", "  rankdir=BT;"]
        for i, f in enumerate(self.faces):
            label = "{" + ",".join(str(v) for v in sorted(f)) + "}"
            lines.append(f'  n{i} [label="{label}\\ndim {self.dims[i]}"];')
        for a, b in self.covers:
            lines.append(f"  n{a} -> n{b};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def face_lattice(p: OrbitPolytope, n_check: int = 1000, seed: int = 0) -> FaceLattice:
    """All faces of ``p``, with covering relations.

    The partition of P into relative interiors is checked on ``n_check``
    random rational points.
    """
    nv = len(p.vertices)
    top = frozenset(range(nv))
    found = {top}
    work = list(p.incidence)
    for f in work:
        found.add(f)
    queue = list(set(work))
    while queue:
        f = queue.pop()
        for inc in p.incidence:
            g = f & inc
            if g not in found:
                found.add(g)
                queue.append(g)
    found.add(frozenset())

    def dim_of(f):
        return affine_dim([p.vertices[i] for i in sorted(f)])

    faces = sorted(found, key=lambda f: (dim_of(f), sorted(f)))
    dims = tuple(dim_of(f) for f in faces)
    facet_sets = tuple(frozenset(j for j, inc in enumerate(p.incidence) if f <= inc) for f in faces)
    covers = []
    for i, f in enumerate(faces):
        for j, g in enumerate(faces):
            if dims[j] == dims[i] + 1 and f < g:
                covers.append((i, j))
    lat = FaceLattice(p, tuple(faces), dims, facet_sets, tuple(covers))
    if n_check:
        _check_relint_partition(lat, n_check, seed)
    return lat


def _check_relint_partition(lat: FaceLattice, n: int, seed: int):
    rng = random.Random(seed)
    verts = lat.polytope.vertices
    nonempty = lat.nonempty()
    for _ in range(n):
        f = sorted(lat.faces[rng.choice(nonempty)])
        w = [Fraction(rng.randint(1, 9)) for _ in f]
        s = sum(w)
        x = tuple(sum((wi * verts[v][k] for wi, v in zip(w, f)), Fraction(0)) / s
                  for k in range(lat.polytope.ambient_dim))
        hits = lat.relint_face_of(x)
        if len(hits) != 1:
            raise PolytopeError(f"point lies in the relative interior of {len(hits)} faces")


def _values(p: OrbitPolytope, u, exact: bool):
    if exact:
        return [dot(u, v) for v in p.vertices]
    uv = np.asarray(u, dtype=float)
    return list(p.vertex_array() @ uv)


def supporting_face(p: OrbitPolytope, u, lattice: FaceLattice | None = None,
                    tol: float | None = None) -> PFace:
    """The face of ``p`` maximizing <., u>.

    With ``tol`` set, vertices within ``tol`` of the maximum count as maximal
    and the smallest face containing them is returned.
    """
    if len(u) != p.ambient_dim:
        raise ValueError("dimension mismatch")
    if tol is None:
        u = to_fractions(u)
        if all(x == 0 for x in u):
            raise ValueError("zero direction")
        vals = _values(p, u, True)
        m = max(vals)
        ids = [i for i, v in enumerate(vals) if v == m]
    else:
        if not np.any(np.asarray(u, dtype=float)):
            raise ValueError("zero direction")
        vals = _values(p, u, False)
        m = max(vals)
        ids = [i for i, v in enumerate(vals) if v >= m - tol]
    if lattice is None:
        lattice = face_lattice(p, n_check=0)
    i = lattice.minimal_face(ids)
    return PFace(tuple(sorted(lattice.faces[i])), lattice.dims[i], tuple(u))


def is_face(p: OrbitPolytope, s, lattice: FaceLattice | None = None) -> bool:
    """Whether conv of the vertex ids ``s`` is a face of ``p``."""
    s = frozenset(s)
    if not s:
        return True
    if not s <= frozenset(range(len(p.vertices))):
        raise ValueError("not a vertex subset")
    if lattice is None:
        lattice = face_lattice(p, n_check=0)
    answer = lattice.faces[lattice.minimal_face(s)] == s
    witness = _segment_witness(p, s)
    if answer and witness is not None:
        raise ArithmeticError("segment test contradicts the lattice")
    if answer:
        u = lattice.exposing_vector(lattice.index(s))
        if u is not None:
            vals = _values(p, u, True)
            m = max(vals)
            if frozenset(i for i, v in enumerate(vals) if v == m) != s:
                raise ArithmeticError("exposing vector does not expose the face")
    return answer


def _segment_witness(p: OrbitPolytope, s, t=Fraction(1, 10000)):
    """A vertex v outside s such that the segment from v through the centroid
    of s continues inside p; its existence proves conv(s) is not a face."""
    m = _centroid([p.vertices[i] for i in sorted(s)])
    for v in range(len(p.vertices)):
        if v in s:
            continue
        q = tuple(mi + t * (mi - vi) for mi, vi in zip(m, p.vertices[v]))
        if p.contains(q):
            return v
    return None


def _centroid(points) -> tuple:
    k = len(points)
    return tuple(sum(col, Fraction(0)) / k for col in zip(*points))


def relative_interior_point(p: OrbitPolytope, f: PFace) -> tuple:
    if not f.vertex_ids:
        raise ValueError("empty face has no relative interior")
    c = _centroid([p.vertices[i] for i in f.vertex_ids])
    s = frozenset(f.vertex_ids)
    for (a, b), inc in zip(p.facets, p.incidence):
        on = s <= inc
        if on and dot(a, c) != b or (not on and not dot(a, c) < b):
            raise ArithmeticError("centroid is not in the relative interior")
    return c


def maximal_chain(lat: FaceLattice, f) -> list[int]:
    """Face ids f = F_n, ..., F_0 = P, each covered by the next."""
    i = lat.index(f.vertex_ids if isinstance(f, PFace) else f)
    chain = [i]
    up = {}
    for a, b in lat.covers:
        up.setdefault(a, []).append(b)
    while lat.dims[chain[-1]] < lat.polytope.dim:
        chain.append(min(up[chain[-1]]))
    return chain


def vertex_permutation(p: OrbitPolytope, w, tol: float = 1e-8) -> tuple:
    """Image index of each vertex under the matrix ``w``; raises if not a symmetry."""
    exact = all(isinstance(x, (int, Fraction)) for row in w for x in row)
    verts = p.vertices
    lookup = {v: i for i, v in enumerate(verts)}
    if exact:
        out = []
        for v in verts:
            img = tuple(sum((to_fraction(a) * b for a, b in zip(row, v)), Fraction(0)) for row in w)
            if img not in lookup:
                raise PolytopeError("matrix does not preserve the vertex set")
            out.append(lookup[img])
        return tuple(out)
    va = p.vertex_array()
    imgs = va @ np.asarray(w, dtype=float).T
    out = []
    for img in imgs:
        d = np.max(np.abs(va - img), axis=1)
        j = int(np.argmin(d))
        if d[j] > tol:
            raise PolytopeError("matrix does not preserve the vertex set")
        out.append(j)
    if len(set(out)) != len(out):
        raise PolytopeError("matrix does not act bijectively on vertices")
    return tuple(out)


def group_action_on_faces(lat: FaceLattice, matrices, tol: float = 1e-8) -> list[list[int]]:
    """Orbits of nonempty faces under the group generated by ``matrices``."""
    perms = [vertex_permutation(lat.polytope, w, tol) for w in matrices]
    seen: dict[int, int] = {}
    orbits = []
    for i in lat.nonempty():
        if i in seen:
            continue
        orb = {i}
        stack = [i]
        while stack:
            j = stack.pop()
            for perm in perms:
                img = frozenset(perm[v] for v in lat.faces[j])
                k = lat.index(img)
                if lat.dims[k] != lat.dims[j]:
                    raise PolytopeError("action does not preserve dimension")
                if k not in orb:
                    orb.add(k)
                    stack.append(k)
        for j in orb:
            seen[j] = len(orbits)
        orbits.append(sorted(orb))
    return orbits
