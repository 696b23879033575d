"""Curated example representations with validated sections.

Entries live as JSON under ``registry/`` inside the package.  The builders
below regenerate them (``python -m fatsection.registry``).  Loading an entry
always runs the axiom checker; an entry whose candidate section fails is
refused.
"""
from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .groups import GroupModel, group_from_dict
from .linalg import Subspace, to_fractions
from .sections import AXIOM_SAMPLES, AxiomReport, SectionCandidate, check_axioms

__all__ = [
    "RegistryError",
    "RegistryEntry",
    "REGISTRY_DIR",
    "entry_names",
    "load_entry",
    "entry_from_dict",
    "build_entries",
    "schur_horn_spec",
    "schur_horn_coordinates",
    "rot2_spec",
    "dihedral_spec",
    "copolarity_candidate_spec",
]

REGISTRY_DIR = Path(__file__).parent / "registry"

_CACHE: dict = {}


class RegistryError(ValueError):
    pass


@dataclass(eq=False)
class RegistryEntry:
    name: str
    section: SectionCandidate
    base_points: list
    expected: dict
    provenance: dict
    enabled: bool = True
    report: AxiomReport | None = None
    spec: dict = field(default_factory=dict, repr=False)

    @property
    def group(self) -> GroupModel:
        return self.section.group


# -- builders ------------------------------------------------------------------

def _helmert(n: int) -> np.ndarray:
    """Orthonormal basis (columns) of the sum-zero vectors in R^n."""
    cols = []
    for k in range(1, n):
        v = np.zeros(n)
        v[:k] = 1.0
        v[k] = -k
        cols.append(v / math.sqrt(k * (k + 1)))
    return np.array(cols).T.reshape(n, n - 1)


def _traceless_sym_basis(n: int) -> list[np.ndarray]:
    h = _helmert(n)
    basis = [np.diag(h[:, k]) for k in range(n - 1)]
    for i in range(n):
        for j in range(i + 1, n):
            e = np.zeros((n, n))
            e[i, j] = e[j, i] = 1 / math.sqrt(2)
            basis.append(e)
    return basis


def schur_horn_coordinates(m) -> np.ndarray:
    """Coordinates of a traceless symmetric matrix in the schur-horn-n basis."""
    m = np.asarray(m, dtype=float)
    return np.array([np.sum(b * m) for b in _traceless_sym_basis(m.shape[0])])


def schur_horn_spec(n: int, spectrum) -> dict:
    """SO(n) conjugation on traceless symmetric n x n matrices; section = diagonal.

    Chart coordinates of a diagonal matrix are its diagonal entries.
    """
    basis = _traceless_sym_basis(n)
    dim = len(basis)
    algebra = []
    for i in range(n):
        for j in range(i + 1, n):
            x = np.zeros((n, n))
            x[i, j], x[j, i] = -1.0, 1.0
            m = np.array([[np.sum(ba * (x @ bb - bb @ x)) for bb in basis] for ba in basis])
            m[np.abs(m) < 1e-15] = 0.0
            algebra.append(m.tolist())
    sigma = [[float(i == k) for i in range(dim)] for k in range(n - 1)]
    h = _helmert(n)
    chart = np.zeros((n, dim))
    chart[:, : n - 1] = h
    spectrum = [str(Fraction(s)) for s in spectrum]
    classes = {2: 2, 3: 4, 4: 8}[n]
    return {
        "name": f"schur-horn-{n}",
        "enabled": True,
        "description": f"SO({n}) acting by conjugation on traceless symmetric {n}x{n} matrices; "
                       "section = traceless diagonal matrices, charted by their diagonal entries.",
        "group": {"dim": dim, "kind": "lie", "algebra_basis": algebra, "seed": 0},
        "section": {"basis": sigma, "chart": chart.tolist()},
        "base_points": [spectrum],
        "expected": {"polar": True, "k": 0, "weyl_order": math.factorial(n), "weyl_dim": 0,
                     "face_classes": [classes],
                     "notes": "W = S_n permuting diagonal entries; P is a permutohedron."},
        "provenance": {"k": "DERIVED: normal space at a regular diagonal matrix is the diagonal subspace",
                       "weyl_order": "DERIVED: signed permutation matrices of determinant one",
                       "face_classes": "DERIVED: exact lattice plus W-orbit partition"},
    }


def rot2_spec() -> dict:
    return {
        "name": "rot2",
        "enabled": True,
        "description": "SO(2) rotating the plane; section = x-axis.",
        "group": {"dim": 2, "kind": "lie", "algebra_basis": [[[0.0, -1.0], [1.0, 0.0]]], "seed": 0},
        "section": {"basis": [[1.0, 0.0]], "chart": [["1", "0"]]},
        "base_points": [["2"]],
        "expected": {"polar": True, "k": 0, "weyl_order": 2, "weyl_dim": 0, "face_classes": [2],
                     "notes": "P = [-2, 2]; E = disk of radius 2."},
        "provenance": {"k": "TRIVIAL", "weyl_order": "DERIVED: rotations by 0 and pi preserve the axis",
                       "face_classes": "DERIVED: endpoints form one W-orbit"},
    }


def dihedral_spec(m: int) -> dict:
    if m == 4:
        rot = [["0", "-1"], ["1", "0"]]
        ref = [["1", "0"], ["0", "-1"]]
    else:
        c, s = math.cos(2 * math.pi / m), math.sin(2 * math.pi / m)
        rot = [[c, -s], [s, c]]
        ref = [[1.0, 0.0], [0.0, -1.0]]
    return {
        "name": f"dihedral-{m}",
        "enabled": True,
        "description": f"Dihedral group of order {2 * m} on the plane; trivial section (the whole plane).",
        "group": {"dim": 2, "kind": "finite", "generators": [rot, ref]},
        "section": {"basis": [[1.0, 0.0], [0.0, 1.0]], "chart": [["1", "0"], ["0", "1"]]},
        "base_points": [["1", "0"]],
        "expected": {"polar": False, "k": 0, "weyl_order": 2 * m, "weyl_dim": 0, "face_classes": [3],
                     "notes": f"W = G; P = E = regular {m}-gon.  With the whole space as section the "
                              "measured k is 0 for a finite group (degenerate reading)."},
        "provenance": {"weyl_order": "DERIVED: closure enumeration",
                       "face_classes": "DERIVED: vertices, edges, whole polygon"},
    }


def copolarity_candidate_spec() -> dict:
    """SO(3) acting diagonally on R^3 + R^3 with section (xy-plane) + (xy-plane)."""
    algebra = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        x = np.zeros((3, 3))
        x[i, j], x[j, i] = -1.0, 1.0
        blk = np.zeros((6, 6))
        blk[:3, :3] = x
        blk[3:, 3:] = x
        algebra.append(blk.tolist())
    sel = [0, 1, 3, 4]
    chart = [["1" if c == r else "0" for c in range(6)] for r in sel]
    return {
        "name": "copolarity-candidate",
        "enabled": False,
        "description": "SO(3) acting diagonally on two copies of R^3; candidate fat section = "
                       "two copies of the xy-plane (expected copolarity 1).",
        "group": {"dim": 6, "kind": "lie", "algebra_basis": algebra, "seed": 0},
        "section": {"basis": [[float(c == r) for c in range(6)] for r in sel], "chart": chart},
        "base_points": [["2", "0", "1", "1"]],
        "expected": {"polar": False, "k": 1, "weyl_order": None, "weyl_dim": 1, "face_classes": [None],
                     "notes": "Fat Weyl group is O(2); restrictions are not polytopes."},
        "provenance": {"k": "DERIVED: tangent space contains the orthogonal complement of the section"},
    }


def build_entries() -> dict:
    specs = [
        rot2_spec(),
        dihedral_spec(4),
        dihedral_spec(8),
        schur_horn_spec(2, [1, -1]),
        schur_horn_spec(3, [1, 0, -1]),
        schur_horn_spec(4, [3, 1, -1, -3]),
        copolarity_candidate_spec(),
    ]
    return {s["name"]: s for s in specs}


def write_entries(directory: Path = REGISTRY_DIR):
    directory.mkdir(parents=True, exist_ok=True)
    for name, spec in build_entries().items():
        with open(directory / f"{name}.json", "w") as fh:
            json.dump(spec, fh, indent=1, sort_keys=True)
            fh.write("\n")


# -- loading -------------------------------------------------------------------

def _parse_rows(rows):
    return [[Fraction(x) if isinstance(x, str) else x for x in row] for row in rows]


def entry_from_dict(spec: dict) -> RegistryEntry:
    try:
        group = group_from_dict(spec["group"])
        sec = spec["section"]
        n = group.ambient_dim
        sigma = Subspace.span([np.asarray(_parse_rows([b])[0], dtype=float) for b in sec["basis"]], n)
        chart = sec.get("chart")
        chart_exact = None
        chart_float = None
        if chart is not None:
            rows = _parse_rows(chart)
            if all(isinstance(x, (int, Fraction)) for row in rows for x in row):
                chart_exact = tuple(tuple(Fraction(x) for x in row) for row in rows)
            else:
                chart_float = np.array(rows, dtype=float)
        section = SectionCandidate(group, sigma, chart_float, chart_exact)
        base_points = [to_fractions(p) for p in spec["base_points"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise RegistryError(f"malformed registry entry: {exc}") from exc
    for p in base_points:
        if len(p) != section.chart_dim:
            raise RegistryError("base point has the wrong chart dimension")
    return RegistryEntry(spec["name"], section, base_points, spec.get("expected", {}),
                         spec.get("provenance", {}), bool(spec.get("enabled", True)), None, spec)


def entry_names(include_disabled: bool = True) -> list[str]:
    names = []
    for path in sorted(REGISTRY_DIR.glob("*.json")):
        with open(path) as fh:
            spec = json.load(fh)
        if include_disabled or spec.get("enabled", True):
            names.append(spec["name"])
    return names


def load_entry(name: str, n_samples: int = AXIOM_SAMPLES, seed: int = 0,
               allow_disabled: bool = False) -> RegistryEntry:
    """Load an entry and validate its section; results are cached per (name, n, seed)."""
    key = (name, n_samples, seed)
    if key in _CACHE:
        entry = _CACHE[key]
        if not entry.enabled and not allow_disabled:
            raise RegistryError(f"registry entry {name!r} is disabled")
        return entry
    path = REGISTRY_DIR / f"{name}.json"
    if not path.exists():
        raise RegistryError(f"unknown registry entry {name!r}")
    with open(path) as fh:
        spec = json.load(fh)
    entry = entry_from_dict(spec)
    if not entry.enabled and not allow_disabled:
        raise RegistryError(f"registry entry {name!r} is disabled")
    entry.report = check_axioms(entry.section, n_samples, seed)
    if not entry.report.passed:
        raise RegistryError(f"registry entry {name!r} failed the axiom check")
    expected_k = entry.expected.get("k")
    if expected_k is not None and entry.report.k != expected_k:
        raise RegistryError(f"registry entry {name!r}: measured k={entry.report.k}, expected {expected_k}")
    _CACHE[key] = entry
    return entry


if __name__ == "__main__":
    write_entries(Path(sys.argv[1]) if len(sys.argv) > 1 else REGISTRY_DIR)
