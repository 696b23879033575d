"""
Faces of E from faces of P
==========================

E = G.P is never built.  Membership descends a point into the section, and a
face Q of P lifts to F_Q, which is sampled as G_u.Q for an exposing u.
"""

import numpy as np

from fatsection.correspondence import (
    body_from_entry,
    exposed_lift,
    face_orbit_classes,
    lift_face,
    membership_E,
    push_face,
    verify_orbit_bijection,
)
from fatsection.registry import load_entry, schur_horn_coordinates

b = body_from_entry(load_entry("schur-horn-3"))

# %%
# Matrices with spectrum majorized by (1, 0, -1) are in E; others are not.
q, _ = np.linalg.qr(np.random.default_rng(0).standard_normal((3, 3)))
inside = q @ np.diag([0.5, 0.0, -0.5]) @ q.T
outside = q @ np.diag([1.5, -0.5, -1.0]) @ q.T
for name, m in (("inside", inside), ("outside", outside)):
    print(name, membership_E(b, schur_horn_coordinates(m)))

# %%
# One record per W-orbit of faces.  The two edge classes share all metric data
# and are separated by where their nearest point to the origin sits.
for r in face_orbit_classes(b):
    print(r.class_id, "dim", r.q.dim, "orbit", len(r.orbit), "lift dim", r.invariants["dim"],
          "nearest point", r.invariants["min_norm_point_class"])

# %%
# Lift an edge, then push it back down.
f = exposed_lift(b, (1, 0, 0))
print("lifted edge: sample dimension", f.dim_estimate(), "validation", f.validate(n_segments=40)["passed"])
print("pushes back to", push_face(b, f).vertex_ids)

# %%
# Evidence for the bijection between the two sets of classes.
v = verify_orbit_bijection(b, n_directions=50)
print("bijection checks:", v["passed"], "classes reached", v["surjectivity"]["classes_reached"])

top = lift_face(b, b.lattice.face(b.lattice.top()).vertex_ids)
print("P lifts to E itself, sample dimension", top.dim_estimate())
