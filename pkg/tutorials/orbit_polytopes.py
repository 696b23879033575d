"""
Orbit polytopes and their face lattices
=======================================

Everything about P is computed in exact rational arithmetic.  The hexagon
conv(S_3 . (3, 2, 1)) sits in a plane of R^3, and the hull works inside that
plane.
"""

import itertools

from fatsection.polytope import face_lattice, group_action_on_faces, hull, maximal_chain, supporting_face

# %%
# The permutohedron of (3, 2, 1).
pts = sorted(set(itertools.permutations((3, 2, 1))))
p = hull(pts)
print("dimension", p.dim, "inside R^3")
for normal, offset in p.facets:
    print("  facet", [str(x) for x in normal], "<=", offset)

lat = face_lattice(p)
print("f-vector", lat.f_vector(), "and", len(lat.faces), "faces counting the empty one and P")

# %%
# Exposed faces.  (1, 0, 0) is maximized along an edge.
q = supporting_face(p, (1, 0, 0), lat)
print("argmax of x_1:", [p.vertices[i] for i in q.vertex_ids])

# %%
# A maximal chain from a vertex up to P.
v = p.vertices.index((3, 2, 1))
print("chain dims", [lat.dims[i] for i in maximal_chain(lat, (v,))])

# %%
# Coordinate permutations act on faces; vertices form one orbit, edges two.
perms = [[[int(i == s[j]) for i in range(3)] for j in range(3)] for s in itertools.permutations(range(3))]
print("orbit sizes", sorted(len(o) for o in group_action_on_faces(lat, perms)))

# %%
# The Hasse diagram, ready for graphviz.
print(lat.to_dot().splitlines()[0], "...", lat.to_dot().count("->"), "covering edges")
