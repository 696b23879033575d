"""
Slice representations and chain reduction
=========================================

Slicing at u keeps the stabilizer of u acting on the normal space of its
orbit.  Repeating along a chain of faces ends at a group K with F_Q = K.Q.
"""

from fractions import Fraction

from fatsection.correspondence import body_from_entry
from fatsection.registry import load_entry
from fatsection.slices import chain_reduce, slice, verify_projection_restriction

b = body_from_entry(load_entry("schur-horn-3"))

# %%
# At a regular diagonal matrix the slice is the diagonal itself.
s = slice(b, (2, 0, -2))
print("regular: dim V1", s.V1.dim, "dim Sigma1", s.Sigma1.dim, "stabilizer algebra", s.G1.algebra_dim)

# %%
# At diag(1, 1, -2) a 2x2 block survives.
s = slice(b, (1, 1, -2))
print("singular: dim V1", s.V1.dim, "dim Sigma1", s.Sigma1.dim, "stabilizer algebra", s.G1.algebra_dim)
print("projection check", verify_projection_restriction(s, 256))

# %%
# From the hexagon down to one vertex.
v = b.P.vertices.index(tuple(Fraction(x) for x in (1, 0, -1)))
c = chain_reduce(b, (v,))
print(c.to_json())
