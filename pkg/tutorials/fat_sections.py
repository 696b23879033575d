"""
Fat sections and the fat Weyl group
===================================

A candidate section is accepted only after three sampled checks.  It must
meet every orbit, contain the normal space of regular points, and be kept by
any element carrying a regular point of it back into it.
"""

import numpy as np

from fatsection.groups import LieGroupModel
from fatsection.linalg import Subspace
from fatsection.registry import load_entry
from fatsection.sections import SectionCandidate, check_axioms, descend, fat_weyl_group

# %%
# SO(3) conjugating traceless symmetric 3x3 matrices, with the diagonal as section.
e = load_entry("schur-horn-3")
print(e.report.to_json())

w = fat_weyl_group(e.section, e.report)
print("W has order", w.order, "and moves (1, 0, -1) to", [tuple(map(str, x)) for x in w.orbit((1, 0, -1))])

# %%
# Descending a random matrix to the diagonal recovers its eigenvalues.
x = np.random.default_rng(1).standard_normal(5)
d = descend(e.section, x)
print("descended chart point", np.round(e.section.to_chart(d.point), 6))

# %%
# A plane is too big to be a section for rotations of R^3: the third axiom fails.
basis = []
for i, j in ((0, 1), (0, 2), (1, 2)):
    m = np.zeros((3, 3))
    m[i, j], m[j, i] = -1.0, 1.0
    basis.append(m)
so3 = LieGroupModel(3, tuple(basis))
bad = check_axioms(SectionCandidate(so3, Subspace.from_rational([(1, 0, 0), (0, 1, 0)])), 64)
print("plane:", bad.axiom_a.passed, bad.axiom_b.passed, bad.axiom_c.passed)

# %%
# Two copies of the xy-plane do work for the diagonal action on R^3 + R^3,
# with one extra dimension beyond the normal spaces.
cand = load_entry("copolarity-candidate", allow_disabled=True)
print("candidate passes:", cand.report.passed, "k =", cand.report.k)
wc = fat_weyl_group(cand.section, cand.report)
print("its fat Weyl group is finite:", wc.finite)
