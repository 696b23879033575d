"""
Probing F_Q against K.Q
=======================

K fixes the orthogonal complement of Q inside the section pointwise.  The
probe samples both sets and reports "holds", "violated" or "inconclusive"
for each containment.  It never asserts an answer.
"""

from fatsection.correspondence import body_from_entry, conjecture_probe, face_orbit_classes
from fatsection.registry import load_entry
from fatsection.sections import SectionError
from fatsection.suites import run_suite

for name in ("schur-horn-3", "schur-horn-4"):
    b = body_from_entry(load_entry(name))
    for r in face_orbit_classes(b):
        p = conjecture_probe(b, r.q, n=10)
        print(name, "class", r.class_id, "dim", r.q.dim, "K algebra", p["K"]["algebra_dim"],
              p["forward"]["verdict"], p["reverse"]["verdict"])

# %%
# The copolarity-one candidate has a positive-dimensional fat Weyl group, so
# its restrictions are not polytopes and the probe cannot start.
try:
    body_from_entry(load_entry("copolarity-candidate", allow_disabled=True))
except SectionError as exc:
    print("candidate:", exc)

# %%
# The same through the suite runner, which serializes deterministically.
print(run_suite("conjecture", "copolarity-candidate", seed=1).to_json())
