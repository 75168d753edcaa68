"""
Which fixed-point identities hold?
==================================

Check single instances, then search whole instance spaces over the
two-element lattice for counterexamples.
"""

from afp.identities import SCHEMAS, check, search_counterexample
from afp.lattice import ProductShape, two
from afp.morphism import from_function

L2 = ProductShape((two(),))
L22 = ProductShape((two(), two()))

neg = from_function(L2, L2, lambda x, xp: (1 - xp, 1 - x))
for schema in ["fixed_point", "composition_simple", "squaring"]:
    r = check(schema, neg)
    print(f"{schema:20} {r.status:6} lhs={r.lhs} rhs={r.rhs}")

f = from_function(L22, L2, lambda x, y, xp, yp: (1 - yp, 1 - y))
g = from_function(L22, L2, lambda x, y, xp, yp: (1 - xp, 1 - x))
r = check("pairing", f, g)
print(f"{'pairing':20} {r.status:6} lhs={r.lhs} rhs={r.rhs}")

# Valid schemas survive a search; the others produce a witness quickly.
for name, schema in SCHEMAS.items():
    out = search_counterexample(name, two(), mode="sample", samples=300, seed=0)
    verdict = "counterexample" if out.found else "none found"
    print(f"{name:20} valid={schema.valid!s:5} {verdict} after {out.checked}")
