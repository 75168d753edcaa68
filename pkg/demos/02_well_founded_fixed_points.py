"""
Stable functions and well-founded fixed points
==============================================

The stable function replaces each bound by an inner least fixed point.
Iterating it from the least precise pair gives the well-founded fixed point.
"""

from afp.fixpoint import stable_function, stable_set, well_founded
from afp.lattice import ProductShape, two
from afp.morphism import bilattice_points, classify, from_function

L2 = ProductShape((two(),))
L22 = ProductShape((two(), two()))

# (x, x') -> (not x', not x) has two stable fixed points and the
# well-founded one is the least precise of them.
neg = from_function(L2, L2, lambda x, xp: (1 - xp, 1 - x))
print("stable set:", stable_set(neg))
print("well-founded:", well_founded(neg).point())

# (x, x') -> (1, not x or x') is consistent, yet its fixed point is not.
f = from_function(L2, L2, lambda x, xp: (1, max(1 - x, xp)))
S = stable_function(f)
print("S(f):", {p: S(p) for p in bilattice_points(L2)})
fw = well_founded(f)
print("well-founded:", fw.point(), "consistent?", classify(fw).consistent)

# With a parameter block the result is a morphism, computed per parameter point.
g = from_function(L22, L2, lambda x, y, xp, yp: (1 - yp, 1 - x))
gw = well_founded(g)
for q in bilattice_points(L2):
    print(f"  parameter {q} -> {gw(q)}")
