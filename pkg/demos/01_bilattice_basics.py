"""
Lattices, pairs and precision-monotone maps
===========================================

Build a few finite lattices, look at the pair space with its two orders,
and count the precision-monotone pair functions on the two-element lattice.
"""

from afp.lattice import ProductShape, build_lattice, two
from afp.morphism import (
    bilattice_points,
    classify,
    count_morphisms,
    from_function,
    leq_p,
    leq_t,
)

# Lattices come from short spec strings; products use "x".
for spec in ["2", "chain:3", "pow:2", "2x2"]:
    lat = build_lattice(spec)
    print(f"{spec:8} size={lat.size} height={lat.height}")

# A point of L x L is (x, x'): a lower bound and an upper bound.
L2 = ProductShape((two(),))
points = list(bilattice_points(L2))
print("points:", points)
print("precision order:", [(p, q) for p in points for q in points if p != q and leq_p(L2, p, q)])
print("truth order:    ", [(p, q) for p in points for q in points if p != q and leq_t(L2, p, q)])

# Negation swaps the bounds and flips them.
neg = from_function(L2, L2, lambda x, xp: (1 - xp, 1 - x))
print("neg table:", {p: neg(p) for p in points})
print("neg profile:", classify(neg))

# Each component is a monotone map on a 4-element diamond: 6 choices each.
print("morphisms 2 -o 2:", count_morphisms(L2, L2))
print("morphisms 2x2 -o 2:", count_morphisms(ProductShape((two(), two())), L2))
