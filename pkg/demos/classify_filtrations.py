"""Filtrations by supports, the co-t-structures they give, and one that gives none."""
from cotstr import (FiltrationBySupports, FreeComplex, SpecSubset, approximation_triangle,
                    classify, from_component_thresholds, prime, threshold_filtration)
from cotstr.complexes import cohomology
from cotstr.rings import Integers, IntegersMod, RingDescriptor

Z = RingDescriptor.of(Integers())
Z6 = RingDescriptor.of(IntegersMod(2), IntegersMod(3))

for m in (-1, 0, 2):
    print(f"threshold {m:+d} ->", classify(Z, threshold_filtration(Z, m)))

# over Z/6 each component carries its own threshold
phi = from_component_thresholds(Z6, [1, float("-inf")])
D = classify(Z6, phi)
print("Z/6 with thresholds (1, -inf) ->", D)

# approximating [R --2--> R] in degrees 0, 1
X = FreeComplex.build(Z, {0: 1, 1: 1}, {0: [[2]]})
ap = approximation_triangle(X, classify(Z, threshold_filtration(Z, 0)))
print("A:", cohomology(ap.A).describe(), " B:", cohomology(ap.B).describe(), ap.checks)

# a closed point is not a union of components: no co-t-structure on perfect complexes
bad = FiltrationBySupports(SpecSubset.closed_points(Z, [prime(Z, 0, 2)]))
print(classify(Z, bad).message)
