"""Silting checks and regularity evidence on a few rings."""
from cotstr import FreeComplex, direct_sum, is_regular, is_silting, shift
from cotstr.rings import Integers, IntegersMod, PolyOverPrimeField, RingDescriptor

for F in (Integers(), PolyOverPrimeField(2), IntegersMod(4)):
    R = RingDescriptor.of(F)
    U = FreeComplex.unit(R)
    print(F, "regular:", is_regular(R),
          "| Σ^2 R silting:", is_silting(shift(U, 2), 10).silting,
          "| R ⊕ ΣR silting:", is_silting(direct_sum(U, shift(U, 1)), 10).silting)

rep = is_silting(direct_sum(FreeComplex.unit(RingDescriptor.of(Integers())),
                            shift(FreeComplex.unit(RingDescriptor.of(Integers())), 1)), 10)
print("witness:", rep.witness)
