"""Koszul complexes of primes over Z and the supports they detect."""
from cotstr import FreeComplex, cohomology, prime, prime_koszul, shift, tensor
from cotstr.koszul import support_of_cohomology
from cotstr.rings import Integers, RingDescriptor

Z = RingDescriptor.of(Integers())

for p in (2, 3, 5):
    K = prime_koszul(Z, prime(Z, 0, p))
    print(f"K_({p}):", cohomology(K).describe())

# Z/12 in degree 0, written as [Z --12--> Z]
X = FreeComplex.build(Z, {-1: 1, 0: 1}, {-1: [[12]]})
print("Supp H^0(X):", support_of_cohomology(X, 0))

# tensoring with K_(p) sees only the p-part
for p in (2, 3, 5):
    T = tensor(prime_koszul(Z, prime(Z, 0, p)), X)
    print(f"K_({p}) ⊗ X:", cohomology(T).describe())

print("Σ^2 R:", cohomology(shift(FreeComplex.unit(Z), 2)).describe())
