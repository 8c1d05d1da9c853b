"""Koszul complexes, supports of modules and complexes, projective dimension."""
from __future__ import annotations

from dataclasses import dataclass

from . import linalg as la
from .complexes import (CohomologyProfile, FactorComplex, FreeComplex, ModuleProfile,
                        cohomology, cohomology_at, tensor)
from .linalg import Mat
from .rings import ConnectedFactor, IntegersMod, RingDescriptor, ValidationError
from .spectrum import ALL, EMPTY, PrimeIdeal, SpecSubset


@dataclass(frozen=True)
class KoszulSpec:
    factor: int
    generators: tuple = ()


def _two_term(F: ConnectedFactor, x, index: int) -> FactorComplex:
    return FactorComplex(F, {-1: 1, 0: 1}, {-1: Mat(1, 1, ((F.element(x),),))}, index)


def koszul_complex(R: RingDescriptor, spec: KoszulSpec) -> FreeComplex:
    """⊗_i [R -x_i-> R] (degrees -1, 0) on factor ``spec.factor``, zero elsewhere.

    The empty sequence gives the unit complex of that factor.
    """
    if not 0 <= spec.factor < len(R):
        raise ValidationError(f"no factor {spec.factor} in {R}")
    F = R[spec.factor]
    out = FreeComplex.on_factor(R, spec.factor, FactorComplex(F, {0: 1}, {}, spec.factor))
    for x in spec.generators:
        out = tensor(out, FreeComplex.on_factor(R, spec.factor, _two_term(F, x, spec.factor)))
    return out


def minimal_generators(R: RingDescriptor, p: PrimeIdeal) -> tuple:
    """The fixed minimal generating set: empty for (0), the normalized generator otherwise."""
    p.validate(R)
    return () if p.is_zero else (p.gen,)


def prime_koszul(R: RingDescriptor, p: PrimeIdeal) -> FreeComplex:
    """K_p, a complex with H^0 = R/p living on the factor of p."""
    return koszul_complex(R, KoszulSpec(p.factor, minimal_generators(R, p)))


# ---------------------------------------------------------------------------
# supports


def support_of_module(M: ModuleProfile, R: RingDescriptor | None = None) -> SpecSubset:
    """Supp M = V(ann M), as a subset of Spec R (only M's factor can be nonempty)."""
    if R is None:
        R = RingDescriptor.of(M.F)
        index = 0
    else:
        index = M.factor
        if R[index] != M.F:
            raise ValidationError("module profile does not belong to this ring")
    parts = [EMPTY] * len(R)
    if M.free_rank:
        parts[index] = ALL
    elif M.torsion:
        gens = set()
        for t in M.torsion:
            gens.update(M.F.prime_divisors(t))
        parts[index] = gens
    return SpecSubset(R, tuple(parts))


def support_of_cohomology(X: FreeComplex, j: int) -> SpecSubset:
    out = SpecSubset.empty(X.ring)
    for M in cohomology_at(X, j):
        out = out | support_of_module(M, X.ring)
    return out


def total_support(X: FreeComplex, H: CohomologyProfile | None = None) -> SpecSubset:
    H = cohomology(X) if H is None else H
    out = SpecSubset.empty(X.ring)
    for g in H.groups.values():
        for M in g:
            out = out | support_of_module(M, X.ring)
    return out


def torsion_primes(H: CohomologyProfile, factor: int) -> list:
    """Normalized irreducibles dividing some torsion invariant factor on ``factor``."""
    F = H.ring[factor]
    out = set()
    for g in H.groups.values():
        for t in g[factor].torsion:
            out.update(F.prime_divisors(t))
    return sorted(out, key=lambda g: (0, g, ()) if isinstance(g, int) else (1, g.degree, g.coeffs))


# ---------------------------------------------------------------------------
# projective dimension


@dataclass(frozen=True)
class FiniteDim:
    value: int
    ranks: tuple = ()


@dataclass(frozen=True)
class ExceedsBound:
    bound: int
    ranks: tuple = ()


def _kernel_generators(F: ConnectedFactor, A: Mat) -> Mat:
    """Minimal generators (as columns) of the kernel of ``A`` acting on free modules."""
    if isinstance(F, IntegersMod) and not F.is_field:
        n = A.cols
        K = la.mod_kernel_lattice(F, A) if A.rows else la.identity(la.ZZ, n)
        B, S, r = la._lattice_basis(K)
        d = S.diagonal()
        keep = [j for j in range(r) if d[j] % F.m]
        cols = la.submatrix(B, range(n), keep)
        return la.reduce_mat(F, cols)
    if isinstance(F, IntegersMod):
        # Z/p: work over the prime field
        from .rings import PrimeField
        G = PrimeField(F.p)
        return la.kernel_basis(G, A)
    return la.kernel_basis(F, A)


def projective_dimension_probe(F: ConnectedFactor, M: ModuleProfile, bound: int):
    """Resolve ``M`` minimally for at most ``bound`` steps.

    Returns :class:`FiniteDim` with the exact projective dimension, or
    :class:`ExceedsBound` when the first ``bound`` syzygies are all nonzero.
    Over a local factor a minimal resolution that has not stopped after
    ``bound`` steps certifies ``pd M > bound``.
    """
    if bound < 1:
        raise ValidationError("bound must be positive")
    n0 = M.free_rank + len(M.torsion)
    if not M.torsion:
        return FiniteDim(0, (n0,))
    # presentation: columns t_i e_{free_rank + i}
    z = F.zero()
    rows = []
    for i in range(n0):
        rows.append(tuple(F.element(M.torsion[i - M.free_rank]) if i >= M.free_rank
                          and j == i - M.free_rank else z for j in range(len(M.torsion))))
    phi = Mat(n0, len(M.torsion), tuple(rows))
    ranks = [n0, phi.cols]
    for k in range(1, bound + 1):
        K = _kernel_generators(F, phi)
        if K.cols == 0:
            return FiniteDim(k, tuple(ranks))
        if k == bound:
            break
        phi = K
        ranks.append(K.cols)
    return ExceedsBound(bound, tuple(ranks))
