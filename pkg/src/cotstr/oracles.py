"""Membership oracles for B_Φ, Y_Φ and K^{≥n}, K^{≤n}; classification of
co-t-structures on perfect complexes; approximation triangles; axiom checks.

Binding-index reduction
-----------------------
B ∈ B_Φ means ``Σ^{-i} K_p ⊗ B ∈ D^{≤0}`` for all i and all p ∈ Φ(i).  Since
``Σ^{-i} Z ∈ D^{≤0}`` iff ``Z ∈ D^{≤-i}``, the condition for a fixed p gets
stronger as i grows.  On a constant piece ``[s, e]`` of Φ only ``i = e``
needs testing; on the unbounded top piece the condition holds for all large
i, which for a bounded complex means ``K_p ⊗ B`` is acyclic.  The same
argument applies to Y_Φ with ``RHom(Σ^{-i} K_p, Y) = Σ^i RHom(K_p, Y)``.

Reduction of a whole component
------------------------------
For a principal prime (x) the cohomology of ``K_(x) ⊗ B`` is assembled from
the cokernel and kernel of multiplication by x on ``H^*(B)``.  Over a PID
that only depends on whether x divides some torsion invariant factor, so the
primes dividing torsion invariant factors, the zero ideal and one further
("fresh") prime decide the condition for every prime of the component.

Perfect truncation classes
--------------------------
``X ∈ K^{≤n}`` iff ``H^j(X) = 0`` for ``j > n``: the part of X above n is
then an exact bounded complex of projectives ending in a projective, hence
split, and can be cut away.  ``K^{≥n}`` is the image of ``K^{≤-n}`` under
the duality ``RHom(-, R)``, so ``X ∈ K^{≥n}`` iff ``H^j(X^*) = 0`` for
``j > -n``.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .complexes import (CohomologyProfile, FactorComplex, FreeComplex, Triangle,
                        brutal_truncation, cohomology, cone, derived_hom_group,
                        derived_iso_test, direct_sum, dual, hom_complex, inclusion, shift,
                        tensor)
from .filtrations import (FiltrationBySupports, component_thresholds,
                          first_non_component_value, from_component_thresholds,
                          is_component_union)
from .koszul import prime_koszul, support_of_cohomology, torsion_primes
from .linalg import Mat
from .rings import RingDescriptor, UnsupportedOperation, ValidationError
from .spectrum import ALL, EMPTY, PrimeIdeal, SpecSubset, prime_to_json

# Φ threshold m  <->  CanonicalShift(THRESHOLD_SHIFT_OFFSET - m); fixed by
# cotstr.calibration.calibrate on the fixture corpus (tests re-run it).
THRESHOLD_SHIFT_OFFSET = 0


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("COTSTR_THREADS", "1")))
    except ValueError:
        return 1


def _pmap(fn, items):
    items = list(items)
    n = _workers()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


# ---------------------------------------------------------------------------
# canonical t-structure


def _top_degree(H: CohomologyProfile):
    return max(H.degrees) if H.groups else None


def _bottom_degree(H: CohomologyProfile):
    return min(H.degrees) if H.groups else None


def in_D_le(X: FreeComplex, n: int) -> bool:
    top = _top_degree(cohomology(X))
    return top is None or top <= n


def in_D_ge(X: FreeComplex, n: int) -> bool:
    bot = _bottom_degree(cohomology(X))
    return bot is None or bot >= n


def in_K_le(X: FreeComplex, n: int) -> bool:
    """X is isomorphic to a complex of projectives in degrees <= n."""
    return in_D_le(X, n)


def in_K_ge(X: FreeComplex, n: int) -> bool:
    """X is isomorphic to a complex of projectives in degrees >= n."""
    return in_D_le(dual(X), -n)


# ---------------------------------------------------------------------------
# B_Φ and Y_Φ


@dataclass(frozen=True)
class Witness:
    """A failing instance: index i (None for the +infinity tail), prime, degree.

    ``degree`` is a degree of nonzero cohomology of the shifted test object
    that violates the required bound.
    """

    index: int | None
    prime: PrimeIdeal
    degree: int

    def describe(self, R: RingDescriptor) -> dict:
        return {"i": "+inf" if self.index is None else self.index,
                "prime": prime_to_json(R, self.prime), "degree": self.degree}


@dataclass(frozen=True)
class Membership:
    verdict: bool
    witness: Witness | None = None

    def __bool__(self):
        return self.verdict


def primes_for_part(R: RingDescriptor, factor: int, part, H: CohomologyProfile,
                    fresh_index: int = 0) -> list[PrimeIdeal]:
    """Finite list of primes deciding a condition over one factor's value."""
    F = R[factor]
    if part == EMPTY:
        return []
    if part != ALL:
        return [PrimeIdeal(factor, g) for g in
                sorted(part, key=lambda g: (0, g, ()) if isinstance(g, int) else (1, g.degree, g.coeffs))]
    if not F.has_maximal_primes:
        return [PrimeIdeal(factor, None)]
    if not F.has_zero_prime:
        return [PrimeIdeal(factor, g) for g in [F.p]]
    tors = torsion_primes(H, factor)
    stream = F.fresh_primes(tors)
    for _ in range(fresh_index):
        next(stream)
    fresh = next(stream)
    return [PrimeIdeal(factor, None)] + [PrimeIdeal(factor, g) for g in tors] + \
        [PrimeIdeal(factor, fresh)]


def _decide(X: FreeComplex, phi: FiltrationBySupports, build: Callable, bad_degrees: Callable,
            fresh_index: int) -> Membership:
    R = X.ring
    if phi.ring != R:
        raise ValidationError("filtration and complex live on different rings")
    H = cohomology(X)
    cache: dict = {}

    def test_profile(p):
        if p not in cache:
            cache[p] = cohomology(build(prime_koszul(R, p), X))
        return cache[p]

    for start, end, value in phi.constant_pieces():
        for f in range(len(R)):
            for p in primes_for_part(R, f, value.parts[f], H, fresh_index):
                T = test_profile(p)
                bad = bad_degrees(T, end)
                if bad is not None:
                    return Membership(False, Witness(end, p, bad))
    return Membership(True)


def in_B_phi(B: FreeComplex, phi: FiltrationBySupports, fresh_index: int = 0) -> Membership:
    """Decide ``Σ^{-i} K_p ⊗ B ∈ D^{≤0}`` for all i and p ∈ Φ(i)."""
    def bad(T: CohomologyProfile, i):
        if not T.groups:
            return None
        top = max(T.degrees)
        if i is None:
            return top
        # Σ^{-i} moves degree j to j + i
        return top + i if top + i > 0 else None
    return _decide(B, phi, lambda K, X: tensor(K, X), bad, fresh_index)


def in_Y_phi(Y: FreeComplex, phi: FiltrationBySupports, fresh_index: int = 0) -> Membership:
    """Decide ``RHom(Σ^{-i} K_p, Y) ∈ D^{≥0}`` for all i and p ∈ Φ(i)."""
    def bad(T: CohomologyProfile, i):
        if not T.groups:
            return None
        bot = min(T.degrees)
        if i is None:
            return bot
        # RHom(Σ^{-i} K, Y) = Σ^i RHom(K, Y): degree j moves to j - i
        return bot - i if bot - i < 0 else None
    return _decide(Y, phi, lambda K, X: hom_complex(K, X), bad, fresh_index)


def in_B_phi_windowed(B: FreeComplex, phi: FiltrationBySupports, window: tuple[int, int],
                      primes: Iterable[PrimeIdeal]) -> bool:
    """Direct evaluation of the defining condition on a window and a prime list."""
    primes = list(primes)
    for i in range(window[0], window[1] + 1):
        value = phi.evaluate(i)
        for p in primes:
            if value.contains(p) and not in_D_le(tensor(shift(prime_koszul(B.ring, p), -i), B), 0):
                return False
    return True


def in_Y_phi_windowed(Y: FreeComplex, phi: FiltrationBySupports, window: tuple[int, int],
                      primes: Iterable[PrimeIdeal]) -> bool:
    primes = list(primes)
    for i in range(window[0], window[1] + 1):
        value = phi.evaluate(i)
        for p in primes:
            if value.contains(p) and not in_D_ge(
                    hom_complex(shift(prime_koszul(Y.ring, p), -i), Y), 0):
                return False
    return True


# ---------------------------------------------------------------------------
# co-t-structures on perfect complexes


ALL_LEFT = "Trivial_AllLeft"
ALL_RIGHT = "Trivial_AllRight"
SHIFT = "CanonicalShift"


@dataclass(frozen=True)
class FactorCoT:
    kind: str
    n: int | None = None

    def __post_init__(self):
        if self.kind not in (ALL_LEFT, ALL_RIGHT, SHIFT):
            raise ValidationError(f"unknown co-t-structure kind {self.kind!r}")
        if (self.kind == SHIFT) != (self.n is not None):
            raise ValidationError("CanonicalShift needs n; trivial kinds take none")

    def to_json(self):
        return {"kind": self.kind, "n": self.n} if self.kind == SHIFT else {"kind": self.kind}

    def __str__(self):
        return f"{self.kind}({self.n})" if self.kind == SHIFT else self.kind


@dataclass(frozen=True)
class CoTStructureDescriptor:
    """Per factor: all-left (A = everything), all-right (B = everything), or
    the pair (K^{≥n}, K^{≤n})."""

    ring: RingDescriptor
    entries: tuple[FactorCoT, ...]

    def __post_init__(self):
        if len(self.entries) != len(self.ring):
            raise ValidationError("one entry per ring factor required")

    @classmethod
    def canonical(cls, R: RingDescriptor, n: int = 0) -> "CoTStructureDescriptor":
        return cls(R, tuple(FactorCoT(SHIFT, n) for _ in R.factors))

    def in_A(self, X: FreeComplex) -> bool:
        for i, e in enumerate(self.entries):
            Xi = X.restrict(i)
            if e.kind == ALL_RIGHT and not _acyclic(Xi):
                return False
            if e.kind == SHIFT and not in_K_ge(Xi, e.n):
                return False
        return True

    def in_B(self, X: FreeComplex) -> bool:
        for i, e in enumerate(self.entries):
            Xi = X.restrict(i)
            if e.kind == ALL_LEFT and not _acyclic(Xi):
                return False
            if e.kind == SHIFT and not in_K_le(Xi, e.n):
                return False
        return True

    def cuts(self, X: FreeComplex) -> list[int]:
        """Per-factor brutal truncation degree realizing the approximation."""
        out = []
        for e, P in zip(self.entries, X.parts):
            if e.kind == SHIFT:
                out.append(e.n)
            elif e.kind == ALL_LEFT:
                out.append((P.lo if P.lo is not None else 0) - 1)
            else:
                out.append(P.hi if P.hi is not None else 0)
        return out

    def thresholds(self) -> list:
        inf = float("inf")
        out = []
        for e in self.entries:
            if e.kind == ALL_LEFT:
                out.append(inf)
            elif e.kind == ALL_RIGHT:
                out.append(-inf)
            else:
                out.append(THRESHOLD_SHIFT_OFFSET - e.n)
        return out

    def to_filtration(self) -> FiltrationBySupports:
        return from_component_thresholds(self.ring, self.thresholds())

    def to_json(self):
        return {"factors": [e.to_json() for e in self.entries]}

    @classmethod
    def from_json(cls, R: RingDescriptor, obj) -> "CoTStructureDescriptor":
        if isinstance(obj, dict):
            obj = obj.get("factors")
        if not isinstance(obj, list):
            raise ValidationError("descriptor must be {'factors': [...]}")
        entries = []
        for e in obj:
            if not isinstance(e, dict) or "kind" not in e:
                raise ValidationError(f"bad descriptor entry {e!r}")
            entries.append(FactorCoT(e["kind"], int(e["n"]) if e.get("n") is not None else None))
        return cls(R, tuple(entries))

    def __str__(self):
        return "(" + ", ".join(str(e) for e in self.entries) + ")"


def _acyclic(X: FreeComplex) -> bool:
    return cohomology(X).is_zero()


@dataclass(frozen=True)
class NotComponentUnion:
    index: int
    value: SpecSubset

    @property
    def message(self) -> str:
        return (f"Φ({self.index}) = {self.value} is not a union of connected components; "
                f"no perfect approximation of Σ^{self.index - 1}R exists, since "
                f"Supp H^{1 - self.index}(B) would have to be the complement of Φ({self.index}), "
                "which is not specialization closed")


def classify(R: RingDescriptor, phi: FiltrationBySupports):
    """Descriptor of the co-t-structure on perfect complexes, or :class:`NotComponentUnion`."""
    if phi.ring != R:
        raise ValidationError("filtration lives on a different ring")
    bad = first_non_component_value(phi)
    if bad is not None:
        return NotComponentUnion(*bad)
    inf = float("inf")
    entries = []
    for m in component_thresholds(phi):
        if m == inf:
            entries.append(FactorCoT(ALL_LEFT))
        elif m == -inf:
            entries.append(FactorCoT(ALL_RIGHT))
        else:
            entries.append(FactorCoT(SHIFT, THRESHOLD_SHIFT_OFFSET - m))
    return CoTStructureDescriptor(R, tuple(entries))


@dataclass(frozen=True)
class Approximation:
    """``Σ^{-1}A -> X -> B -> A`` realized by brutal truncation."""

    A: FreeComplex
    B: FreeComplex
    triangle: Triangle
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def approximation_triangle(X: FreeComplex, D: CoTStructureDescriptor,
                           certify: bool = True) -> Approximation:
    if D.ring != X.ring:
        raise ValidationError("descriptor and complex live on different rings")
    above, below, T = brutal_truncation(X, D.cuts(X))
    A = shift(above, 1)
    checks = {}
    if certify:
        checks = {
            "triangle": not T.verify(),
            "A_in_A": D.in_A(A),
            "B_in_B": D.in_B(below),
            "orthogonal": all(M.is_zero for M in derived_hom_group(above, below, 0)),
        }
    return Approximation(A, below, T, checks)


def support_complement_check(B: FreeComplex, phi: FiltrationBySupports, i: int) -> bool:
    """Supp H^{1-i}(B) equals the complement of Φ(i)."""
    if not is_component_union(phi):
        raise UnsupportedOperation(
            "support complement is only defined for component-union filtrations")
    return support_of_cohomology(B, 1 - i) == phi.evaluate(i).complement()


# ---------------------------------------------------------------------------
# axiom checkers (sample based: they can refute, never prove)


@dataclass
class AxiomReport:
    kind: str
    samples: int
    violations: list = field(default_factory=list)
    untestable: list = field(default_factory=list)
    counts: dict = field(default_factory=dict)
    note: str = ("sample-based check: a pass means no counterexample among the samples, "
                 "not that the axioms hold on the whole category")

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self):
        return {"kind": self.kind, "samples": self.samples, "passed": self.passed,
                "violations": self.violations, "untestable": self.untestable,
                "counts": self.counts, "note": self.note}


def _summand_checks(report, tag, decompositions, member_pairs):
    for k, (whole, parts) in enumerate(decompositions):
        if whole != direct_sum(*parts):
            report.violations.append({"axiom": tag, "decomposition": k,
                                      "reason": "recorded decomposition is not a direct sum"})
            continue
        for name, member in member_pairs:
            if member(whole):
                for j, P in enumerate(parts):
                    if not member(P):
                        report.violations.append({"axiom": tag, "class": name,
                                                  "decomposition": k, "summand": j})


class HomTable:
    """Memoized ``Hom(Σ^{-1}X_a, X_b) = 0`` over a fixed sample list."""

    def __init__(self, samples: Sequence[FreeComplex]):
        self.samples = list(samples)
        self._memo: dict = {}

    def __call__(self, a: int, b: int) -> bool:
        if (a, b) not in self._memo:
            self._memo[(a, b)] = all(M.is_zero for M in derived_hom_group(
                shift(self.samples[a], -1), self.samples[b], 0))
        return self._memo[(a, b)]


def check_co_t_axioms(samples: Sequence[FreeComplex], in_A: Callable, in_B: Callable,
                      decompositions: Sequence = (), approximate: Callable | None = None,
                      hom_table: HomTable | None = None) -> AxiomReport:
    """C0-C3 on a finite sample.

    ``decompositions`` lists ``(whole, [summands])``; ``approximate(X)``
    returns an :class:`Approximation` (or None if unavailable).  A shared
    :class:`HomTable` avoids recomputing Hom groups across descriptors.
    """
    rep = AxiomReport("co-t-structure", len(samples))
    _summand_checks(rep, "C0", decompositions, [("A", in_A), ("B", in_B)])
    memA = _pmap(in_A, samples)
    memB = _pmap(in_B, samples)
    for k, X in enumerate(samples):
        if memA[k] and not in_A(shift(X, -1)):
            rep.violations.append({"axiom": "C1", "class": "A", "sample": k})
        if memB[k] and not in_B(shift(X, 1)):
            rep.violations.append({"axiom": "C1", "class": "B", "sample": k})
    pairs = [(a, b) for a in range(len(samples)) if memA[a]
             for b in range(len(samples)) if memB[b]]

    table = hom_table if hom_table is not None else HomTable(samples)
    for (a, b), ok in zip(pairs, _pmap(lambda ab: table(*ab), pairs)):
        if not ok:
            rep.violations.append({"axiom": "C2", "A": a, "B": b})
    rep.counts = {"in_A": sum(memA), "in_B": sum(memB), "C2_pairs": len(pairs)}
    if approximate is None:
        rep.untestable.append("C3: no approximation procedure attached")
        return rep
    for k, X in enumerate(samples):
        ap = approximate(X)
        if ap is None:
            rep.untestable.append(f"C3: sample {k}")
            continue
        T = ap.triangle
        problems = T.verify()
        if problems or T.B != X:
            rep.violations.append({"axiom": "C3", "sample": k, "reason": problems or "middle term"})
        elif not in_A(shift(T.A, 1)) or not in_B(T.C):
            rep.violations.append({"axiom": "C3", "sample": k, "reason": "ends not in A, B"})
    return rep


def check_t_axioms(samples: Sequence[FreeComplex], in_X: Callable, in_Y: Callable,
                   decompositions: Sequence = (), approximate: Callable | None = None
                   ) -> AxiomReport:
    """T0-T3 on a finite sample.

    ``approximate(Z)`` returns a :class:`Triangle` ``X -> Z' -> Σ^{-1}Y -> ΣX``
    with ``Z'`` derived isomorphic to Z.
    """
    rep = AxiomReport("t-structure", len(samples))
    _summand_checks(rep, "T0", decompositions, [("X", in_X), ("Y", in_Y)])
    memX = _pmap(in_X, samples)
    memY = _pmap(in_Y, samples)
    for k, Z in enumerate(samples):
        if memX[k] and not in_X(shift(Z, 1)):
            rep.violations.append({"axiom": "T1", "class": "X", "sample": k})
        if memY[k] and not in_Y(shift(Z, -1)):
            rep.violations.append({"axiom": "T1", "class": "Y", "sample": k})
    pairs = [(a, b) for a in range(len(samples)) if memX[a]
             for b in range(len(samples)) if memY[b]]
    for a, b in pairs:
        if not all(M.is_zero for M in derived_hom_group(samples[a], shift(samples[b], -1), 0)):
            rep.violations.append({"axiom": "T2", "X": a, "Y": b})
    rep.counts = {"in_X": sum(memX), "in_Y": sum(memY), "T2_pairs": len(pairs)}
    if approximate is None:
        rep.untestable.append("T3: no approximation procedure attached")
        return rep
    for k, Z in enumerate(samples):
        T = approximate(Z)
        if T is None:
            rep.untestable.append(f"T3: sample {k}")
            continue
        problems = T.verify()
        if problems or not derived_iso_test(T.B, Z):
            rep.violations.append({"axiom": "T3", "sample": k, "reason": problems or "middle term"})
        elif not in_X(T.A) or not in_Y(shift(T.C, 1)):
            rep.violations.append({"axiom": "T3", "sample": k, "reason": "ends not in X, Y"})
    return rep


def canonical_t_approximation(Z: FreeComplex, n: int) -> Triangle:
    """Truncation triangle for (D^{≤n}, D^{≥n}) ∩ perfect over hereditary factors.

    Built on the formal model ``M = M_{≤n} ⊕ M_{>n}`` of Z, as the cone
    triangle of the inclusion of ``M_{≤n}``.  ``Σ^{-1}Y = cone`` is
    quasi-isomorphic to ``M_{>n}``.
    """
    R = Z.ring
    for F in R.factors:
        if not F.hereditary:
            raise UnsupportedOperation(f"t-truncation via formal models needs a hereditary factor, not {F}")
    low, high = [FreeComplex.zero(R)], [FreeComplex.zero(R)]
    for j, g in cohomology(Z).groups.items():
        for i, Mod in enumerate(g):
            F = R[i]
            pieces = []
            if Mod.free_rank:
                pieces.append(FactorComplex(F, {j: Mod.free_rank}, {}, i))
            for t in Mod.torsion:
                pieces.append(FactorComplex(F, {j - 1: 1, j: 1}, {j - 1: Mat(1, 1, ((t,),))}, i))
            for P in pieces:
                (low if j <= n else high).append(FreeComplex.on_factor(R, i, P))
    Xl, Xh = direct_sum(*low), direct_sum(*high)
    f = inclusion([Xl, Xh], 0)
    _, T = cone(f)
    return T


def right_adjacent_t_membership(n: int):
    """Membership oracles of the candidate right adjacent t-structure
    ``(K^{≤n}, D^{≥n} ∩ perfect)`` of ``(K^{≥n}, K^{≤n})``."""
    return (lambda X: in_K_le(X, n)), (lambda Y: in_D_ge(Y, n))
