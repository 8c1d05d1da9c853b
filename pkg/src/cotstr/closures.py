"""Extension towers (the ⋆ and ext closures) and silting checks.

A tower starts from a base object U_0 and repeatedly forms
``U_{k+1} = cone(f_k)`` for a chain map ``f_k: Σ^{-1}V_k -> U_k``, so that
``U_k -> U_{k+1} -> V_k -> ΣU_k`` is a triangle and ``U_{k+1} ∈ U_k ⋆ V_k``.
A final witness relates the last object to the target.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import linalg as la
from .complexes import (ChainMap, FreeComplex, cohomology, compose, cone_object,
                        derived_hom_group, derived_iso_test, hom_complex, quasi_iso_check, shift)
from .koszul import total_support
from .oracles import _pmap
from .rings import UnsupportedOperation, ValidationError
from .spectrum import SpecSubset


def _hereditary(R) -> bool:
    return all(F.hereditary for F in R.factors)


def _expect_map(f: ChainMap, source: FreeComplex, target: FreeComplex, what: str):
    if f.source != source or f.target != target:
        raise ValidationError(f"{what}: chain map has the wrong source or target")


def star_membership_witness(X: FreeComplex, U: FreeComplex, V: FreeComplex, f: ChainMap,
                            witness: ChainMap | None = None) -> bool:
    """Whether ``cone(f)`` is derived isomorphic to X, i.e. X ∈ U ⋆ V via f.

    Over non-hereditary factors ``witness`` (a map between cone(f) and X in
    either direction) is required and checked with :func:`quasi_iso_check`.
    """
    _expect_map(f, shift(V, -1), U, "f")
    C = cone_object(f)
    if witness is not None:
        if (witness.source, witness.target) not in ((C, X), (X, C)) or not witness.commutes()[0]:
            raise ValidationError("witness must be a chain map between cone(f) and X")
        return quasi_iso_check(witness)
    if not _hereditary(X.ring):
        raise UnsupportedOperation("non-hereditary factor: supply a quasi-isomorphism witness")
    return derived_iso_test(C, X)


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class Step:
    V: FreeComplex
    f: ChainMap
    result: FreeComplex | None = None


@dataclass(frozen=True)
class IdentityWitness:
    """The final object is X itself."""


@dataclass(frozen=True)
class QuasiIsoWitness:
    """A quasi-isomorphism between the final object and X (either direction)."""
    map: ChainMap


@dataclass(frozen=True)
class SummandWitness:
    """``section: X -> final`` and ``retraction: final -> X`` with a
    quasi-isomorphic composite, so X is a derived summand of the final object."""
    section: ChainMap
    retraction: ChainMap


@dataclass(frozen=True)
class DerivedIsoWitness:
    """Hereditary factors only: compare cohomology of final object and X."""


@dataclass(frozen=True)
class ExtensionTower:
    base: FreeComplex
    steps: tuple[Step, ...] = ()
    witness: object = field(default_factory=IdentityWitness)

    def objects(self) -> list[FreeComplex]:
        """U_0, U_1, ... computed from the steps (not from recorded results)."""
        out = [self.base]
        for s in self.steps:
            out.append(cone_object(s.f))
        return out

    @property
    def final(self) -> FreeComplex:
        return cone_object(self.steps[-1].f) if self.steps else self.base


@dataclass(frozen=True)
class CertificateCheck:
    ok: bool
    reason: str = ""
    step: int | None = None

    def __bool__(self):
        return self.ok


def verify_ext_certificate(X: FreeComplex, generators: Sequence[FreeComplex],
                           tower: ExtensionTower) -> CertificateCheck:
    """Check that the tower exhibits X ∈ ext(generators).

    The base and every V_k must be generators verbatim (or the base may be
    the zero object); shifts have to be listed explicitly.
    """
    gens = list(generators)
    if not (tower.base.is_zero_object() or tower.base in gens):
        return CertificateCheck(False, "base is not one of the generators", 0)
    U = tower.base
    for k, s in enumerate(tower.steps):
        if s.V not in gens:
            return CertificateCheck(False, "step object is not one of the generators", k)
        if s.f.source != shift(s.V, -1) or s.f.target != U:
            return CertificateCheck(False, "connecting map must go from Σ^{-1}V to the running object", k)
        ok, where = s.f.commutes()
        if not ok:
            return CertificateCheck(False, f"connecting map is not a chain map at {where}", k)
        U = cone_object(s.f)
        if s.result is not None and s.result != U:
            return CertificateCheck(False, "recorded result differs from the cone", k)
    w = tower.witness
    if isinstance(w, IdentityWitness):
        return CertificateCheck(U == X, "" if U == X else "final object is not X")
    if isinstance(w, QuasiIsoWitness):
        m = w.map
        if (m.source, m.target) not in ((U, X), (X, U)):
            return CertificateCheck(False, "witness map must relate the final object and X")
        if not m.commutes()[0]:
            return CertificateCheck(False, "witness map is not a chain map")
        ok = quasi_iso_check(m)
        return CertificateCheck(ok, "" if ok else "witness map is not a quasi-isomorphism")
    if isinstance(w, SummandWitness):
        s, r = w.section, w.retraction
        if (s.source, s.target, r.source, r.target) != (X, U, U, X):
            return CertificateCheck(False, "summand witness must be X -> final -> X")
        if not (s.commutes()[0] and r.commutes()[0]):
            return CertificateCheck(False, "summand witness maps are not chain maps")
        ok = quasi_iso_check(compose(r, s))
        return CertificateCheck(ok, "" if ok else "retraction ∘ section is not a quasi-isomorphism")
    if isinstance(w, DerivedIsoWitness):
        if not _hereditary(X.ring):
            return CertificateCheck(False, "cohomology comparison needs hereditary factors")
        ok = derived_iso_test(U, X)
        return CertificateCheck(ok, "" if ok else "final object and X have different cohomology")
    raise ValidationError(f"unknown witness {w!r}")


# ---------------------------------------------------------------------------
# associativity of ⋆


def _split_rows(F, M: la.Mat, top: int):
    return (la.submatrix(M, range(top), range(M.cols)),
            la.submatrix(M, range(top, M.rows), range(M.cols)))


@dataclass(frozen=True)
class Reassociation:
    """``(U ⋆ V) ⋆ W`` rewritten as ``U ⋆ (V ⋆ W)``.

    ``inner: Σ^{-1}W -> V`` has cone ``Y ∈ V ⋆ W``; ``outer: Σ^{-1}Y -> U``
    has cone equal (entry for entry) to the original final object.
    """
    inner: ChainMap
    Y: FreeComplex
    outer: ChainMap

    @property
    def final(self) -> FreeComplex:
        return cone_object(self.outer)


def reassociate(f1: ChainMap, f2: ChainMap) -> Reassociation:
    """``f1: Σ^{-1}V -> U`` and ``f2: Σ^{-1}W -> cone(f1)``.

    In degree n, ``cone(f1)^n = U^n ⊕ V^n`` so ``f2 = (a, b)``; the chain-map
    equations make ``b: Σ^{-1}W -> V`` a chain map and ``(f1, a)`` a chain map
    out of ``Σ^{-1}cone(b)``.  Both iterated cones are the complex
    ``U ⊕ V ⊕ W`` with differential ``[[dU, f1, a], [0, dV, b], [0, 0, dW]]``.
    """
    C1 = cone_object(f1)
    if f2.target != C1:
        raise ValidationError("f2 must land in cone(f1)")
    U = f1.target
    V = shift(f1.source, 1)
    SW = f2.source
    R = U.ring
    a_comps, b_comps = [], []
    for i, F in enumerate(R.factors):
        ai, bi = {}, {}
        for n in SW.parts[i].degrees:
            a, b = _split_rows(F, f2.at(i, n), U.parts[i].rank(n))
            ai[n], bi[n] = a, b
        a_comps.append(ai)
        b_comps.append(bi)
    b = ChainMap(SW, V, tuple(b_comps)).check()
    Y = cone_object(b)
    SY = shift(Y, -1)
    o_comps = []
    for i, F in enumerate(R.factors):
        c = {}
        for n in SY.parts[i].degrees:
            if not U.parts[i].rank(n):
                continue
            rv, rw = V.parts[i].rank(n - 1), SW.parts[i].rank(n)
            c[n] = la.block(F, [[f1.at(i, n), a_comps[i].get(n)]],
                            [U.parts[i].rank(n)], [rv, rw])
        o_comps.append(c)
    outer = ChainMap(SY, U, tuple(o_comps)).check()
    return Reassociation(b, Y, outer)


# ---------------------------------------------------------------------------
# bounded search (for generating test certificates)


def search_connecting_maps(source: FreeComplex, target: FreeComplex, entries: Sequence,
                           accept: Callable[[ChainMap], bool] | None = None,
                           limit: int = 200_000) -> ChainMap | None:
    """First chain map ``source -> target`` in lexicographic order whose matrix
    entries come from ``entries`` and which satisfies ``accept``.

    The order is: factors, then degrees ascending, then entries row-major,
    each position running through ``entries`` in the given order.
    """
    R = source.ring
    slots = []
    for i, F in enumerate(R.factors):
        for n in source.parts[i].degrees:
            r, c = target.parts[i].rank(n), source.parts[i].rank(n)
            for a in range(r):
                for b in range(c):
                    slots.append((i, n, a, b, r, c))
    vals = [[R[i].element(e) for e in entries] for i, *_ in slots]
    total = 1
    for v in vals:
        total *= len(v)
    if total > limit:
        raise ValidationError(f"search space of {total} candidates exceeds limit {limit}")

    def build(choice):
        mats: dict = {}
        for (i, n, a, b, r, c), x in zip(slots, choice):
            m = mats.setdefault((i, n), [[R[i].zero()] * c for _ in range(r)])
            m[a][b] = x
        comps = [dict() for _ in R.factors]
        for (i, n), m in mats.items():
            comps[i][n] = la.mat(R[i], m, cols=len(m[0]) if m else 0)
        f = ChainMap(source, target, tuple(comps))
        if not f.commutes()[0]:
            return None
        if accept is not None and not accept(f):
            return None
        return f

    batch = 256
    it = itertools.product(*vals)
    while True:
        chunk = list(itertools.islice(it, batch))
        if not chunk:
            return None
        for f in _pmap(build, chunk):
            if f is not None:
                return f


# ---------------------------------------------------------------------------
# silting


def hom_support_bound(S: FreeComplex) -> int:
    """``Hom(S, Σ^i S) = 0`` for ``i > hi - lo``: the Hom complex vanishes there."""
    if S.is_zero_object():
        return 0
    return S.hi - S.lo


@dataclass
class SiltingReport:
    silting: bool
    hom_vanishing: bool
    generation: bool
    window: int
    support_bound: int
    checked_up_to: int
    witness: dict | None = None
    generation_note: str = ("external criterion: the shifts of a perfect complex generate iff "
                            "its total cohomological support is all of Spec R")

    def to_json(self) -> dict:
        return {"silting": self.silting, "hom_vanishing": self.hom_vanishing,
                "generation": self.generation, "window": self.window,
                "support_bound": self.support_bound,
                "window_sufficient": self.window >= self.support_bound,
                "checked_up_to": self.checked_up_to, "witness": self.witness,
                "generation_note": self.generation_note}


def is_silting(S: FreeComplex, window: int) -> SiltingReport:
    """Hom(S, Σ^i S) = 0 for i > 0 and generation.

    Positive i are checked up to ``max(window, support bound)`` so the
    vanishing verdict is always complete.
    """
    if window < 1:
        raise ValidationError("window must be positive")
    bound = hom_support_bound(S)
    top = max(window, bound)
    H = cohomology(hom_complex(S, S))
    witness = None
    for i in range(1, top + 1):
        groups = H.at(i)
        if any(not M.is_zero for M in groups):
            witness = {"i": i, "groups": [M.describe() for M in groups]}
            break
    gen = total_support(S) == SpecSubset.full(S.ring)
    return SiltingReport(witness is None and gen, witness is None, gen, window, bound, top, witness)


def hom_vanishing_direct(S: FreeComplex, i: int) -> bool:
    return all(M.is_zero for M in derived_hom_group(S, S, i))
