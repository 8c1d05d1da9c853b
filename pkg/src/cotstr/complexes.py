"""Bounded cochain complexes of finitely generated projective modules.

Conventions (cohomological, differentials raise degree):

* ``shift(X, k)`` is Σ^k with ``shift(X, k)^n = X^(n+k)`` and differential
  multiplied by ``(-1)**k``, so ``H^j(ΣX) = H^(j+1)(X)``.  Chain maps shift
  without signs.
* ``cone(f)^n = B^n ⊕ A^(n+1)`` for ``f: A -> B`` with differential
  ``[[d_B, f], [0, -d_A]]``; the triangle is ``A -> B -> cone(f) -> ΣA``.
* ``tensor`` uses the Koszul sign ``d(x⊗y) = dx⊗y + (-1)^|x| x⊗dy`` and
  ``hom_complex`` the rule ``(Df) = d∘f - (-1)^k f∘d``.

A complex over a product ring R = R_0 × ... × R_s is stored as one complex
per factor (:class:`FactorComplex`); a f.g. projective R-module is a tuple of
free modules, one per factor, so ranks may differ between factors.
Bounded complexes of projectives are homotopically projective, which is why
Hom groups in the derived category are cohomology of the Hom complex.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from . import linalg as la
from .linalg import Mat
from .rings import (ConnectedFactor, IntegersMod, RingDescriptor, UnsupportedOperation,
                    ValidationError)


class DSquaredError(ValidationError):
    """A proposed differential does not square to zero."""

    def __init__(self, degree: int, factor: int = 0):
        self.degree = degree
        self.factor = factor
        super().__init__(f"d^{degree + 1} d^{degree} != 0 (factor {factor})")


class ChainMapError(ValidationError):
    pass


# ---------------------------------------------------------------------------
# complexes over one connected factor


@dataclass(frozen=True)
class FactorComplex:
    """Complex of free modules over one factor.

    ``ranks`` holds only nonzero ranks, ``diffs[n]`` (shape
    ``ranks[n+1] x ranks[n]``) only nonzero differentials.
    """

    F: ConnectedFactor
    ranks: Mapping[int, int] = field(default_factory=dict)
    diffs: Mapping[int, Mat] = field(default_factory=dict)
    index: int = 0

    def __post_init__(self):
        ranks = {int(n): int(r) for n, r in self.ranks.items() if r}
        if any(r < 0 for r in ranks.values()):
            raise ValidationError("ranks must be nonnegative")
        diffs = {}
        for n, d in self.diffs.items():
            n = int(n)
            want = (ranks.get(n + 1, 0), ranks.get(n, 0))
            if d.shape != want:
                raise ValidationError(f"d^{n} has shape {d.shape}, expected {want}")
            if want[0] and want[1] and not la.is_zero(self.F, d):
                diffs[n] = la.reduce_mat(self.F, d)
        object.__setattr__(self, "ranks", dict(sorted(ranks.items())))
        object.__setattr__(self, "diffs", dict(sorted(diffs.items())))
        for n in self.diffs:
            if n + 1 in self.diffs:
                if not la.is_zero(self.F, la.matmul(self.F, self.diffs[n + 1], self.diffs[n])):
                    raise DSquaredError(n, self.index)

    def rank(self, n: int) -> int:
        return self.ranks.get(n, 0)

    def d(self, n: int) -> Mat:
        got = self.diffs.get(n)
        if got is not None:
            return got
        return la.zeros(self.F, self.rank(n + 1), self.rank(n))

    @property
    def degrees(self) -> list[int]:
        return list(self.ranks)

    @property
    def lo(self):
        return min(self.ranks) if self.ranks else None

    @property
    def hi(self):
        return max(self.ranks) if self.ranks else None

    def is_zero_object(self) -> bool:
        return not self.ranks

    def _replace(self, ranks, diffs):
        return FactorComplex(self.F, ranks, diffs, self.index)


def _fc_shift(X: FactorComplex, k: int) -> FactorComplex:
    sign = -1 if k % 2 else 1
    ranks = {n - k: r for n, r in X.ranks.items()}
    diffs = {n - k: (la.neg(X.F, d) if sign < 0 else d) for n, d in X.diffs.items()}
    return X._replace(ranks, diffs)


def _fc_sum(Xs: list[FactorComplex]) -> FactorComplex:
    F = Xs[0].F
    degs = sorted({n for X in Xs for n in X.ranks})
    ranks = {n: sum(X.rank(n) for X in Xs) for n in degs}
    diffs = {}
    for n in degs:
        if ranks.get(n + 1, 0):
            blocks = [[X.d(n) if i == j else None for j, X in enumerate(Xs)]
                      for i, X in enumerate(Xs)]
            diffs[n] = la.block(F, blocks, [X.rank(n + 1) for X in Xs], [X.rank(n) for X in Xs])
    return Xs[0]._replace(ranks, diffs)


def _tensor_blocks(X: FactorComplex, Y: FactorComplex, n: int):
    out = []
    for a in X.degrees:
        b = n - a
        if Y.rank(b):
            out.append((a, b, X.rank(a) * Y.rank(b)))
    return out


def _fc_tensor(X: FactorComplex, Y: FactorComplex) -> FactorComplex:
    F = X.F
    degs = sorted({a + b for a in X.degrees for b in Y.degrees})
    ranks = {n: sum(s for _, _, s in _tensor_blocks(X, Y, n)) for n in degs}
    diffs = {}
    for n in degs:
        src = _tensor_blocks(X, Y, n)
        tgt = _tensor_blocks(X, Y, n + 1)
        if not tgt:
            continue
        blocks = []
        for (a2, b2, _) in tgt:
            row = []
            for (a, b, _) in src:
                if (a2, b2) == (a + 1, b):
                    row.append(la.kron(F, X.d(a), la.identity(F, Y.rank(b))))
                elif (a2, b2) == (a, b + 1):
                    blk = la.kron(F, la.identity(F, X.rank(a)), Y.d(b))
                    row.append(la.neg(F, blk) if a % 2 else blk)
                else:
                    row.append(None)
            blocks.append(row)
        diffs[n] = la.block(F, blocks, [s for *_, s in tgt], [s for *_, s in src])
    return X._replace(ranks, diffs)


def _hom_blocks(X: FactorComplex, Y: FactorComplex, k: int):
    out = []
    for j in X.degrees:
        if Y.rank(j + k):
            out.append((j, Y.rank(j + k) * X.rank(j)))
    return out


def _fc_hom(X: FactorComplex, Y: FactorComplex) -> FactorComplex:
    F = X.F
    degs = sorted({b - a for a in X.degrees for b in Y.degrees})
    ranks = {k: sum(s for _, s in _hom_blocks(X, Y, k)) for k in degs}
    diffs = {}
    for k in degs:
        src = _hom_blocks(X, Y, k)
        tgt = _hom_blocks(X, Y, k + 1)
        if not tgt:
            continue
        blocks = []
        for (j2, _) in tgt:
            row = []
            for (j, _) in src:
                if j == j2:
                    # f_j -> d_Y f_j
                    row.append(la.kron(F, Y.d(j + k), la.identity(F, X.rank(j))))
                elif j == j2 + 1:
                    # f_{j+1} -> -(-1)^k f_{j+1} d_X
                    blk = la.kron(F, la.identity(F, Y.rank(j2 + k + 1)), la.transpose(X.d(j2)))
                    row.append(blk if k % 2 else la.neg(F, blk))
                else:
                    row.append(None)
            blocks.append(row)
        diffs[k] = la.block(F, blocks, [s for _, s in tgt], [s for _, s in src])
    return X._replace(ranks, diffs)


# ---------------------------------------------------------------------------
# complexes over the product ring


@dataclass(frozen=True)
class FreeComplex:
    """Bounded complex of f.g. projectives over a product ring, one part per factor."""

    ring: RingDescriptor
    parts: tuple[FactorComplex, ...]

    def __post_init__(self):
        parts = tuple(self.parts)
        if len(parts) != len(self.ring):
            raise ValidationError("one factor complex per ring factor required")
        fixed = []
        for i, (F, P) in enumerate(zip(self.ring.factors, parts)):
            if P.F != F:
                raise ValidationError(f"part {i} is over {P.F}, ring factor is {F}")
            fixed.append(P if P.index == i else FactorComplex(P.F, P.ranks, P.diffs, i))
        object.__setattr__(self, "parts", tuple(fixed))

    # construction -------------------------------------------------------
    @classmethod
    def build(cls, R: RingDescriptor, ranks: Mapping, diffs: Mapping | None = None
              ) -> "FreeComplex":
        """Construct from per-degree data.

        For a one-factor ring ``ranks`` maps degree -> int and ``diffs`` maps
        degree -> matrix (nested lists or :class:`Mat`).  For product rings
        ranks are per-factor sequences and diffs per-factor sequences of
        matrices.
        """
        diffs = diffs or {}
        s = len(R)
        per_ranks = [dict() for _ in range(s)]
        for n, r in ranks.items():
            rs = [r] if isinstance(r, int) else list(r)
            if len(rs) != s:
                raise ValidationError(f"rank entry for degree {n} needs {s} values")
            for i, x in enumerate(rs):
                per_ranks[i][int(n)] = int(x)
        per_diffs = [dict() for _ in range(s)]
        for n, d in diffs.items():
            ds = [d] if s == 1 else list(d)
            if len(ds) != s:
                raise ValidationError(f"differential for degree {n} needs {s} matrices")
            for i, m in enumerate(ds):
                n_ = int(n)
                F = R[i]
                shape = (per_ranks[i].get(n_ + 1, 0), per_ranks[i].get(n_, 0))
                if isinstance(m, Mat):
                    per_diffs[i][n_] = m
                else:
                    per_diffs[i][n_] = la.mat(F, m, cols=shape[1]) if m or shape[0] == 0 \
                        else la.zeros(F, *shape)
        return cls(R, tuple(FactorComplex(F, per_ranks[i], per_diffs[i], i)
                            for i, F in enumerate(R.factors)))

    @classmethod
    def zero(cls, R: RingDescriptor) -> "FreeComplex":
        return cls(R, tuple(FactorComplex(F, {}, {}, i) for i, F in enumerate(R.factors)))

    @classmethod
    def unit(cls, R: RingDescriptor) -> "FreeComplex":
        """R in degree 0."""
        return cls(R, tuple(FactorComplex(F, {0: 1}, {}, i) for i, F in enumerate(R.factors)))

    @classmethod
    def free(cls, R: RingDescriptor, degree: int = 0, rank=1) -> "FreeComplex":
        rs = [rank] * len(R) if isinstance(rank, int) else list(rank)
        return cls(R, tuple(FactorComplex(F, {degree: r}, {}, i)
                            for i, (F, r) in enumerate(zip(R.factors, rs))))

    @classmethod
    def on_factor(cls, R: RingDescriptor, i: int, P: FactorComplex) -> "FreeComplex":
        """Extend a complex over factor ``i`` by zero on the other factors."""
        return cls(R, tuple(P if j == i else FactorComplex(F, {}, {}, j)
                            for j, F in enumerate(R.factors)))

    # accessors ------------------------------------------------------------
    def rank(self, n: int) -> tuple[int, ...]:
        return tuple(P.rank(n) for P in self.parts)

    def d(self, n: int) -> tuple[Mat, ...]:
        return tuple(P.d(n) for P in self.parts)

    @property
    def degrees(self) -> list[int]:
        return sorted({n for P in self.parts for n in P.ranks})

    @property
    def lo(self):
        ds = self.degrees
        return ds[0] if ds else None

    @property
    def hi(self):
        ds = self.degrees
        return ds[-1] if ds else None

    def total_rank(self) -> int:
        return sum(sum(P.ranks.values()) for P in self.parts)

    def is_zero_object(self) -> bool:
        return all(P.is_zero_object() for P in self.parts)

    def restrict(self, i: int) -> "FreeComplex":
        """The component of this complex on factor ``i`` (zero elsewhere)."""
        return FreeComplex.on_factor(self.ring, i, self.parts[i])

    def __repr__(self):
        bits = []
        for P in self.parts:
            bits.append("{" + ", ".join(f"{n}:{r}" for n, r in P.ranks.items()) + "}")
        return f"FreeComplex({self.ring}; ranks {' | '.join(bits)})"


def _check_same_ring(*Xs):
    R = Xs[0].ring
    for X in Xs[1:]:
        if X.ring != R:
            raise ValidationError(f"ring mismatch: {R} vs {X.ring}")
    return R


def shift(X: FreeComplex, k: int) -> FreeComplex:
    """Σ^k X."""
    if k == 0:
        return X
    return FreeComplex(X.ring, tuple(_fc_shift(P, k) for P in X.parts))


def direct_sum(*Xs: FreeComplex) -> FreeComplex:
    R = _check_same_ring(*Xs)
    return FreeComplex(R, tuple(_fc_sum([X.parts[i] for X in Xs]) for i in range(len(R))))


def tensor(X: FreeComplex, Y: FreeComplex) -> FreeComplex:
    R = _check_same_ring(X, Y)
    return FreeComplex(R, tuple(_fc_tensor(a, b) for a, b in zip(X.parts, Y.parts)))


def hom_complex(X: FreeComplex, Y: FreeComplex) -> FreeComplex:
    R = _check_same_ring(X, Y)
    return FreeComplex(R, tuple(_fc_hom(a, b) for a, b in zip(X.parts, Y.parts)))


def dual(X: FreeComplex) -> FreeComplex:
    """RHom(X, R)."""
    return hom_complex(X, FreeComplex.unit(X.ring))


# ---------------------------------------------------------------------------
# chain maps


@dataclass(frozen=True)
class ChainMap:
    """Degreewise matrices ``components[i][n]: source^n -> target^n`` on factor i."""

    source: FreeComplex
    target: FreeComplex
    components: tuple[Mapping[int, Mat], ...]

    def __post_init__(self):
        R = _check_same_ring(self.source, self.target)
        comps = tuple(self.components)
        if len(comps) != len(R):
            raise ChainMapError("one component table per factor required")
        clean = []
        for i, (F, S, T, c) in enumerate(zip(R.factors, self.source.parts,
                                             self.target.parts, comps)):
            out = {}
            for n, M in c.items():
                n = int(n)
                want = (T.rank(n), S.rank(n))
                if M.shape != want:
                    raise ChainMapError(f"component {n} on factor {i} has shape {M.shape}, "
                                        f"expected {want}")
                if want[0] and want[1] and not la.is_zero(F, M):
                    out[n] = la.reduce_mat(F, M)
            clean.append(dict(sorted(out.items())))
        object.__setattr__(self, "components", tuple(clean))

    @property
    def ring(self):
        return self.source.ring

    def at(self, i: int, n: int) -> Mat:
        got = self.components[i].get(n)
        if got is not None:
            return got
        F = self.ring[i]
        return la.zeros(F, self.target.parts[i].rank(n), self.source.parts[i].rank(n))

    def commutes(self) -> tuple[bool, tuple[int, int] | None]:
        """``(ok, (factor, degree))`` of the first failure of d f = f d."""
        for i, F in enumerate(self.ring.factors):
            S, T = self.source.parts[i], self.target.parts[i]
            for n in sorted(set(S.degrees) | set(T.degrees) | {x - 1 for x in T.degrees}):
                lhs = la.matmul(F, T.d(n), self.at(i, n))
                rhs = la.matmul(F, self.at(i, n + 1), S.d(n))
                if lhs != rhs and not la.is_zero(F, la.madd(F, lhs, la.neg(F, rhs))):
                    return False, (i, n)
        return True, None

    def check(self) -> "ChainMap":
        ok, where = self.commutes()
        if not ok:
            raise ChainMapError(f"not a chain map: fails on factor {where[0]} in degree {where[1]}")
        return self

    def is_zero(self) -> bool:
        return all(not c for c in self.components)


def chain_map(source: FreeComplex, target: FreeComplex, components: Mapping) -> ChainMap:
    """Build and check a chain map; for one-factor rings ``components`` maps
    degree -> matrix, otherwise degree -> per-factor matrices."""
    R = _check_same_ring(source, target)
    per = [dict() for _ in R.factors]
    for n, c in components.items():
        cs = [c] if len(R) == 1 else list(c)
        for i, M in enumerate(cs):
            n_ = int(n)
            F = R[i]
            shape = (target.parts[i].rank(n_), source.parts[i].rank(n_))
            if not isinstance(M, Mat):
                M = la.mat(F, M, cols=shape[1]) if M else la.zeros(F, *shape)
            per[i][n_] = M
    return ChainMap(source, target, tuple(per)).check()


def identity_map(X: FreeComplex) -> ChainMap:
    return ChainMap(X, X, tuple({n: la.identity(F, r) for n, r in P.ranks.items()}
                                for F, P in zip(X.ring.factors, X.parts)))


def zero_map(X: FreeComplex, Y: FreeComplex) -> ChainMap:
    return ChainMap(X, Y, tuple({} for _ in X.ring.factors))


def compose(g: ChainMap, f: ChainMap) -> ChainMap:
    """g ∘ f."""
    if f.target != g.source:
        raise ChainMapError("cannot compose: target of f is not the source of g")
    comps = []
    for i, F in enumerate(f.ring.factors):
        degs = set(f.components[i]) & set(g.components[i])
        comps.append({n: la.matmul(F, g.at(i, n), f.at(i, n)) for n in degs})
    return ChainMap(f.source, g.target, tuple(comps))


def map_add(f: ChainMap, g: ChainMap) -> ChainMap:
    if (f.source, f.target) != (g.source, g.target):
        raise ChainMapError("cannot add maps with different source/target")
    comps = []
    for i, F in enumerate(f.ring.factors):
        degs = set(f.components[i]) | set(g.components[i])
        comps.append({n: la.madd(F, f.at(i, n), g.at(i, n)) for n in degs})
    return ChainMap(f.source, f.target, tuple(comps))


def map_neg(f: ChainMap) -> ChainMap:
    return ChainMap(f.source, f.target, tuple(
        {n: la.neg(F, M) for n, M in c.items()} for F, c in zip(f.ring.factors, f.components)))


def shift_map(f: ChainMap, k: int) -> ChainMap:
    return ChainMap(shift(f.source, k), shift(f.target, k),
                    tuple({n - k: M for n, M in c.items()} for c in f.components))


def inclusion(summands: list[FreeComplex], j: int) -> ChainMap:
    """Canonical inclusion of summand ``j`` into ``direct_sum(*summands)``."""
    S = direct_sum(*summands)
    comps = []
    for i, F in enumerate(S.ring.factors):
        c = {}
        for n in S.parts[i].degrees:
            r = summands[j].parts[i].rank(n)
            if not r:
                continue
            blocks = [[la.identity(F, r) if k == j else None] for k in range(len(summands))]
            c[n] = la.block(F, blocks, [X.parts[i].rank(n) for X in summands], [r])
        comps.append(c)
    return ChainMap(summands[j], S, tuple(comps))


def projection(summands: list[FreeComplex], j: int) -> ChainMap:
    S = direct_sum(*summands)
    comps = []
    for i, F in enumerate(S.ring.factors):
        c = {}
        for n in S.parts[i].degrees:
            r = summands[j].parts[i].rank(n)
            if not r:
                continue
            blocks = [[la.identity(F, r) if k == j else None for k in range(len(summands))]]
            c[n] = la.block(F, blocks, [r], [X.parts[i].rank(n) for X in summands])
        comps.append(c)
    return ChainMap(S, summands[j], tuple(comps))


def map_sum(fs: list[ChainMap]) -> ChainMap:
    """Block-diagonal map ⊕ f_k between the direct sums of sources and targets."""
    S = direct_sum(*[f.source for f in fs])
    T = direct_sum(*[f.target for f in fs])
    comps = []
    for i, F in enumerate(S.ring.factors):
        c = {}
        for n in S.parts[i].degrees:
            if not T.parts[i].rank(n):
                continue
            blocks = [[f.at(i, n) if a == b else None for b, f in enumerate(fs)]
                      for a, _ in enumerate(fs)]
            c[n] = la.block(F, blocks, [f.target.parts[i].rank(n) for f in fs],
                            [f.source.parts[i].rank(n) for f in fs])
        comps.append(c)
    return ChainMap(S, T, tuple(comps))


def map_from_hom_cocycle(X: FreeComplex, Y: FreeComplex, vectors: tuple) -> ChainMap:
    """Turn a degree-0 element of ``hom_complex(X, Y)`` (one coordinate vector
    per factor) into the corresponding degreewise family of matrices."""
    comps = []
    for i, F in enumerate(X.ring.factors):
        P, Q = X.parts[i], Y.parts[i]
        v = list(vectors[i])
        c, pos = {}, 0
        for j, size in _hom_blocks(P, Q, 0):
            rY, rX = Q.rank(j), P.rank(j)
            chunk = v[pos:pos + size]
            pos += size
            c[j] = Mat(rY, rX, tuple(tuple(chunk[r * rX:(r + 1) * rX]) for r in range(rY)))
        comps.append(c)
    return ChainMap(X, Y, tuple(comps))


# ---------------------------------------------------------------------------
# cones, triangles, truncations


def cone_object(f: ChainMap) -> FreeComplex:
    A, B = f.source, f.target
    parts = []
    for i, F in enumerate(A.ring.factors):
        PA, PB = A.parts[i], B.parts[i]
        degs = sorted(set(PB.degrees) | {n - 1 for n in PA.degrees})
        ranks = {n: PB.rank(n) + PA.rank(n + 1) for n in degs}
        diffs = {}
        for n in degs:
            rows = [PB.rank(n + 1), PA.rank(n + 2)]
            cols = [PB.rank(n), PA.rank(n + 1)]
            if not sum(rows):
                continue
            blocks = [[PB.d(n), f.at(i, n + 1)], [None, la.neg(F, PA.d(n + 1))]]
            diffs[n] = la.block(F, blocks, rows, cols)
        parts.append(FactorComplex(F, ranks, diffs, i))
    return FreeComplex(A.ring, tuple(parts))


def _cone_maps(f: ChainMap, C: FreeComplex):
    A, B = f.source, f.target
    SA = shift(A, 1)
    g, h = [], []
    for i, F in enumerate(A.ring.factors):
        PA, PB = A.parts[i], B.parts[i]
        gi, hi = {}, {}
        for n in C.parts[i].degrees:
            rb, ra = PB.rank(n), PA.rank(n + 1)
            if rb:
                gi[n] = la.block(F, [[la.identity(F, rb)], [None]], [rb, ra], [rb])
            if ra:
                hi[n] = la.block(F, [[None, la.identity(F, ra)]], [ra], [rb, ra])
        g.append(gi)
        h.append(hi)
    return ChainMap(B, C, tuple(g)), ChainMap(C, SA, tuple(h))


@dataclass(frozen=True)
class Triangle:
    """A triangle ``A -f-> B -g-> C -h-> ΣA``.

    Either ``C`` is bit-exact ``cone(f)`` with the canonical ``g``, ``h``, or
    ``cone_iso`` is a quasi-isomorphism ``cone(f) -> C`` carrying the
    canonical ``g`` to ``g``.
    """

    A: FreeComplex
    B: FreeComplex
    C: FreeComplex
    f: ChainMap
    g: ChainMap
    h: ChainMap
    cone_iso: ChainMap | None = None

    def verify(self) -> list[str]:
        """List of violated conditions (empty when the triangle is valid)."""
        problems = []
        for name, m in (("f", self.f), ("g", self.g), ("h", self.h)):
            ok, where = m.commutes()
            if not ok:
                problems.append(f"{name} is not a chain map at {where}")
        if (self.f.source, self.f.target) != (self.A, self.B):
            problems.append("f: A -> B mismatch")
        if (self.g.source, self.g.target) != (self.B, self.C):
            problems.append("g: B -> C mismatch")
        if (self.h.source, self.h.target) != (self.C, shift(self.A, 1)):
            problems.append("h: C -> ΣA mismatch")
        if problems:
            return problems
        C0 = cone_object(self.f)
        g0, h0 = _cone_maps(self.f, C0)
        if self.cone_iso is None:
            if (C0, g0, h0) != (self.C, self.g, self.h):
                problems.append("C is not the canonical cone of f")
        else:
            phi = self.cone_iso
            if (phi.source, phi.target) != (C0, self.C):
                problems.append("cone_iso must map cone(f) -> C")
            elif not quasi_iso_check(phi):
                problems.append("cone_iso is not a quasi-isomorphism")
            elif compose(phi, g0) != self.g:
                problems.append("cone_iso does not carry the canonical map B -> cone(f) to g")
        return problems


def cone(f: ChainMap) -> tuple[FreeComplex, Triangle]:
    C = cone_object(f)
    g, h = _cone_maps(f, C)
    return C, Triangle(f.source, f.target, C, f, g, h)


def brutal_truncation(X: FreeComplex, n):
    """Degreewise split triangle ``above -> X -> below -> Σ(above)``.

    ``below`` keeps degrees <= n and ``above`` degrees > n; the connecting
    map is minus the discarded differential ``d^n``.  ``n`` may also be a
    sequence with one cut per ring factor.
    """
    R = X.ring
    cuts = [n] * len(R) if isinstance(n, int) else list(n)
    if len(cuts) != len(R):
        raise ValidationError("one cut per factor required")
    above_parts, below_parts = [], []
    for P, n in zip(X.parts, cuts):
        above_parts.append(P._replace({m: r for m, r in P.ranks.items() if m > n},
                                      {m: d for m, d in P.diffs.items() if m > n}))
        below_parts.append(P._replace({m: r for m, r in P.ranks.items() if m <= n},
                                      {m: d for m, d in P.diffs.items() if m < n}))
    above = FreeComplex(R, tuple(above_parts))
    below = FreeComplex(R, tuple(below_parts))
    f = ChainMap(above, X, tuple({m: la.identity(F, r) for m, r in P.ranks.items()}
                                 for F, P in zip(R.factors, above.parts)))
    g = ChainMap(X, below, tuple({m: la.identity(F, r) for m, r in P.ranks.items()}
                                 for F, P in zip(R.factors, below.parts)))
    h_comps = []
    for i, (F, P, n) in enumerate(zip(R.factors, X.parts, cuts)):
        h_comps.append({n: la.neg(F, P.d(n))} if P.rank(n) and P.rank(n + 1) else {})
    h = ChainMap(below, shift(above, 1), tuple(h_comps))
    C0 = cone_object(f)
    phi_comps = []
    for i, (F, P, n) in enumerate(zip(R.factors, X.parts, cuts)):
        c = {}
        for m in C0.parts[i].degrees:
            if m <= n and P.rank(m):
                c[m] = la.block(F, [[la.identity(F, P.rank(m)), None]],
                                [P.rank(m)], [P.rank(m), above.parts[i].rank(m + 1)])
        phi_comps.append(c)
    phi = ChainMap(C0, below, tuple(phi_comps))
    T = Triangle(above, X, below, f, g, h, cone_iso=phi)
    return above, below, T


# ---------------------------------------------------------------------------
# cohomology


@dataclass(frozen=True)
class ModuleProfile:
    """A f.g. module over one factor: free rank plus invariant-factor chain.

    Over ``IntegersMod(p**k)`` free summands are copies of the ring and
    torsion entries are ``p**v`` with ``0 < v < k``.
    """

    factor: int
    F: ConnectedFactor
    free_rank: int = 0
    torsion: tuple = ()

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def describe(self) -> dict:
        return {"factor": self.factor, "free_rank": self.free_rank,
                "torsion": [self.F.format(t) for t in self.torsion]}

    def __str__(self):
        bits = []
        if self.free_rank:
            bits.append(f"R^{self.free_rank}")
        bits += [f"R/({self.F.format(t)})" for t in self.torsion]
        return " + ".join(bits) or "0"


def _normalize_chain(F, ds):
    out = []
    for d in ds:
        if F.is_zero(d) or F.is_unit(d):
            continue
        out.append(F.normal_part(d)[1])
    return tuple(out)


class _FactorCohomology:
    """Cached Smith data of the differentials of one factor complex."""

    def __init__(self, P: FactorComplex):
        self.P = P
        self._rank = {}
        self._inv = {}

    def _snf(self, n):
        if n not in self._rank:
            d = self.P.d(n)
            if not d.rows or not d.cols or n not in self.P.diffs:
                self._rank[n], self._inv[n] = 0, []
            else:
                invs = la.invariant_factors(self.P.F, d)
                self._rank[n], self._inv[n] = len(invs), invs
        return self._rank[n], self._inv[n]

    def at(self, j: int) -> ModuleProfile:
        P, F = self.P, self.P.F
        nj = P.rank(j)
        if not nj:
            return ModuleProfile(P.index, F)
        if isinstance(F, IntegersMod) and not F.is_field:
            return self._at_mod(j)
        rb, _ = self._snf(j)
        ra, inv = self._snf(j - 1)
        return ModuleProfile(P.index, F, nj - rb - ra, _normalize_chain(F, inv))

    def _at_mod(self, j):
        # H^j = K / (im d^{j-1} + m Z^n) with K = {x : d^j x = 0 mod m}
        P, F = self.P, self.P.F
        nj = P.rank(j)
        K = la.mod_kernel_lattice(F, P.d(j)) if P.rank(j + 1) else la.identity(la.ZZ, nj)
        L = la.column_lattice_with_modulus(P.d(j - 1), F.m)
        free_z, invs = la.lattice_subquotient(K, L)
        assert free_z == 0
        free = sum(1 for e in invs if e == F.m)
        tors = tuple(sorted(e for e in invs if e != F.m))
        return ModuleProfile(P.index, F, free, tors)


@dataclass(frozen=True)
class CohomologyProfile:
    """Nonzero cohomology: degree -> per-factor :class:`ModuleProfile`."""

    ring: RingDescriptor
    groups: Mapping[int, tuple[ModuleProfile, ...]]

    def at(self, j: int) -> tuple[ModuleProfile, ...]:
        got = self.groups.get(j)
        if got is not None:
            return got
        return tuple(ModuleProfile(i, F) for i, F in enumerate(self.ring.factors))

    def on_factor(self, i: int) -> dict[int, ModuleProfile]:
        return {j: g[i] for j, g in self.groups.items() if not g[i].is_zero}

    @property
    def degrees(self) -> list[int]:
        return list(self.groups)

    def is_zero(self) -> bool:
        return not self.groups

    def describe(self) -> dict:
        return {str(j): [m.describe() for m in g] for j, g in self.groups.items()}


def cohomology(X: FreeComplex) -> CohomologyProfile:
    groups = {}
    per = [_FactorCohomology(P) for P in X.parts]
    for j in X.degrees:
        g = tuple(c.at(j) for c in per)
        if not all(m.is_zero for m in g):
            groups[j] = g
    return CohomologyProfile(X.ring, groups)


def cohomology_at(X: FreeComplex, j: int) -> tuple[ModuleProfile, ...]:
    return tuple(_FactorCohomology(P).at(j) for P in X.parts)


def is_acyclic(X: FreeComplex) -> bool:
    return cohomology(X).is_zero()


def derived_hom_group(X: FreeComplex, Y: FreeComplex, i: int) -> tuple[ModuleProfile, ...]:
    """Hom_D(X, Σ^i Y) per factor."""
    return cohomology_at(hom_complex(X, Y), i)


def derived_iso_test(X: FreeComplex, Y: FreeComplex) -> bool:
    """Derived isomorphism over hereditary factors (formality: compare cohomology)."""
    R = _check_same_ring(X, Y)
    bad = [str(F) for F in R.factors if not F.hereditary]
    if bad:
        raise UnsupportedOperation(
            f"derived_iso_test needs hereditary factors; {', '.join(bad)} is not. "
            "Use quasi_iso_check with an explicit comparison map instead.")
    return cohomology(X) == cohomology(Y)


def quasi_iso_check(f: ChainMap) -> bool:
    return is_acyclic(cone_object(f))


def euler_characteristic(X: FreeComplex, i: int = 0) -> int:
    return sum((-1) ** (n % 2) * r for n, r in X.parts[i].ranks.items())


def formal_model(X: FreeComplex) -> FreeComplex:
    """Over hereditary factors: ⊕_j (resolution of H^j(X)) placed at degree j.

    A free summand R in degree j is R in degree j; a torsion summand R/(t)
    is ``[R -t-> R]`` in degrees j-1, j.
    """
    R = X.ring
    if not all(F.hereditary for F in R.factors):
        raise UnsupportedOperation("formal models exist only over hereditary factors")
    H = cohomology(X)
    pieces = [FreeComplex.zero(R)]
    for j, g in H.groups.items():
        for i, M in enumerate(g):
            F = R[i]
            if M.free_rank:
                pieces.append(FreeComplex.on_factor(
                    R, i, FactorComplex(F, {j: M.free_rank}, {}, i)))
            for t in M.torsion:
                pieces.append(FreeComplex.on_factor(
                    R, i, FactorComplex(F, {j - 1: 1, j: 1}, {j - 1: Mat(1, 1, ((t,),))}, i)))
    return direct_sum(*pieces)


def iter_factor_degrees(X: FreeComplex) -> Iterable[tuple[int, int]]:
    for i, P in enumerate(X.parts):
        for n in P.degrees:
            yield i, n
