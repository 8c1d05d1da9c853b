"""Prime ideals and finitely described specialization-closed subsets of Spec R.

Spec of a product ring is the disjoint union of the spectra of its factors.
Per factor a :class:`SpecSubset` is one of

* ``EMPTY``,
* ``ALL`` (the whole component), or
* a finite frozenset of closed points, given by normalized irreducibles.

A finite set of maximal ideals is always specialization closed, and any
specialization-closed set containing the generic point (0) is the whole
component, so every value of this type is specialization closed.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .rings import (ConnectedFactor, IntegersMod, RingDescriptor, UnsupportedOperation,
                    ValidationError)

EMPTY = "empty"
ALL = "all"


@dataclass(frozen=True)
class PrimeIdeal:
    """A prime of factor ``factor``; ``gen is None`` is the zero ideal."""

    factor: int
    gen: object = None

    @property
    def is_zero(self) -> bool:
        return self.gen is None

    def validate(self, R: RingDescriptor) -> "PrimeIdeal":
        if not 0 <= self.factor < len(R):
            raise ValidationError(f"prime refers to factor {self.factor} of a {len(R)}-factor ring")
        F = R[self.factor]
        if self.gen is None:
            if not F.has_zero_prime:
                raise ValidationError(f"(0) is not prime in {F}")
        elif not F.is_normalized_irreducible(self.gen):
            raise ValidationError(f"{F.format(self.gen)} is not a normalized irreducible of {F}")
        return self

    def label(self, R: RingDescriptor | None = None) -> str:
        g = "0" if self.gen is None else str(self.gen)
        return f"({g})@{self.factor}"

    def __str__(self):
        return self.label()


def prime(R: RingDescriptor, factor: int, gen=None) -> PrimeIdeal:
    """Build and validate a prime; ``gen`` may be a string in element syntax."""
    if not 0 <= factor < len(R):
        raise ValidationError(f"no factor {factor} in {R}")
    F = R[factor]
    if isinstance(gen, str):
        gen = None if gen.strip() == "0" else F.parse(gen)
    elif gen is not None:
        gen = F.element(gen)
    if gen is not None and F.is_zero(gen):
        gen = None  # e.g. (2) in Z/2
    return PrimeIdeal(factor, gen).validate(R)


def _canon_part(F: ConnectedFactor, part):
    if part in (EMPTY, ALL):
        return part
    s = frozenset(part)
    if not s:
        return EMPTY
    if not F.has_maximal_primes:
        raise ValidationError(f"{F} has no closed points besides its generic point")
    for g in s:
        if not F.is_normalized_irreducible(g):
            raise ValidationError(f"{F.format(g)} is not a normalized irreducible of {F}")
    if isinstance(F, IntegersMod):
        # Spec Z/p^k is the single point (p)
        return ALL
    return s


def _part_le(a, b) -> bool:
    if a == EMPTY or b == ALL:
        return True
    if a == ALL or b == EMPTY:
        return False
    return a <= b


@dataclass(frozen=True)
class SpecSubset:
    ring: RingDescriptor
    parts: tuple

    def __post_init__(self):
        if len(self.parts) != len(self.ring):
            raise ValidationError("one description per factor required")
        object.__setattr__(self, "parts", tuple(
            _canon_part(F, p) for F, p in zip(self.ring.factors, self.parts)))

    @classmethod
    def empty(cls, R):
        return cls(R, (EMPTY,) * len(R))

    @classmethod
    def full(cls, R):
        return cls(R, (ALL,) * len(R))

    @classmethod
    def components(cls, R, indices: Iterable[int]):
        idx = set(indices)
        return cls(R, tuple(ALL if i in idx else EMPTY for i in range(len(R))))

    @classmethod
    def closed_points(cls, R, primes: Iterable[PrimeIdeal]):
        """The set of the given maximal ideals (zero ideals are rejected)."""
        per = [set() for _ in R.factors]
        for q in primes:
            q.validate(R)
            if q.is_zero:
                raise ValidationError("(0) is not a closed point; use specialization_closure")
            per[q.factor].add(q.gen)
        return cls(R, tuple(per))

    def contains(self, q: PrimeIdeal) -> bool:
        part = self.parts[q.factor]
        if part == ALL:
            return True
        if part == EMPTY or q.is_zero:
            return False
        return q.gen in part

    __contains__ = contains

    def issubset(self, other: "SpecSubset") -> bool:
        return all(_part_le(a, b) for a, b in zip(self.parts, other.parts))

    __le__ = issubset

    def union(self, other: "SpecSubset") -> "SpecSubset":
        out = []
        for a, b in zip(self.parts, other.parts):
            if a == ALL or b == ALL:
                out.append(ALL)
            elif a == EMPTY:
                out.append(b)
            elif b == EMPTY:
                out.append(a)
            else:
                out.append(a | b)
        return SpecSubset(self.ring, tuple(out))

    __or__ = union

    def is_empty(self) -> bool:
        return all(p == EMPTY for p in self.parts)

    def is_component_union(self) -> bool:
        return all(p in (EMPTY, ALL) for p in self.parts)

    def complement(self) -> "SpecSubset":
        """Complement in Spec R; only unions of components have one here."""
        if not self.is_component_union():
            raise UnsupportedOperation(
                "the complement of a proper finite set of closed points is not "
                "specialization closed")
        return SpecSubset(self.ring, tuple(ALL if p == EMPTY else EMPTY for p in self.parts))

    def finite_primes(self, factor: int) -> list[PrimeIdeal]:
        part = self.parts[factor]
        if part in (EMPTY, ALL):
            return []
        F = self.ring[factor]
        return [PrimeIdeal(factor, g) for g in sorted(part, key=lambda g: _sort_key(F, g))]

    def describe(self) -> list:
        out = []
        for F, p in zip(self.ring.factors, self.parts):
            if p in (EMPTY, ALL):
                out.append(p)
            else:
                out.append(sorted((F.format(g) for g in p), key=lambda s: (len(s), s)))
        return out

    def __str__(self):
        bits = []
        for p in self.describe():
            if p == ALL:
                bits.append("Spec")
            elif p == EMPTY:
                bits.append("∅")
            else:
                bits.append("{" + ", ".join(f"({g})" for g in p) + "}")
        return bits[0] if len(bits) == 1 else " × ".join(bits)


def _sort_key(F, g):
    if isinstance(g, int):
        return (0, g, ())
    return (1, g.degree, g.coeffs)


def is_specialization_closed(R: RingDescriptor, primes: Iterable[PrimeIdeal]) -> bool:
    """Whether a finite raw set of primes is specialization closed.

    A listed zero ideal is only acceptable when the factor's whole spectrum is
    that single point (a field).
    """
    for q in primes:
        q.validate(R)
        if q.is_zero and R[q.factor].has_maximal_primes:
            return False
    return True


def specialization_closure(R: RingDescriptor, primes: Iterable[PrimeIdeal]) -> SpecSubset:
    per: list = [set() for _ in R.factors]
    for q in primes:
        q.validate(R)
        if q.is_zero or not R[q.factor].has_maximal_primes:
            per[q.factor] = ALL
        elif per[q.factor] != ALL:
            per[q.factor].add(q.gen)
    return SpecSubset(R, tuple(per))


def spec_subset_from_json(R: RingDescriptor, obj) -> SpecSubset:
    if isinstance(obj, dict):
        obj = obj.get("factors")
    if not isinstance(obj, list) or len(obj) != len(R):
        raise ValidationError(f"spec subset must list one entry per factor ({len(R)})")
    parts = []
    for F, p in zip(R.factors, obj):
        if p in (EMPTY, ALL):
            parts.append(p)
        elif isinstance(p, list):
            gens = set()
            for g in p:
                if str(g).strip() == "0":
                    raise ValidationError("(0) inside a finite set; use 'all' for the whole component")
                gens.add(F.parse(str(g)))
            parts.append(gens)
        else:
            raise ValidationError(f"bad spec subset entry {p!r}")
    return SpecSubset(R, tuple(parts))


def spec_subset_to_json(S: SpecSubset) -> list:
    return S.describe()


def prime_from_json(R: RingDescriptor, obj) -> PrimeIdeal:
    if not isinstance(obj, dict) or "factor" not in obj or "gen" not in obj:
        raise ValidationError(f"prime must be {{'factor': i, 'gen': '...'}}, got {obj!r}")
    return prime(R, int(obj["factor"]), str(obj["gen"]))


def prime_to_json(R: RingDescriptor, q: PrimeIdeal) -> dict:
    return {"factor": q.factor, "gen": "0" if q.is_zero else R[q.factor].format(q.gen)}
