"""Filtrations of Spec R by supports, in eventually-constant encoding.

A filtration is a decreasing map Φ: Z -> {specialization-closed subsets}.
Only finitely many distinct values occur in the encodings used here: a value
``low`` for all i before the first threshold, then ``(t_k, S_k)`` meaning
Φ(i) = S_k for t_k <= i < t_{k+1}; the last value holds up to +infinity.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .complexes import FreeComplex, shift
from .koszul import prime_koszul
from .rings import RingDescriptor, ValidationError
from .spectrum import ALL, PrimeIdeal, SpecSubset, spec_subset_from_json, spec_subset_to_json


class FiltrationError(ValidationError):
    pass


@dataclass(frozen=True)
class FiltrationBySupports:
    low: SpecSubset
    steps: tuple[tuple[int, SpecSubset], ...] = ()

    def __post_init__(self):
        R = self.low.ring
        steps = sorted(((int(t), S) for t, S in self.steps), key=lambda ts: ts[0])
        for (t1, _), (t2, _) in zip(steps, steps[1:]):
            if t1 == t2:
                raise FiltrationError(f"threshold {t1} appears twice")
        merged = []
        prev = self.low
        for t, S in steps:
            if S.ring != R:
                raise FiltrationError("all values must live on the same ring")
            if not S <= prev:
                raise FiltrationError(
                    f"not decreasing: value at threshold {t} ({S}) is not contained in "
                    f"the previous value ({prev})")
            if S != prev:
                merged.append((t, S))
            prev = S
        object.__setattr__(self, "steps", tuple(merged))

    @property
    def ring(self) -> RingDescriptor:
        return self.low.ring

    @property
    def thresholds(self) -> list[int]:
        return [t for t, _ in self.steps]

    @property
    def tail(self) -> SpecSubset:
        """The value for all sufficiently large i."""
        return self.steps[-1][1] if self.steps else self.low

    def values(self) -> list[SpecSubset]:
        return [self.low] + [S for _, S in self.steps]

    def evaluate(self, i: int) -> SpecSubset:
        out = self.low
        for t, S in self.steps:
            if t <= i:
                out = S
            else:
                break
        return out

    __call__ = evaluate

    def constant_pieces(self):
        """``(start, end, value)`` for each constant piece; ``None`` marks ±infinity."""
        out = []
        start = None
        value = self.low
        for t, S in self.steps:
            out.append((start, t - 1, value))
            start, value = t, S
        out.append((start, None, value))
        return out

    def window(self, margin: int = 2) -> tuple[int, int]:
        ts = self.thresholds or [0]
        return min(ts) - margin, max(ts) + margin

    def to_json(self) -> dict:
        return {"low": spec_subset_to_json(self.low),
                "steps": [[t, spec_subset_to_json(S)] for t, S in self.steps]}

    @classmethod
    def from_json(cls, R: RingDescriptor, obj) -> "FiltrationBySupports":
        if not isinstance(obj, dict) or "low" not in obj:
            raise FiltrationError("filtration must be {'low': ..., 'steps': [[t, value], ...]}")
        low = spec_subset_from_json(R, obj["low"])
        steps = []
        for entry in obj.get("steps", []):
            if not isinstance(entry, list) or len(entry) != 2:
                raise FiltrationError(f"bad step {entry!r}")
            steps.append((int(entry[0]), spec_subset_from_json(R, entry[1])))
        return cls(low, tuple(steps))


def validate(phi: FiltrationBySupports) -> FiltrationBySupports:
    """Re-run the construction checks (decreasing, specialization closed)."""
    return FiltrationBySupports(phi.low, phi.steps)


def evaluate(phi: FiltrationBySupports, i: int) -> SpecSubset:
    return phi.evaluate(i)


def threshold_filtration(R: RingDescriptor, m: int) -> FiltrationBySupports:
    """Φ(i) = Spec R for i <= m and empty afterwards."""
    return FiltrationBySupports(SpecSubset.full(R), ((m + 1, SpecSubset.empty(R)),))


def constant_filtration(S: SpecSubset) -> FiltrationBySupports:
    return FiltrationBySupports(S, ())


def from_component_thresholds(R: RingDescriptor, thresholds: Sequence) -> FiltrationBySupports:
    """Component-union filtration: factor f lies in Φ(i) iff i <= thresholds[f].

    ``float('inf')`` means always, ``-float('inf')`` never.
    """
    if len(thresholds) != len(R):
        raise FiltrationError("one threshold per factor required")
    inf = float("inf")
    low = SpecSubset.components(R, [f for f, m in enumerate(thresholds) if m != -inf])
    cuts = sorted({int(m) + 1 for m in thresholds if m not in (inf, -inf)})
    steps = []
    for t in cuts:
        steps.append((t, SpecSubset.components(
            R, [f for f, m in enumerate(thresholds) if m == inf or (m != -inf and m >= t)])))
    return FiltrationBySupports(low, tuple(steps))


def is_component_union(phi: FiltrationBySupports) -> bool:
    return all(S.is_component_union() for S in phi.values())


def first_non_component_value(phi: FiltrationBySupports):
    """``(i, value)`` of the first value that is not a union of components, or None."""
    for start, end, S in phi.constant_pieces():
        if not S.is_component_union():
            i = start if start is not None else (end if end is not None else 0)
            return i, S
    return None


def component_thresholds(phi: FiltrationBySupports) -> list:
    """For component-union Φ: per factor the largest i with the factor in Φ(i)."""
    inf = float("inf")
    out = []
    for f in range(len(phi.ring)):
        if phi.tail.parts[f] == ALL:
            out.append(inf)
            continue
        if phi.low.parts[f] != ALL:
            out.append(-inf)
            continue
        last = None
        for t, S in phi.steps:
            if S.parts[f] != ALL:
                last = t - 1
                break
        out.append(last)
    return out


# ---------------------------------------------------------------------------
# recovering Φ from an aisle


@dataclass(frozen=True)
class AisleInconsistency(Exception):
    prime: PrimeIdeal
    index: int

    def __str__(self):
        return (f"aisle oracle is not decreasing for {self.prime}: "
                f"accepts index {self.index} but rejects {self.index - 1}")


def phi_from_aisle(R: RingDescriptor, primes: Iterable[PrimeIdeal], window: tuple[int, int],
                   oracle: Callable[[FreeComplex], bool]) -> dict:
    """Table ``{(i, p): Σ^{-i}(R/p) in aisle}`` for i in the window.

    R/p is represented by its Koszul resolution.  Raises
    :class:`AisleInconsistency` if a column is not decreasing in i.
    """
    a, b = window
    table = {}
    for p in primes:
        K = prime_koszul(R, p)
        prev = None
        for i in range(a, b + 1):
            v = bool(oracle(shift(K, -i)))
            if v and prev is False:
                raise AisleInconsistency(p, i)
            table[(i, p)] = v
            prev = v
    return table
