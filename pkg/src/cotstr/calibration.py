"""Brute-force calibration of the threshold/shift constant.

For the threshold filtration Φ_m (all of Spec for i <= m, empty after) the
class B_Φ ∩ perfect should be K^{≤n} for a single n depending on m.  The
offset c with n = c - m is found by comparing both memberships on a corpus.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .complexes import FreeComplex, is_acyclic
from .filtrations import threshold_filtration
from .oracles import _pmap, in_B_phi, in_K_le
from .rings import ValidationError

M_RANGE = range(-2, 3)
N_RANGE = range(-4, 5)


class CalibrationError(ValidationError):
    pass


@dataclass(frozen=True)
class Calibration:
    offset: int
    table: dict  # (m, n) -> consistent on the corpus

    def to_json(self) -> dict:
        return {"offset": self.offset,
                "consistent_pairs": [[m, n] for (m, n), ok in sorted(self.table.items()) if ok]}


def calibrate(corpus: Sequence[FreeComplex]) -> Calibration:
    """The unique offset consistent with the corpus; raises on none or several."""
    corpus = list(corpus)
    if not corpus:
        raise CalibrationError("empty corpus: nothing to calibrate against")
    if all(is_acyclic(X) for X in corpus):
        raise CalibrationError("corpus has only acyclic complexes: every offset is consistent")
    rings = {X.ring for X in corpus}
    if len(rings) != 1:
        raise CalibrationError("corpus mixes rings")
    R = rings.pop()
    table = {}
    for m in M_RANGE:
        phi = threshold_filtration(R, m)
        b = _pmap(lambda X: bool(in_B_phi(X, phi)), corpus)
        for n in N_RANGE:
            k = [in_K_le(X, n) for X in corpus]
            table[(m, n)] = b == k
    offsets = []
    for c in range(min(N_RANGE) + max(M_RANGE), max(N_RANGE) + min(M_RANGE) + 1):
        if all(table[(m, c - m)] for m in M_RANGE):
            offsets.append(c)
    if len(offsets) != 1:
        raise CalibrationError(f"calibration is {'ambiguous' if offsets else 'inconsistent'}: "
                               f"consistent offsets {offsets}")
    return Calibration(offsets[0], table)
