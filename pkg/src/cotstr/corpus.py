"""The stock sample corpus (24 complexes per ring) used by calibration and
the axiom checks.  Built deterministically; ``fixtures/complexes`` holds the
serialized copy."""
from __future__ import annotations

import random

from .complexes import (FactorComplex, FreeComplex, cone_object, direct_sum, identity_map,
                        shift, tensor)
from .linalg import Mat
from .rings import RingDescriptor


def _two_term(R: RingDescriptor, x, lo: int) -> FreeComplex:
    """[R -x-> R] in degrees lo, lo+1 on every factor."""
    parts = tuple(FactorComplex(F, {lo: 1, lo + 1: 1}, {lo: Mat(1, 1, ((F.element(x),),))}, i)
                  for i, F in enumerate(R.factors))
    return FreeComplex(R, parts)


def _three_term(R: RingDescriptor, lo: int, a, b, c, d) -> FreeComplex:
    """R -(a,b)^T-> R^2 -(c d)-> R with a c + b d = 0 required per factor."""
    parts = []
    for i, F in enumerate(R.factors):
        d0 = Mat(2, 1, ((F.element(a),), (F.element(b),)))
        d1 = Mat(1, 2, ((F.element(c), F.element(d)),))
        parts.append(FactorComplex(F, {lo: 1, lo + 1: 2, lo + 2: 1}, {lo: d0, lo + 1: d1}, i))
    return FreeComplex(R, tuple(parts))


def _random_complex(R: RingDescriptor, rng: random.Random) -> FreeComplex:
    """Random two- or three-term complex, d^1 d^0 = 0 by construction."""
    lo = rng.randint(-2, 1)
    x, y, t = (rng.randint(-6, 6) for _ in range(3))
    if rng.random() < 0.5:
        return _two_term(R, x or 1, lo)
    # d0 = (x, y)^T, d1 = t * (y, -x)
    return _three_term(R, lo, x, y, t * y, -t * x)


def stock_corpus(R: RingDescriptor, seed: int = 20240611):
    """``(samples, decompositions)``: 24 complexes and recorded splittings."""
    unit = FreeComplex.unit(R)
    xs = []
    for k in (-2, -1, 0, 1, 2):
        xs.append(shift(unit, k))
    for x in (2, 3):
        for lo in (-2, -1, 0):
            xs.append(_two_term(R, x, lo))
    xs.append(_two_term(R, 6, -1))
    xs.append(_two_term(R, 4, 0))
    split1 = direct_sum(unit, shift(unit, 1))
    split2 = direct_sum(unit, _two_term(R, 2, -1))
    xs += [split1, split2]
    xs.append(cone_object(identity_map(unit)))
    xs.append(FreeComplex.zero(R))
    xs.append(tensor(_two_term(R, 2, -1), _two_term(R, 3, -1)))
    xs.append(_three_term(R, -1, 2, 0, 0, 3))
    rng = random.Random(seed)
    while len(xs) < 24:
        xs.append(_random_complex(R, rng))
    decompositions = [
        (split1, [unit, shift(unit, 1)]),
        (split2, [unit, _two_term(R, 2, -1)]),
        (direct_sum(xs[5], xs[6]), [xs[5], xs[6]]),
        (direct_sum(xs[0], xs[8], xs[2]), [xs[0], xs[8], xs[2]]),
    ]
    return xs, decompositions
