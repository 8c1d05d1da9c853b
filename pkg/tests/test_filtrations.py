import itertools
import random

import pytest

from cotstr.complexes import cohomology
from cotstr.filtrations import (AisleInconsistency, FiltrationBySupports, FiltrationError,
                                component_thresholds, constant_filtration, evaluate,
                                first_non_component_value, from_component_thresholds,
                                is_component_union, phi_from_aisle, threshold_filtration,
                                validate)
from cotstr.oracles import in_D_le
from cotstr.spectrum import ALL, EMPTY, SpecSubset, prime

from helpers import ZZ1, Z6, formal_k_le


INF = float("inf")


def test_threshold_evaluation():
    phi = FiltrationBySupports(SpecSubset.full(ZZ1), ((1, SpecSubset.empty(ZZ1)),))
    assert evaluate(phi, 0) == SpecSubset.full(ZZ1)
    assert evaluate(phi, 1) == SpecSubset.empty(ZZ1)
    assert evaluate(phi, -100) == SpecSubset.full(ZZ1)
    assert phi(100) == SpecSubset.empty(ZZ1)
    assert phi == threshold_filtration(ZZ1, 0)


def test_increasing_rejected():
    two = SpecSubset.closed_points(ZZ1, [prime(ZZ1, 0, 2)])
    with pytest.raises(FiltrationError, match="not decreasing"):
        FiltrationBySupports(two, ((0, SpecSubset.full(ZZ1)),))


def test_product_ring_component_step():
    phi = FiltrationBySupports(SpecSubset.full(Z6), ((2, SpecSubset.components(Z6, [0])),))
    assert validate(phi) == phi
    assert phi(2) == SpecSubset.components(Z6, [0])
    assert is_component_union(phi)


def test_duplicate_threshold_rejected():
    E = SpecSubset.empty(ZZ1)
    with pytest.raises(FiltrationError):
        FiltrationBySupports(SpecSubset.full(ZZ1), ((1, E), (1, E)))


def test_equal_values_merged():
    F = SpecSubset.full(ZZ1)
    phi = FiltrationBySupports(F, ((0, F), (3, SpecSubset.empty(ZZ1))))
    assert phi.thresholds == [3]


def test_component_union_examples():
    assert is_component_union(threshold_filtration(ZZ1, 2))
    two = SpecSubset.closed_points(ZZ1, [prime(ZZ1, 0, 2)])
    phi = FiltrationBySupports(SpecSubset.full(ZZ1), ((0, two),))
    assert not is_component_union(phi)
    assert first_non_component_value(phi) == (0, two)


def test_component_union_vs_brute_force():
    rng = random.Random(1)
    R = ZZ1
    pool = [SpecSubset.full(R),
            SpecSubset.closed_points(R, [prime(R, 0, 2), prime(R, 0, 3)]),
            SpecSubset.closed_points(R, [prime(R, 0, 2)]),
            SpecSubset.empty(R)]
    for _ in range(200):
        k = rng.randint(0, 3)
        idx = sorted(rng.sample(range(4), k + 1))
        ts = sorted(rng.sample(range(-5, 6), k))
        phi = FiltrationBySupports(pool[idx[0]], tuple(zip(ts, [pool[j] for j in idx[1:]])))
        brute = all(all(part in (ALL, EMPTY) for part in phi(i).parts)
                    for i in range(-7, 8))
        assert is_component_union(phi) == brute


def test_component_thresholds_round_trip():
    choices = [-INF, -3, -1, 0, 2, 3, INF]
    for ts in itertools.product(choices, repeat=2):
        phi = from_component_thresholds(Z6, list(ts))
        assert component_thresholds(phi) == list(ts)
        for i in range(-6, 7):
            want = [f for f, m in enumerate(ts) if i <= m]
            assert phi(i) == SpecSubset.components(Z6, want)


def test_decreasing_on_window():
    rng = random.Random(2)
    for _ in range(100):
        ts = [rng.choice([-INF, INF, rng.randint(-3, 3)]) for _ in range(2)]
        phi = from_component_thresholds(Z6, ts)
        a, b = phi.window()
        for i in range(a, b):
            assert phi(i + 1) <= phi(i)


def test_json_round_trip():
    phi = FiltrationBySupports(SpecSubset.full(ZZ1), (
        (0, SpecSubset.closed_points(ZZ1, [prime(ZZ1, 0, 2), prime(ZZ1, 0, 5)])),
        (2, SpecSubset.empty(ZZ1))))
    assert FiltrationBySupports.from_json(ZZ1, phi.to_json()) == phi
    with pytest.raises(FiltrationError):
        FiltrationBySupports.from_json(ZZ1, {"steps": []})


def test_constant_filtration():
    phi = constant_filtration(SpecSubset.full(ZZ1))
    assert phi.thresholds == [] and phi.tail == SpecSubset.full(ZZ1)


# recovering Φ from an aisle ----------------------------------------------------

def test_phi_from_aisle_example():
    p2 = prime(ZZ1, 0, 2)
    table = phi_from_aisle(ZZ1, [p2], (-1, 1), lambda X: in_D_le(X, 0))
    assert table == {(-1, p2): True, (0, p2): True, (1, p2): False}
    # independent oracle: cohomology read off directly
    t2 = phi_from_aisle(ZZ1, [p2], (-1, 1), lambda X: formal_k_le(cohomology(X), 0))
    assert t2 == table


def test_phi_from_aisle_constant_oracles():
    ps = [prime(ZZ1, 0, "0"), prime(ZZ1, 0, 3)]
    t = phi_from_aisle(ZZ1, ps, (-2, 2), lambda X: True)
    assert all(t.values()) and len(t) == 10
    f = phi_from_aisle(ZZ1, ps, (-2, 2), lambda X: False)
    assert not any(f.values())


def test_phi_from_aisle_inconsistent():
    p2 = prime(ZZ1, 0, 2)
    with pytest.raises(AisleInconsistency) as e:
        phi_from_aisle(ZZ1, [p2], (-1, 1), lambda X: X.hi is not None and X.hi >= 0)
    assert e.value.prime == p2 and "not decreasing" in str(e.value)
