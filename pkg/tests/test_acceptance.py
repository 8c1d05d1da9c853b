"""Acceptance run: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -s -q`` to see only the
criterion lines.
"""
import itertools
import random
import time
from contextlib import contextmanager

import pytest

import props
from cotstr.closures import is_silting
from cotstr.complexes import (FreeComplex, ModuleProfile, cohomology, direct_sum, hom_complex,
                              shift, tensor)
from cotstr.corpus import stock_corpus
from cotstr.filtrations import FiltrationBySupports, from_component_thresholds, threshold_filtration
from cotstr.koszul import ExceedsBound, prime_koszul, projective_dimension_probe
from cotstr.oracles import (HomTable, NotComponentUnion, approximation_triangle,
                            check_co_t_axioms, classify, in_B_phi, in_D_ge, in_D_le, in_Y_phi,
                            support_complement_check)
from cotstr.rings import (Integers, IntegersMod, PolyOverPrimeField, PrimeField, Rationals,
                          RingDescriptor, is_regular)
from cotstr.spectrum import EMPTY, SpecSubset, prime

from helpers import ZZ1, Z6, invariant_factors_by_minors, rand_complex

INF = float("inf")


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(number, title, limit):
        t0 = time.perf_counter()
        status, detail = "FAIL", ""
        try:
            yield
            elapsed = time.perf_counter() - t0
            status = "PASS" if elapsed < limit else "FAIL"
            detail = f"{elapsed:.2f}s < {limit}s" if status == "PASS" else \
                f"{elapsed:.2f}s exceeds {limit}s"
        except Exception as e:
            msg = str(e).splitlines()[0] if str(e) else ""
            detail = f"{type(e).__name__}: {msg}"
            raise
        finally:
            with capsys.disabled():
                print(f"\ncriterion {number} {status}: {title} ({detail})")
        assert status == "PASS", detail
    return run


def _ring(*factors):
    return RingDescriptor.of(*factors)


# 1 -------------------------------------------------------------------------------------

def test_criterion_1_koszul_ground_truth(criterion):
    with criterion(1, "Koszul ground truth over Z, p in {2,3,5,7}", 0.1):
        for p in (2, 3, 5, 7):
            K = prime_koszul(ZZ1, prime(ZZ1, 0, p))
            H = cohomology(K)
            assert H.degrees == [0] and H.at(0)[0].torsion == (p,) and H.at(0)[0].free_rank == 0
            assert in_D_le(K, 0)
            # independent: H^0 is the cokernel of d^{-1}, read off by minors
            assert invariant_factors_by_minors(K.parts[0].d(-1)) == [p]


# 2 -------------------------------------------------------------------------------------

def _component_union_filtrations(R):
    values = [-INF] + list(range(-3, 4)) + [INF]
    for ts in itertools.product(values, repeat=len(R)):
        yield from_component_thresholds(R, list(ts))


def test_criterion_2_classification_bijection(criterion):
    with criterion(2, "classification bijection over Z and Z/2 x Z/3", 30):
        total = 0
        for R in (ZZ1, Z6):
            samples, decs = stock_corpus(R)
            assert len(samples) == 24
            table = HomTable(samples)
            for phi in _component_union_filtrations(R):
                D = classify(R, phi)
                assert not isinstance(D, NotComponentUnion), phi
                assert D.to_filtration() == phi
                rep = check_co_t_axioms(samples, D.in_A, D.in_B, decs,
                                        lambda X, D=D: approximation_triangle(X, D),
                                        hom_table=table)
                assert rep.passed and not rep.untestable, (str(D), rep.violations[:3])
                total += 1
        assert total == 9 + 81


# 3 -------------------------------------------------------------------------------------

POOL = (2, 3, 5, 7)
WINDOW = (-8, 12)


def _random_finite_prime_filtration(rng):
    def pts(gens):
        return SpecSubset.closed_points(ZZ1, [prime(ZZ1, 0, g) for g in sorted(gens)]) \
            if gens else SpecSubset.empty(ZZ1)
    value = set(rng.sample(POOL, rng.randint(1, 4)))
    low, steps, t = pts(value), [], rng.randint(-3, 1)
    for _ in range(rng.randint(0, 3)):
        value = set(rng.sample(sorted(value), rng.randint(0, len(value))))
        steps.append((t, pts(value)))
        t += rng.randint(1, 2)
    return FiltrationBySupports(low, tuple(steps))


def _definition_table(B):
    """(p, i) -> (Σ^{-i}K_p ⊗ B ∈ D^{≤0}, RHom(Σ^{-i}K_p, B) ∈ D^{≥0}) on the window."""
    out = {}
    for g in POOL:
        K = prime_koszul(ZZ1, prime(ZZ1, 0, g))
        for i in range(WINDOW[0], WINDOW[1] + 1):
            Ks = shift(K, -i)
            out[(g, i)] = (in_D_le(tensor(Ks, B), 0), in_D_ge(hom_complex(Ks, B), 0))
    return out


def test_criterion_3_oracles_match_definition(criterion):
    rng = random.Random(3)
    with criterion(3, "in_B_phi / in_Y_phi vs windowed definition, 200 x 20", 60):
        checked = 0
        for _ in range(200):
            B = rand_complex(ZZ1, rng, bound=30, entry_cap=100)
            # beyond the window every shifted Koszul complex clears B's degrees
            assert WINDOW[1] >= max(B.hi + 3, 3 - B.lo)
            table = _definition_table(B)
            for _ in range(20):
                phi = _random_finite_prime_filtration(rng)
                assert WINDOW[0] < min(phi.thresholds, default=0) and \
                    WINDOW[1] > max(phi.thresholds, default=0)
                want_b = want_y = True
                for i in range(WINDOW[0], WINDOW[1] + 1):
                    part = phi.evaluate(i).parts[0]
                    for g in (() if part == EMPTY else part):
                        b, y = table[(g, i)]
                        want_b &= b
                        want_y &= y
                assert bool(in_B_phi(B, phi)) == want_b
                assert bool(in_Y_phi(B, phi)) == want_y
                checked += 1
        assert checked == 4000


# 4 -------------------------------------------------------------------------------------

def test_criterion_4_support_complement(criterion):
    with criterion(4, "support complement for thresholds m in [-2,2], Z and Z/2 x Z/3", 10):
        U = FreeComplex.unit(ZZ1)
        for m in range(-2, 3):
            phi = threshold_filtration(ZZ1, m)
            D = classify(ZZ1, phi)
            for i in range(m - 3, m + 4):
                B = approximation_triangle(shift(U, i - 1), D).B
                assert support_complement_check(B, phi, i), (m, i)
        U6 = FreeComplex.unit(Z6)
        for ms in itertools.product(range(-2, 3), repeat=2):
            phi = from_component_thresholds(Z6, list(ms))
            D = classify(Z6, phi)
            for i in range(-5, 6):
                B = approximation_triangle(shift(U6, i - 1), D).B
                assert support_complement_check(B, phi, i), (ms, i)


# 5 -------------------------------------------------------------------------------------

def test_criterion_5_non_restriction_refusal(criterion):
    two = SpecSubset.closed_points(ZZ1, [prime(ZZ1, 0, 2)])
    phi = FiltrationBySupports(two)
    with criterion(5, "classify refuses Φ with value {(2)}", 0.1):
        got = classify(ZZ1, phi)
        assert isinstance(got, NotComponentUnion)
        assert got.value == two and "{(2)}" in got.message


# 6 -------------------------------------------------------------------------------------

CONNECTED = [Integers(), PrimeField(2), PrimeField(5), Rationals(), PolyOverPrimeField(2),
             PolyOverPrimeField(3), IntegersMod(4), IntegersMod(9)]


def test_criterion_6_silting(criterion):
    with criterion(6, "silting: shifts of R pass, R ⊕ ΣR fails at i = 1, Z/6 componentwise", 5):
        for F in CONNECTED:
            U = FreeComplex.unit(_ring(F))
            for n in range(-3, 4):
                assert is_silting(shift(U, n), 20).silting, (F, n)
            rep = is_silting(direct_sum(U, shift(U, 1)), 20)
            assert not rep.silting and rep.witness["i"] == 1, F
        parts = FreeComplex.unit(Z6).parts
        R1 = FreeComplex.on_factor(Z6, 0, parts[0])
        R2 = FreeComplex.on_factor(Z6, 1, parts[1])
        assert is_silting(direct_sum(R1, shift(R2, 1)), 20).silting


# 7 -------------------------------------------------------------------------------------

def test_criterion_7_regularity(criterion):
    with criterion(7, "regularity verdicts with projective-dimension evidence", 5):
        for F in (Integers(), PrimeField(2), PrimeField(7), Rationals(), PolyOverPrimeField(2),
                  PolyOverPrimeField(5)):
            assert is_regular(_ring(F)), F
        for m in (4, 9):
            F = IntegersMod(m)
            assert not is_regular(_ring(F))
            probe = projective_dimension_probe(F, ModuleProfile(0, F, 0, (F.p,)), 10)
            assert isinstance(probe, ExceedsBound) and probe.bound == 10
            # independent: multiplication by p on Z/p^2 has kernel pZ/p^2 ≅ Z/p again,
            # so the minimal resolution of Z/p never stops
            ker = [x for x in range(m) if (F.p * x) % m == 0]
            assert len(ker) == F.p and all(x % F.p == 0 for x in ker)


# 8 -------------------------------------------------------------------------------------

SUITES = [props.check_d_squared, props.check_smith, props.check_tensor, props.check_dual,
          props.check_star_associativity, props.check_fresh_prime]


def test_criterion_8_property_suites(criterion):
    with criterion(8, "property suites, 100 instances each", 120):
        for check in SUITES:
            rng = random.Random(check.__name__)
            for k in range(100):
                try:
                    check(rng)
                except AssertionError as e:
                    raise AssertionError(f"{check.__name__} instance {k}: {e}") from None
