"""Random generators and independent oracles shared by the test modules.

The oracles here deliberately avoid the package's Smith normal form and
cohomology code: they use brute-force enumeration, determinantal divisors,
trial division and Gaussian cancellation of unit entries.
"""
from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

from cotstr.complexes import FactorComplex, FreeComplex
from cotstr.linalg import Mat
from cotstr.rings import (Integers, IntegersMod, PolyOverPrimeField, PrimeField, Rationals,
                          RingDescriptor)
from cotstr.rings import Poly

ZZ1 = RingDescriptor.of(Integers())
Z6 = RingDescriptor.of(IntegersMod(2), IntegersMod(3))


# ---------------------------------------------------------------------------
# random elements, matrices, complexes


def rand_elem(F, rng: random.Random, bound: int = 5):
    if isinstance(F, PolyOverPrimeField):
        deg = rng.randint(-1, 2)
        return Poly(F.p, tuple(rng.randrange(F.p) for _ in range(deg + 1)))
    if isinstance(F, Rationals):
        return Fraction(rng.randint(-bound, bound), rng.randint(1, 3))
    return F.reduce(rng.randint(-bound, bound))


def rand_unit(F, rng):
    if isinstance(F, Integers):
        return rng.choice([1, -1])
    if isinstance(F, PolyOverPrimeField):
        return Poly(F.p, (rng.randrange(1, F.p),))
    if isinstance(F, Rationals):
        return Fraction(rng.choice([1, -1, 2, -3]), rng.randint(1, 3))
    while True:
        u = F.reduce(rng.randrange(1, 50))
        if F.is_unit(u):
            return u


def rand_matrix(F, rng, r, c, bound=5) -> Mat:
    return Mat(r, c, tuple(tuple(rand_elem(F, rng, bound) for _ in range(c)) for _ in range(r)))


def _identity_rows(F, n):
    return [[F.one() if i == j else F.zero() for j in range(n)] for i in range(n)]


def rand_unimodular(F, rng, n, ops=4, bound=2):
    """``(P, P^{-1})`` as products of elementary matrices."""
    P, Q = _identity_rows(F, n), _identity_rows(F, n)
    for _ in range(ops if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        c = rand_elem(F, rng, bound)
        # P <- E P with E = I + c e_ij (row i += c row j); Q <- Q E^{-1}
        P[i] = [F.add(a, F.mul(c, b)) for a, b in zip(P[i], P[j])]
        for row in Q:
            row[j] = F.sub(row[j], F.mul(c, row[i]))
    for i in range(n):
        u = rand_unit(F, rng)
        P[i] = [F.mul(u, a) for a in P[i]]
        ui = F.unit_inverse(u)
        for row in Q:
            row[i] = F.mul(row[i], ui)
    return Mat(n, n, tuple(map(tuple, P))), Mat(n, n, tuple(map(tuple, Q)))


def _mm(F, A: Mat, B: Mat) -> Mat:
    return Mat(A.rows, B.cols, tuple(
        tuple(_dot(F, A.data[i], [B.data[k][j] for k in range(B.rows)]) for j in range(B.cols))
        for i in range(A.rows)))


def _dot(F, xs, ys):
    out = F.zero()
    for a, b in zip(xs, ys):
        out = F.add(out, F.mul(a, b))
    return out


def rand_factor_complex(F, rng, index=0, lo=None, length=None, max_pieces=3, bound=6,
                        ops=3, entry_cap=None) -> FactorComplex:
    """Sum of shifted ``R`` and ``[R -t-> R]`` pieces, then a random change of
    basis in every degree.  d^2 = 0 holds by construction."""
    while True:
        lo_ = rng.randint(-2, 1) if lo is None else lo
        length_ = rng.randint(1, 3) if length is None else length
        ranks = {n: 0 for n in range(lo_, lo_ + length_)}
        entries = []  # (deg, row, col, t): d^deg has entry t from basis col to row
        for _ in range(rng.randint(1, max_pieces)):
            n = rng.randrange(lo_, lo_ + length_)
            if n + 1 < lo_ + length_ and rng.random() < 0.6:
                t = rand_elem(F, rng, bound)
                entries.append((n, ranks[n + 1], ranks[n], t))
                ranks[n] += 1
                ranks[n + 1] += 1
            else:
                ranks[n] += 1
        diffs = {}
        for n in ranks:
            if n + 1 in ranks:
                rows = [[F.zero()] * ranks[n] for _ in range(ranks[n + 1])]
                for (m, r, c, t) in entries:
                    if m == n:
                        rows[r][c] = t
                diffs[n] = Mat(ranks[n + 1], ranks[n], tuple(map(tuple, rows)))
        bases = {n: rand_unimodular(F, rng, r, ops) for n, r in ranks.items() if r}
        out = {}
        for n, d in diffs.items():
            if not ranks[n] or not ranks[n + 1]:
                continue
            P1, _ = bases[n + 1]
            _, Q0 = bases[n]
            out[n] = _mm(F, _mm(F, P1, d), Q0)
        if entry_cap is not None and isinstance(F, Integers):
            if any(abs(x) > entry_cap for M in out.values() for row in M.data for x in row):
                continue
        return FactorComplex(F, ranks, out, index)


def rand_complex(R: RingDescriptor, rng, **kw) -> FreeComplex:
    return FreeComplex(R, tuple(rand_factor_complex(F, rng, i, **kw)
                                for i, F in enumerate(R.factors)))


# ---------------------------------------------------------------------------
# independent oracles


def trial_division(n: int) -> list[tuple[int, int]]:
    n = abs(n)
    out, q = [], 2
    while q * q <= n:
        e = 0
        while n % q == 0:
            n //= q
            e += 1
        if e:
            out.append((q, e))
        q += 1
    if n > 1:
        out.append((n, 1))
    return out


def _det(M):
    n = len(M)
    if n == 0:
        return 1
    total = 0
    for perm in itertools.permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        prod = 1
        for i in range(n):
            prod *= M[i][perm[i]]
        total += sign * prod
    return total


def determinantal_divisors(A: Mat) -> list[int]:
    """d_k = gcd of all k x k minors, for k = 1 .. min(r, c)."""
    out = []
    for k in range(1, min(A.rows, A.cols) + 1):
        g = 0
        for rows in itertools.combinations(range(A.rows), k):
            for cols in itertools.combinations(range(A.cols), k):
                g = math.gcd(g, _det([[A.data[i][j] for j in cols] for i in rows]))
        out.append(g)
    return out


def invariant_factors_by_minors(A: Mat) -> list[int]:
    ds = determinantal_divisors(A)
    out, prev = [], 1
    for d in ds:
        if d == 0:
            break
        out.append(d // prev)
        prev = d
    return out


def _vectors(m, n):
    return itertools.product(range(m), repeat=n)


def brute_cohomology_mod(P: FactorComplex, j: int):
    """Over Z/m (m small): the sorted list of cyclic orders of H^j, found by
    enumerating kernel and image and counting elements killed by p^e."""
    F = P.F
    m = F.m
    n = P.rank(j)
    if n == 0:
        return []
    dj = P.d(j)
    dprev = P.d(j - 1)

    def apply(M, v):
        return tuple(sum(M.data[r][c] * v[c] for c in range(M.cols)) % m for r in range(M.rows))
    ker = [v for v in _vectors(m, n) if not any(apply(dj, v))]
    im = {apply(dprev, u) for u in _vectors(m, P.rank(j - 1))} if P.rank(j - 1) else {(0,) * n}
    size_H = len(ker) // len(im)
    # number of elements of H killed by p^e
    counts = []
    for e in range(F.k + 1):
        q = F.p ** e
        killed = sum(1 for v in ker if tuple((q * x) % m for x in v) in im)
        counts.append(killed // len(im))
    # counts[e] = prod_i p^{min(e, a_i)} determines the exponents a_i
    exps = []
    for e in range(1, F.k + 1):
        c_e = round(math.log(counts[e] // counts[e - 1], F.p)) if counts[e] > counts[e - 1] else 0
        exps.append(c_e)  # number of cyclic summands of order >= p^e
    orders = []
    for e in range(F.k, 0, -1):
        more = exps[e - 1] - (exps[e] if e < F.k else 0)
        orders += [F.p ** e] * more
    assert math.prod(orders) == size_H
    return sorted(orders)


def minimal_complex(P: FactorComplex) -> dict:
    """Ranks of the minimal model over a local factor (field or Z/p^k):
    cancel unit entries of the differentials until none remain."""
    F = P.F
    ranks = dict(P.ranks)
    diffs = {n: [list(r) for r in M.data] for n, M in P.diffs.items()}

    def d(n):
        return diffs.get(n) or [[F.zero()] * ranks.get(n, 0) for _ in range(ranks.get(n + 1, 0))]

    changed = True
    while changed:
        changed = False
        for n in sorted(ranks):
            D = d(n)
            hit = next(((i, j) for i, row in enumerate(D) for j, x in enumerate(row)
                        if F.is_unit(x)), None)
            if hit is None:
                continue
            i, j = hit
            u_inv = F.unit_inverse(D[i][j])
            # clear column j of d^n using row i (row ops on degree n+1 basis),
            # and row i using column j (column ops on degree n basis)
            rows = len(D)
            cols = len(D[0])
            # change of basis in degree n+1: e_i' absorbs; record as row operations
            for r in range(rows):
                if r != i and not F.is_zero(D[r][j]):
                    c = F.mul(D[r][j], u_inv)
                    D[r] = [F.sub(a, F.mul(c, b)) for a, b in zip(D[r], D[i])]
                    # inverse column op on d^{n+1}: col i += c col r
                    N = d(n + 1)
                    for row in N:
                        row[i] = F.add(row[i], F.mul(c, row[r]))
                    diffs[n + 1] = N
            for c_ in range(cols):
                if c_ != j and not F.is_zero(D[i][c_]):
                    c = F.mul(D[i][c_], u_inv)
                    for row in D:
                        row[c_] = F.sub(row[c_], F.mul(c, row[j]))
                    # inverse row op on d^{n-1}: row j += c row c_
                    M = d(n - 1)
                    if M:
                        M[j] = [F.add(a, F.mul(c, b)) for a, b in zip(M[j], M[c_])]
                        diffs[n - 1] = M
            # now drop basis vector j in degree n and i in degree n+1
            D = [row[:j] + row[j + 1:] for k, row in enumerate(D) if k != i]
            diffs[n] = D
            N = d(n + 1)
            diffs[n + 1] = [row[:i] + row[i + 1:] for row in N]
            M = d(n - 1)
            diffs[n - 1] = [row for k, row in enumerate(M) if k != j]
            ranks[n] -= 1
            ranks[n + 1] -= 1
            for key in (n, n + 1, n - 1):
                if ranks.get(key, 0) == 0 or ranks.get(key + 1, 0) == 0:
                    diffs.pop(key, None)
            changed = True
            break
    return {n: r for n, r in ranks.items() if r}


def formal_k_le(H_profile, n) -> bool:
    """PID oracle: X in K^{<=n} iff H^j = 0 for j > n."""
    return all(j <= n for j, g in H_profile.groups.items() if any(not M.is_zero for M in g))


def formal_k_ge(H_profile, n) -> bool:
    """PID oracle: X in K^{>=n} iff H^j = 0 for j < n and H^n is torsion free."""
    for j, g in H_profile.groups.items():
        for M in g:
            if M.is_zero:
                continue
            if j < n or (j == n and M.torsion):
                return False
    return True


def idempotents_mod(m: int) -> list[int]:
    return [e for e in range(m) if (e * e - e) % m == 0]


def field_factor_examples():
    return [Integers(), PrimeField(2), PrimeField(5), Rationals(), PolyOverPrimeField(2),
            PolyOverPrimeField(3), IntegersMod(4), IntegersMod(9), IntegersMod(3)]
