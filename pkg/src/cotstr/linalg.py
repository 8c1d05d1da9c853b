"""Exact matrices over a connected factor, Smith normal form, kernels.

Matrices are immutable :class:`Mat` values; the arithmetic is delegated to the
factor so the same code runs over the integers, fields and F_p[x].  Smith
normal form is computed directly over Euclidean factors.  Over
``IntegersMod(p**k)`` the integer lift is reduced (and, for cohomology, the
lattice picture in :func:`lattice_subquotient` is used instead).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .rings import ConnectedFactor, Integers, IntegersMod, ValidationError

ZZ = Integers()


@dataclass(frozen=True)
class Mat:
    rows: int
    cols: int
    data: tuple[tuple, ...]

    def __post_init__(self):
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ValidationError(f"matrix data does not have shape {self.rows}x{self.cols}")

    @property
    def shape(self):
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def tolist(self):
        return [list(r) for r in self.data]

    def __repr__(self):
        return f"Mat({self.rows}x{self.cols}, {self.tolist()})"


def mat(F: ConnectedFactor, rows: Sequence[Sequence], cols: int | None = None) -> Mat:
    rows = [list(r) for r in rows]
    if cols is None:
        cols = len(rows[0]) if rows else 0
    return Mat(len(rows), cols, tuple(tuple(F.element(x) for x in r) for r in rows))


def zeros(F, r, c) -> Mat:
    z = F.zero()
    return Mat(r, c, tuple((z,) * c for _ in range(r)))


def identity(F, n) -> Mat:
    z, o = F.zero(), F.one()
    return Mat(n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))


def is_zero(F, A: Mat) -> bool:
    return all(F.is_zero(x) for r in A.data for x in r)


def matmul(F, A: Mat, B: Mat) -> Mat:
    if A.cols != B.rows:
        raise ValidationError(f"cannot multiply {A.shape} by {B.shape}")
    add, mul, z = F.add, F.mul, F.zero()
    Bt = list(zip(*B.data)) if B.rows else [()] * B.cols
    out = []
    for row in A.data:
        nz = [(k, a) for k, a in enumerate(row) if not F.is_zero(a)]
        line = []
        for col in Bt:
            s = z
            for k, a in nz:
                b = col[k]
                if not F.is_zero(b):
                    s = add(s, mul(a, b))
            line.append(s)
        out.append(tuple(line))
    return Mat(A.rows, B.cols, tuple(out))


def madd(F, A: Mat, B: Mat) -> Mat:
    if A.shape != B.shape:
        raise ValidationError(f"cannot add {A.shape} and {B.shape}")
    return Mat(A.rows, A.cols, tuple(tuple(F.add(a, b) for a, b in zip(ra, rb))
                                     for ra, rb in zip(A.data, B.data)))


def scale(F, c, A: Mat) -> Mat:
    return Mat(A.rows, A.cols, tuple(tuple(F.mul(c, a) for a in r) for r in A.data))


def neg(F, A: Mat) -> Mat:
    return Mat(A.rows, A.cols, tuple(tuple(F.neg(a) for a in r) for r in A.data))


def transpose(A: Mat) -> Mat:
    return Mat(A.cols, A.rows, tuple(zip(*A.data)) if A.rows and A.cols
               else tuple(() for _ in range(A.cols)))


def kron(F, A: Mat, B: Mat) -> Mat:
    rows = []
    for ra in A.data:
        for rb in B.data:
            rows.append(tuple(F.mul(a, b) for a in ra for b in rb))
    return Mat(A.rows * B.rows, A.cols * B.cols, tuple(rows))


def block(F, blocks: Sequence[Sequence[Mat | None]], row_dims, col_dims) -> Mat:
    """Assemble a block matrix; ``None`` entries are zero blocks."""
    z = F.zero()
    out = []
    for bi, r in enumerate(row_dims):
        for i in range(r):
            line = []
            for bj, c in enumerate(col_dims):
                Bk = blocks[bi][bj]
                if Bk is None:
                    line.extend([z] * c)
                else:
                    if Bk.shape != (r, c):
                        raise ValidationError(f"block ({bi},{bj}) has shape {Bk.shape}, want {(r, c)}")
                    line.extend(Bk.data[i])
            out.append(tuple(line))
    return Mat(sum(row_dims), sum(col_dims), tuple(out))


def submatrix(A: Mat, rows: Sequence[int], cols: Sequence[int]) -> Mat:
    return Mat(len(rows), len(cols), tuple(tuple(A.data[i][j] for j in cols) for i in rows))


def reduce_mat(F, A: Mat) -> Mat:
    return Mat(A.rows, A.cols, tuple(tuple(F.reduce(x) for x in r) for r in A.data))


# ---------------------------------------------------------------------------
# Smith normal form over a Euclidean factor


@dataclass(frozen=True)
class SmithForm:
    """``U @ A @ V == D`` with ``D`` diagonal and a divisibility chain."""

    D: Mat
    U: Mat
    V: Mat
    Uinv: Mat
    Vinv: Mat
    rank: int

    def diagonal(self):
        return [self.D.data[i][i] for i in range(min(self.D.rows, self.D.cols))]


def _snf_euclidean(F, A: Mat) -> SmithForm:
    m, n = A.rows, A.cols
    D = [list(r) for r in A.data]
    U = [list(r) for r in identity(F, m).data]
    Ui = [list(r) for r in identity(F, m).data]
    V = [list(r) for r in identity(F, n).data]
    Vi = [list(r) for r in identity(F, n).data]
    add, sub, mul, isz = F.add, F.sub, F.mul, F.is_zero

    # elementary operations, each recorded on U (rows) or V (columns) together
    # with the inverse on Uinv (columns) / Vinv (rows)
    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for r in Ui:
            r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(src, dst, c):  # row dst += c * row src
        D[dst] = [add(x, mul(c, y)) for x, y in zip(D[dst], D[src])]
        U[dst] = [add(x, mul(c, y)) for x, y in zip(U[dst], U[src])]
        for r in Ui:  # column src -= c * column dst
            r[src] = sub(r[src], mul(c, r[dst]))

    def add_col(src, dst, c):  # col dst += c * col src
        for r in D:
            r[dst] = add(r[dst], mul(c, r[src]))
        for r in V:
            r[dst] = add(r[dst], mul(c, r[src]))
        Vi[src] = [sub(x, mul(c, y)) for x, y in zip(Vi[src], Vi[dst])]

    def scale_col(j, u):  # col j *= u (unit)
        ui = F.unit_inverse(u)
        for r in D:
            r[j] = mul(r[j], u)
        for r in V:
            r[j] = mul(r[j], u)
        Vi[j] = [mul(ui, x) for x in Vi[j]]

    t = 0
    while t < min(m, n):
        # pivot of minimal size in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if not isz(D[i][j]):
                    s = F.size(D[i][j])
                    if best is None or s < best[0]:
                        best = (s, i, j)
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            dirty = False
            p = D[t][t]
            for i in range(t + 1, m):
                if not isz(D[i][t]):
                    q, r = F.divmod(D[i][t], p)
                    add_row(t, i, F.neg(q))
                    if not isz(r):
                        swap_rows(i, t)
                        dirty = True
                        break
            if dirty:
                continue
            p = D[t][t]
            for j in range(t + 1, n):
                if not isz(D[t][j]):
                    q, r = F.divmod(D[t][j], p)
                    add_col(t, j, F.neg(q))
                    if not isz(r):
                        swap_cols(j, t)
                        dirty = True
                        break
            if dirty:
                continue
            # row and column cleared; enforce divisibility on the rest
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if not F.divides(p, D[i][j]):
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(bad, t, F.one())
        u, _ = F.normal_part(D[t][t])
        if u != F.one():
            scale_col(t, F.unit_inverse(u))
        t += 1

    def freeze(M, r, c):
        return Mat(r, c, tuple(tuple(x) for x in M))

    return SmithForm(freeze(D, m, n), freeze(U, m, m), freeze(V, n, n),
                     freeze(Ui, m, m), freeze(Vi, n, n), t)


def smith_normal_form(F: ConnectedFactor, A: Mat) -> SmithForm:
    """Smith normal form ``U A V = D`` of a matrix over a connected factor.

    Over ``IntegersMod(p**k)`` the integer lift is diagonalized and the
    result reduced; diagonal entries are then rescaled by units to powers of
    p (zero when divisible by p**k).
    """
    if F.euclidean:
        return _snf_euclidean(F, A)
    if not isinstance(F, IntegersMod):
        raise ValidationError(f"no Smith normal form over {F}")
    S = _snf_euclidean(ZZ, A)
    red = lambda M: reduce_mat(F, M)
    D, U, V, Ui, Vi = (red(S.D), red(S.U), red(S.V), red(S.Uinv), red(S.Vinv))
    Dl = [list(r) for r in D.data]
    Vl = [list(r) for r in V.data]
    Vil = [list(r) for r in Vi.data]
    rank = 0
    for t in range(min(A.rows, A.cols)):
        d = Dl[t][t]
        if d == 0:
            continue
        rank += 1
        v = F.valuation(d)
        unit = (d // F.p ** v) % F.m
        inv = pow(unit, -1, F.m)
        Dl[t][t] = F.p ** v
        for r in Vl:
            r[t] = r[t] * inv % F.m
        Vil[t] = [x * unit % F.m for x in Vil[t]]
    # a zero diagonal entry may precede a nonzero one only if the integer
    # chain was divisible by m; keep the chain by construction order
    return SmithForm(Mat(D.rows, D.cols, tuple(map(tuple, Dl))), U,
                     Mat(V.rows, V.cols, tuple(map(tuple, Vl))), Ui,
                     Mat(Vi.rows, Vi.cols, tuple(map(tuple, Vil))), rank)


def rank(F, A: Mat) -> int:
    return smith_normal_form(F, A).rank


def invariant_factors(F, A: Mat) -> list:
    """Nonzero diagonal entries of the Smith form (normalized)."""
    S = smith_normal_form(F, A)
    return [d for d in S.diagonal() if not F.is_zero(d)]


def kernel_basis(F, A: Mat) -> Mat:
    """Columns spanning the kernel of ``A`` over a Euclidean factor (a basis)."""
    S = _snf_euclidean(F, A)
    cols = list(range(S.rank, A.cols))
    return submatrix(S.V, range(A.cols), cols)


# ---------------------------------------------------------------------------
# lattices in Z^n


def _lattice_basis(G: Mat):
    """Basis of the column lattice of an integer matrix, with the Smith data.

    Returns ``(B, S, r)`` where the first ``r`` columns of ``S.Uinv`` scaled
    by the invariant factors form ``B``.
    """
    S = _snf_euclidean(ZZ, G)
    r = S.rank
    d = S.diagonal()
    B = Mat(G.rows, r, tuple(tuple(S.Uinv.data[i][j] * d[j] for j in range(r))
                             for i in range(G.rows)))
    return B, S, r


def lattice_subquotient(K_gens: Mat, L_gens: Mat) -> tuple[int, list[int]]:
    """Structure of ``K / L`` for integer lattices ``L <= K <= Z^n``.

    Both arguments are generator matrices (generators as columns).  Returns
    ``(free_rank, invariant_factors)`` of the quotient with unit factors
    dropped.
    """
    n = K_gens.rows
    B, S, r = _lattice_basis(K_gens)
    d = S.diagonal()
    # coordinates of L's generators in the basis B: B c = g  <=>  c = D^-1 (U g)[:r]
    Ug = matmul(ZZ, S.U, L_gens) if L_gens.cols else Mat(n, 0, tuple(() for _ in range(n)))
    C = []
    for j in range(r):
        row = []
        for x in Ug.data[j]:
            q, rem = divmod(x, d[j])
            if rem:
                raise ValidationError("sublattice is not contained in the lattice")
            row.append(q)
        C.append(tuple(row))
    for j in range(r, n):
        if any(Ug.data[j]):
            raise ValidationError("sublattice is not contained in the lattice")
    Cm = Mat(r, L_gens.cols, tuple(C))
    inv = invariant_factors(ZZ, Cm)
    return r - len(inv), [e for e in inv if e != 1]


def mod_kernel_lattice(F: IntegersMod, A: Mat) -> Mat:
    """Generators of ``{x in Z^n : A x = 0 mod m}`` (a lattice containing m Z^n)."""
    m = F.m
    r, n = A.rows, A.cols
    big = block(ZZ, [[A, scale(ZZ, m, identity(ZZ, r))]], [r], [n, r])
    Kb = kernel_basis(ZZ, big)
    proj = submatrix(Kb, range(n), range(Kb.cols))
    return proj


def column_lattice_with_modulus(A: Mat, m: int) -> Mat:
    """Generators of ``A Z^k + m Z^n``."""
    n = A.rows
    return block(ZZ, [[A, scale(ZZ, m, identity(ZZ, n))]], [n], [A.cols, n])
