"""Exact dense linear algebra over F_q on lists of FFElement rows.

Pivoting always takes the first nonzero entry, so echelon forms (and the
certificates built from them) are reproducible.
"""

from __future__ import annotations

from typing import Sequence

from .gf import FFElement, FieldCtx

Matrix = list[list[FFElement]]


def to_codes(M: Sequence[Sequence[FFElement]], ctx: FieldCtx) -> list[list[int]]:
    return [[ctx(x).c for x in row] for row in M]


def from_codes(M: Sequence[Sequence[int]], ctx: FieldCtx) -> Matrix:
    return [[FFElement(ctx, c) for c in row] for row in M]


def rref_codes(A: list[list[int]], ctx: FieldCtx) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form (in place on a copy) and pivot columns."""
    A = [list(r) for r in A]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    add, mul, neg, inv = ctx.add, ctx.mul, ctx.neg, ctx.inv
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        s = inv(A[r][c])
        if s != 1:
            A[r] = [mul(x, s) for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c]:
                f = neg(A[i][c])
                A[i] = [add(x, mul(f, y)) for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return A, pivots


def rank(M: Sequence[Sequence[FFElement]], ctx: FieldCtx) -> int:
    if not M:
        return 0
    return len(rref_codes(to_codes(M, ctx), ctx)[1])


def kernel_codes(A: list[list[int]], ctx: FieldCtx, ncols: int | None = None) -> list[list[int]]:
    """Basis of {v : A v = 0}; one vector per free column, free entry 1."""
    if ncols is None:
        ncols = len(A[0])
    if not A:
        return [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    R, pivots = rref_codes(A, ctx)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for i, pc in enumerate(pivots):
            v[pc] = ctx.neg(R[i][f])
        basis.append(v)
    return basis


def kernel(M: Sequence[Sequence[FFElement]], ctx: FieldCtx) -> Matrix:
    return from_codes(kernel_codes(to_codes(M, ctx), ctx, len(M[0])), ctx)


def solve_codes(A: list[list[int]], b: list[int], ctx: FieldCtx) -> list[int] | None:
    """One solution x of A x = b (free variables 0), or None."""
    ncols = len(A[0])
    aug = [row + [bi] for row, bi in zip(A, b)]
    R, pivots = rref_codes(aug, ctx)
    if ncols in pivots:
        return None
    x = [0] * ncols
    for i, pc in enumerate(pivots):
        x[pc] = R[i][ncols]
    return x


def det_codes(A: list[list[int]], ctx: FieldCtx) -> int:
    A = [list(r) for r in A]
    n = len(A)
    det = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = ctx.neg(det)
        det = ctx.mul(det, A[c][c])
        s = ctx.inv(A[c][c])
        for i in range(c + 1, n):
            if A[i][c]:
                f = ctx.neg(ctx.mul(A[i][c], s))
                A[i] = [ctx.add(x, ctx.mul(f, y)) for x, y in zip(A[i], A[c])]
    return det


def det(M: Sequence[Sequence[FFElement]], ctx: FieldCtx) -> FFElement:
    return FFElement(ctx, det_codes(to_codes(M, ctx), ctx))


def matmul_codes(A: list[list[int]], B: list[list[int]], ctx: FieldCtx) -> list[list[int]]:
    add, mul = ctx.add, ctx.mul
    Bt = list(zip(*B))
    out = []
    for row in A:
        new = []
        for col in Bt:
            s = 0
            for x, y in zip(row, col):
                if x and y:
                    s = add(s, mul(x, y))
            new.append(s)
        out.append(new)
    return out


def matmul(A: Matrix, B: Matrix, ctx: FieldCtx) -> Matrix:
    return from_codes(matmul_codes(to_codes(A, ctx), to_codes(B, ctx), ctx), ctx)


def transpose(A):
    return [list(r) for r in zip(*A)]


def inverse_codes(A: list[list[int]], ctx: FieldCtx) -> list[list[int]]:
    n = len(A)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(A)]
    R, pivots = rref_codes(aug, ctx)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


def matvec_codes(A: list[list[int]], v: Sequence[int], ctx: FieldCtx) -> list[int]:
    add, mul = ctx.add, ctx.mul
    out = []
    for row in A:
        s = 0
        for x, y in zip(row, v):
            if x and y:
                s = add(s, mul(x, y))
        out.append(s)
    return out


def normalize_projective(v: Sequence[int], ctx: FieldCtx) -> tuple[int, ...]:
    """Scale so the first nonzero coordinate is 1."""
    lead = next((x for x in v if x), None)
    if lead is None:
        raise ValueError("zero vector is not a projective point")
    s = ctx.inv(lead)
    return tuple(ctx.mul(x, s) for x in v)
