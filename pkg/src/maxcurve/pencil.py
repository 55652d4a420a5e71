"""Geometry of a net of quadrics: discriminant curve, singular-point map, the
induced action on the discriminant, automorphism searches and simultaneous
diagonalisation of a pencil.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

from . import linalg
from .counting import BudgetExceeded, PlaneCurve, QuadricNet, Refusal
from .gf import FFElement, FieldCtx, enumerate_proj, make_field
from .poly import (
    MultiPoly,
    UniPolyF,
    det_poly_matrix,
    distinct_degree,
    roots_in,
    squarefree_part,
    uni_gcd,
)


class NotTransverse(ValueError):
    pass


class LemmaHypothesisError(ValueError):
    def __init__(self, detail: str):
        super().__init__(f"lemma hypothesis violated: {detail}")


# --- projective linear maps --------------------------------------------------------


def _code(x, ctx: FieldCtx) -> int:
    # ints are codes; over a prime field any integer is reduced mod p
    if isinstance(x, FFElement):
        return ctx(x).c
    x = int(x)
    return x % ctx.p if ctx.k == 1 else x


@dataclass(frozen=True)
class ProjLinearMap:
    """An element of PGL_n, stored with its first nonzero entry (row-major) equal to 1."""

    ctx: FieldCtx
    M: tuple

    @classmethod
    def of(cls, M: Sequence[Sequence], ctx: FieldCtx) -> "ProjLinearMap":
        codes = [[_code(x, ctx) for x in row] for row in M]
        if not linalg.det_codes(codes, ctx):
            raise ValueError("matrix is not invertible")
        flat = [c for row in codes for c in row]
        s = ctx.inv(next(c for c in flat if c))
        return cls(ctx, tuple(tuple(ctx.mul(c, s) for c in row) for row in codes))

    @classmethod
    def identity(cls, n: int, ctx: FieldCtx) -> "ProjLinearMap":
        return cls.of([[1 if i == j else 0 for j in range(n)] for i in range(n)], ctx)

    @property
    def n(self) -> int:
        return len(self.M)

    def rows(self) -> list[list[int]]:
        return [list(r) for r in self.M]

    def __matmul__(self, other: "ProjLinearMap") -> "ProjLinearMap":
        return ProjLinearMap.of(linalg.matmul_codes(self.rows(), other.rows(), self.ctx), self.ctx)

    def inverse(self) -> "ProjLinearMap":
        return ProjLinearMap.of(linalg.inverse_codes(self.rows(), self.ctx), self.ctx)

    def apply(self, point: Sequence[int]) -> tuple[int, ...]:
        return linalg.normalize_projective(linalg.matvec_codes(self.rows(), point, self.ctx), self.ctx)

    def to_json(self) -> list[list[str]]:
        return [[str(FFElement(self.ctx, c)) for c in row] for row in self.M]


def diag_map(entries: Sequence[int], ctx: FieldCtx) -> ProjLinearMap:
    n = len(entries)
    return ProjLinearMap.of([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], ctx)


# --- nets ------------------------------------------------------------------------


def gram(forms: Sequence[MultiPoly]) -> QuadricNet:
    """Symmetric Gram matrices: diagonal = square coefficients, off-diagonal = half the cross terms."""
    ctx = forms[0].ctx
    if ctx.p == 2:
        raise ValueError("Gram matrices need characteristic other than 2")
    n = forms[0].nvars
    half = ctx.inv(ctx.from_int(2))
    Qs = []
    for f in forms:
        if f.nvars != n:
            raise ValueError("forms must share the variable count")
        if f.is_zero() or f.total_degree() != 2 or not f.is_homogeneous():
            raise ValueError("gram needs homogeneous quadratic forms")
        Q = [[0] * n for _ in range(n)]
        for e, c in f.t.items():
            idx = [i for i, a in enumerate(e) for _ in range(a)]
            i, j = idx
            if i == j:
                Q[i][i] = c
            else:
                h = ctx.mul(c, half)
                Q[i][j] = Q[j][i] = h
        Qs.append(tuple(tuple(r) for r in Q))
    return QuadricNet(ctx, tuple(Qs))


def pencil_matrix(net: QuadricNet, coords: Sequence[FFElement]) -> list[list[int]]:
    """x Q1 + y Q2 + z Q3 at a point (codes in the point's field)."""
    ext = coords[0].ctx
    n = net.dim
    out = [[0] * n for _ in range(n)]
    for Q, a in zip(net.Q, coords):
        ac = ext(a).c
        if not ac:
            continue
        for i in range(n):
            for j in range(n):
                if Q[i][j]:
                    out[i][j] = ext.add(out[i][j], ext.mul(ac, Q[i][j]))
    return out


def discriminant_curve(net: QuadricNet) -> PlaneCurve:
    ctx = net.ctx
    X = [MultiPoly.var(ctx, 3, i) for i in range(3)]
    n = net.dim
    M = []
    for i in range(n):
        row = []
        for j in range(n):
            entry = MultiPoly(ctx, 3)
            for Q, x in zip(net.Q, X):
                if Q[i][j]:
                    entry = entry + x * ctx.element(Q[i][j])
            row.append(entry)
        M.append(row)
    D = det_poly_matrix(M)
    if D.is_zero():
        raise ValueError("degenerate net: the discriminant vanishes identically")
    return PlaneCurve(D, "discriminant")


def quadric_kernel(M: Sequence[Sequence[FFElement]], ctx: FieldCtx) -> list[list[FFElement]]:
    return linalg.kernel(M, ctx)


def steinerian(net: QuadricNet, point: Sequence[FFElement]) -> tuple[FFElement, ...]:
    """The unique singular point of the rank-4 quadric attached to a point of the discriminant."""
    ext = point[0].ctx
    A = pencil_matrix(net, point)
    ker = linalg.kernel_codes(A, ext)
    if len(ker) == 0:
        raise ValueError("point is not on the discriminant curve")
    if len(ker) != 1:
        raise ValueError(f"rank < {net.dim - 1} locus: kernel has dimension {len(ker)}")
    v = linalg.normalize_projective(ker[0], ext)
    return tuple(FFElement(ext, c) for c in v)


def _upper(M, n):
    return [M[i][j] for i in range(n) for j in range(i, n)]


def mu(M: ProjLinearMap, net: QuadricNet) -> ProjLinearMap | None:
    """Induced map on the discriminant plane, or None if M does not preserve the net.

    With M^T Q_i M = a_i Q_1 + b_i Q_2 + c_i Q_3 the result is the matrix whose
    i-th column is (a_i, b_i, c_i), i.e. (x, y, z) -> (a_1 x + a_2 y + a_3 z, ...).
    Composition reverses order: mu(M N) = mu(N) mu(M).
    """
    ctx = net.ctx
    n = net.dim
    A = [list(col) for col in zip(*[_upper(Q, n) for Q in net.Q])]
    Mt = linalg.transpose(M.rows())
    cols = []
    for Q in net.Q:
        T = linalg.matmul_codes(linalg.matmul_codes(Mt, [list(r) for r in Q], ctx), M.rows(), ctx)
        x = linalg.solve_codes(A, _upper(T, n), ctx)
        if x is None:
            return None
        cols.append(x)
    coeff = [[cols[i][r] for i in range(3)] for r in range(3)]
    if not linalg.det_codes(coeff, ctx):
        return None
    return ProjLinearMap.of(coeff, ctx)


def verify_net_automorphism(M: ProjLinearMap, net: QuadricNet) -> bool:
    ctx = net.ctx
    n = net.dim
    A = [list(col) for col in zip(*[_upper(Q, n) for Q in net.Q])]
    Mt = linalg.transpose(M.rows())
    for Q in net.Q:
        T = linalg.matmul_codes(linalg.matmul_codes(Mt, [list(r) for r in Q], ctx), M.rows(), ctx)
        if linalg.solve_codes(A, _upper(T, n), ctx) is None:
            return False
    return True


# --- plane automorphisms -------------------------------------------------------------


def _compose_form(f: MultiPoly, M: Sequence[Sequence[int]]) -> MultiPoly:
    ctx = f.ctx
    X = [MultiPoly.var(ctx, 3, j) for j in range(3)]
    images = []
    for i in range(3):
        img = MultiPoly(ctx, 3)
        for j in range(3):
            if M[i][j]:
                img = img + X[j] * ctx.element(M[i][j])
        images.append(img)
    return f.substitute(images)


def _rational_points(f: MultiPoly, ext: FieldCtx) -> list[tuple[int, ...]]:
    fl = f.lift(ext) if f.ctx is not ext else f
    return [tuple(x.c for x in P) for P in enumerate_proj(ext, 2) if not fl.eval(P).c]


def _collinear(a, b, c, ctx) -> bool:
    return linalg.det_codes([list(a), list(b), list(c)], ctx) == 0


def _general_position(pts, ctx) -> bool:
    return not any(_collinear(a, b, c, ctx) for a, b, c in itertools.combinations(pts, 3))


def _frame_matrix(pts, ctx) -> list[list[int]] | None:
    """Matrix sending e1, e2, e3, (1,1,1) to the four points (projectively)."""
    P = [list(col) for col in zip(*pts[:3])]
    lam = linalg.solve_codes(P, list(pts[3]), ctx)
    if lam is None or not all(lam):
        return None
    return [[ctx.mul(P[i][j], lam[j]) for j in range(3)] for i in range(3)]


def brute_force_plane_autos(curve: PlaneCurve, k: int = 1, budget: int = 10**7) -> list[ProjLinearMap]:
    """All of PGL_3(F_{p^k}) preserving the curve.

    Any such map permutes the curve's rational points, so when four of them
    are in general position the search runs over images of that frame;
    otherwise (k = 1 only) every element of PGL_3(F_p) is tried, filtered by
    the same point-permutation test.
    """
    ext = make_field(curve.ctx.p, k)
    f = curve.equation.lift(ext) if curve.ctx is not ext else curve.equation
    pts = _rational_points(curve.equation, ext)
    ptset = set(pts)
    frame = None
    for quad in itertools.combinations(pts, 4):
        if _general_position(quad, ext):
            frame = quad
            break
    found: set[ProjLinearMap] = set()

    def accept(Mc):
        if not linalg.det_codes(Mc, ext):
            return
        for P in pts:
            img = linalg.matvec_codes(Mc, P, ext)
            if linalg.normalize_projective(img, ext) not in ptset:
                return
        g = _compose_form(f, Mc)
        if g.scale_equal(f) is not None:
            found.add(ProjLinearMap.of(Mc, ext))

    if frame is not None:
        src = _frame_matrix(frame, ext)
        src_inv = linalg.inverse_codes(src, ext)
        n_tuples = math.perm(len(pts), 4)
        if n_tuples > budget:
            raise BudgetExceeded(n_tuples, budget, "frame images")
        for quad in itertools.permutations(pts, 4):
            if not _general_position(quad, ext):
                continue
            dst = _frame_matrix(quad, ext)
            if dst is None:
                continue
            accept(linalg.matmul_codes(dst, src_inv, ext))
    else:
        if k != 1:
            raise Refusal("no frame of rational points; exhaustive search only over the prime field")
        q = ext.q
        if q**9 > budget:
            raise BudgetExceeded(q**9, budget, "matrices")
        for flat in itertools.product(range(q), repeat=9):
            lead = next((c for c in flat if c), 0)
            if lead != 1:
                continue
            accept([list(flat[0:3]), list(flat[3:6]), list(flat[6:9])])
    return sorted(found, key=lambda m: m.M)


# --- simultaneous diagonalisation ----------------------------------------------------------


@dataclass
class DiagonalizationResult:
    basis: list[list[FFElement]]  # columns v_i
    eigenvalues: list[FFElement]
    F_diag: list[FFElement]
    G_diag: list[FFElement]


def _pencil_det(F: Sequence[Sequence[int]], G: Sequence[Sequence[int]], ext: FieldCtx) -> UniPolyF:
    """det(G - t F) as a polynomial in t."""
    t = MultiPoly.var(ext, 1, 0)
    n = len(F)
    M = [
        [MultiPoly.const(ext, 1, FFElement(ext, G[i][j])) - t * FFElement(ext, F[i][j]) for j in range(n)]
        for i in range(n)
    ]
    return det_poly_matrix(M).to_unipoly(0)


def splitting_degree(f: UniPolyF) -> int:
    """Degree over f's field of the smallest extension containing all roots."""
    d = 1
    for e in distinct_degree(squarefree_part(f)):
        d = d * e // math.gcd(d, e)
    return d


def simultaneous_diagonalize(F, G, ext: FieldCtx) -> DiagonalizationResult:
    n = len(F)
    Fc = [[_code(x, ext) for x in row] for row in F]
    Gc = [[_code(x, ext) for x in row] for row in G]
    if not linalg.det_codes(Fc, ext) or not linalg.det_codes(Gc, ext):
        raise LemmaHypothesisError("both forms must be nondegenerate")
    P = _pencil_det(Fc, Gc, ext)
    if uni_gcd(P, P.deriv()).degree() > 0:
        raise LemmaHypothesisError("det(G - tF) has a repeated root")
    roots = sorted({r.c for r in roots_in(P, ext)})
    if len(roots) < n:
        m = splitting_degree(P)
        raise LemmaHypothesisError(
            f"eigenvalues need an extension of degree {m} over F_{ext.spec} (F_{ext.p}^{ext.k * m})"
        )
    cols = []
    for lam in roots:
        A = [[ext.sub(Gc[i][j], ext.mul(lam, Fc[i][j])) for j in range(n)] for i in range(n)]
        ker = linalg.kernel_codes(A, ext)
        if len(ker) != 1:
            raise LemmaHypothesisError("eigenspace is not one-dimensional")
        cols.append(ker[0])
    V = linalg.transpose(cols)
    Vt = cols
    DF = linalg.matmul_codes(linalg.matmul_codes(Vt, Fc, ext), V, ext)
    DG = linalg.matmul_codes(linalg.matmul_codes(Vt, Gc, ext), V, ext)
    return DiagonalizationResult(
        basis=linalg.from_codes(V, ext),
        eigenvalues=[FFElement(ext, r) for r in roots],
        F_diag=[FFElement(ext, DF[i][i]) for i in range(n)],
        G_diag=[FFElement(ext, DG[i][i]) for i in range(n)],
    )


def check_orthogonality(F, G, res: DiagonalizationResult, ext: FieldCtx) -> bool:
    V = linalg.to_codes(res.basis, ext)
    Vt = linalg.transpose(V)
    Fc = [[_code(x, ext) for x in row] for row in F]
    Gc = [[_code(x, ext) for x in row] for row in G]
    DF = linalg.matmul_codes(linalg.matmul_codes(Vt, Fc, ext), V, ext)
    DG = linalg.matmul_codes(linalg.matmul_codes(Vt, Gc, ext), V, ext)
    n = len(Fc)
    for i in range(n):
        for j in range(n):
            if i != j and (DF[i][j] or DG[i][j]):
                return False
        if not DF[i][i] or not DG[i][i]:
            return False
    return len(set(r.c for r in res.eigenvalues)) == n


def random_admissible_pair(ext: FieldCtx, n: int, rng) -> tuple[list[list[int]], list[list[int]], list[int]]:
    """F = P^T D P and G = P^T D L P with P invertible, D nonsingular diagonal and
    L diagonal with n distinct nonzero entries.  Returns (F, G, eigenvalues) as codes."""
    if n > ext.q - 1:
        raise ValueError("not enough distinct nonzero eigenvalues in the field")
    while True:
        P = [[rng.randrange(ext.q) for _ in range(n)] for _ in range(n)]
        if linalg.det_codes(P, ext):
            break
    d = [rng.randrange(1, ext.q) for _ in range(n)]
    lam = rng.sample(range(1, ext.q), n)
    Pt = linalg.transpose(P)

    def congruent(diag):
        D = [[diag[i] if i == j else 0 for j in range(n)] for i in range(n)]
        return linalg.matmul_codes(linalg.matmul_codes(Pt, D, ext), P, ext)

    return congruent(d), congruent([ext.mul(a, b) for a, b in zip(d, lam)]), lam


# --- transversal lines -------------------------------------------------------------------


def _line_pencil(net: QuadricNet, A, B, ext: FieldCtx):
    MA = pencil_matrix(net, [FFElement(ext, _code(a, ext)) for a in A])
    MB = pencil_matrix(net, [FFElement(ext, _code(b, ext)) for b in B])
    return MA, MB


def line_intersection(net: QuadricNet, A, B, ext: FieldCtx):
    """Restrict the discriminant to the line {sA + B} u {A}.

    Returns (p(s), A_on_curve) where p(s) = det(s MA + MB).
    """
    MA, MB = _line_pencil(net, A, B, ext)
    # det(s MA + MB) = det(MB - (-s) MA); reuse the pencil determinant with F = -MA
    negA = [[ext.neg(x) for x in row] for row in MA]
    p = _pencil_det(negA, MB, ext)
    return p, linalg.det_codes(MA, ext) == 0


def transversal_rank(net: QuadricNet, A: Sequence, B: Sequence, ext: FieldCtx) -> int:
    n = net.dim
    p, a_on = line_intersection(net, A, B, ext)
    if p.is_zero():
        raise NotTransverse("line lies inside the discriminant curve")
    mult_at_A = n - p.degree()
    sqf = uni_gcd(p, p.deriv()).degree() == 0 if p.degree() > 0 else True
    roots = roots_in(p, ext) if p.degree() > 0 else []
    distinct = sorted({r.c for r in roots})
    if not sqf or mult_at_A > 1:
        pattern = sorted([roots.count(r) for r in set(roots)] + ([mult_at_A] if mult_at_A else []), reverse=True)
        raise NotTransverse(f"line is not transverse; multiplicity pattern {pattern}")
    if len(distinct) < p.degree():
        m = splitting_degree(p)
        raise NotTransverse(f"intersection points need an extension of degree {m} over F_{ext.spec}")
    Ae = [FFElement(ext, _code(a, ext)) for a in A]
    Be = [FFElement(ext, _code(b, ext)) for b in B]
    pts = []
    for s in distinct:
        pts.append([ext.add(ext.mul(s, a.c), b.c) for a, b in zip(Ae, Be)])
    if mult_at_A:
        pts.append([a.c for a in Ae])
    images = []
    for P in pts:
        img = steinerian(net, [FFElement(ext, c) for c in P])
        images.append([x.c for x in img])
    return len(linalg.rref_codes(images, ext)[1])


def find_transverse_line(net: QuadricNet, max_degree: int = 9):
    """Search F_p-rational lines for one meeting the discriminant in distinct points.

    Returns (A, B, e) with e the smallest splitting degree found.
    """
    base = net.ctx
    pts = [tuple(x.c for x in P) for P in enumerate_proj(base, 2)]
    best = None
    seen = set()
    for A, B in itertools.combinations(pts, 2):
        line = tuple(sorted(linalg.kernel_codes([list(A), list(B)], base)[0]))
        if line in seen:
            continue
        seen.add(line)
        p, a_on = line_intersection(net, A, B, base)
        if p.is_zero() or net.dim - p.degree() > 1:
            continue
        if p.degree() and uni_gcd(p, p.deriv()).degree() > 0:
            continue
        e = splitting_degree(p) if p.degree() > 0 else 1
        if e <= max_degree and (best is None or e < best[2]):
            best = (A, B, e)
    if best is None:
        raise NotTransverse("no transverse rational line found")
    return best
