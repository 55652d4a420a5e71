"""Point counting and singularity analysis for plane curves and quadric nets.

Projective spaces are walked chart by chart: x_0 = 1 first, then
x_0 = 0, x_1 = 1, and so on.  Inside a chart the free coordinates are
enumerated as a flat index range split into fixed-size chunks, so results do
not depend on how chunks are distributed over threads.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg
from .gf import FFElement, FieldCtx, make_field, proj_size
from .poly import (
    MultiPoly,
    UniPolyF,
    distinct_degree,
    resultant_in,
    roots_in,
    squarefree_part,
    uni_gcd,
)

DEFAULT_BUDGET = 10**10
CHUNK = 1 << 18


class BudgetExceeded(RuntimeError):
    def __init__(self, required: int, budget: int, what: str = "evaluations"):
        super().__init__(f"needs {required} {what}, budget is {budget}; raise --budget to proceed")
        self.required = required
        self.budget = budget


class Refusal(RuntimeError):
    """A computation declined because its soundness preconditions fail."""


@dataclass(frozen=True)
class PlaneCurve:
    equation: MultiPoly
    name: str = ""

    def __post_init__(self):
        f = self.equation
        if f.nvars != 3:
            raise ValueError("plane curves need three homogeneous variables")
        if f.is_zero() or not f.is_homogeneous():
            raise ValueError("plane curve equation must be a nonzero homogeneous form")

    @property
    def degree(self) -> int:
        return self.equation.total_degree()

    @property
    def ctx(self) -> FieldCtx:
        return self.equation.ctx


@dataclass(frozen=True)
class QuadricNet:
    """Three symmetric Gram matrices (codes over ``ctx``); q_i(v) = v^T Q_i v."""

    ctx: FieldCtx
    Q: tuple

    def __post_init__(self):
        for M in self.Q:
            n = len(M)
            if any(M[i][j] != M[j][i] for i in range(n) for j in range(n)):
                raise ValueError("Gram matrices must be symmetric")

    @property
    def dim(self) -> int:
        return len(self.Q[0])

    def forms(self) -> list[MultiPoly]:
        ctx, n = self.ctx, self.dim
        out = []
        for M in self.Q:
            terms = {}
            for i in range(n):
                for j in range(i, n):
                    c = M[i][j] if i == j else ctx.add(M[i][j], M[j][i])
                    if c:
                        e = [0] * n
                        e[i] += 1
                        e[j] += 1
                        terms[tuple(e)] = c
            out.append(MultiPoly(ctx, n, terms))
        return out

    def matrices(self) -> list[list[list[FFElement]]]:
        return [linalg.from_codes(M, self.ctx) for M in self.Q]


@dataclass
class CountRecord:
    model: str
    k: int
    N: int
    strategy: str
    elapsed: float = 0.0

    def to_json(self) -> dict:
        return {
            "model": self.model,
            "k": self.k,
            "N": self.N,
            "strategy": self.strategy,
            "elapsed_ms": int(self.elapsed * 1000),
        }


# --- vectorised evaluation --------------------------------------------------------


class VecPoly:
    """A MultiPoly compiled for evaluation on code arrays over an extension."""

    def __init__(self, f: MultiPoly, ext: FieldCtx):
        f = f.lift(ext) if f.ctx is not ext else f
        self.ext = ext
        self.vf = ext.vec()
        self.terms = list(f.t.items())
        self.nvars = f.nvars

    def __call__(self, cols: Sequence, shape) -> np.ndarray:
        vf = self.vf
        acc = np.zeros(shape, dtype=np.int64)
        powers: dict[tuple[int, int], np.ndarray] = {}
        for e, c in self.terms:
            term = None
            for i, a in enumerate(e):
                if not a:
                    continue
                col = cols[i]
                if np.isscalar(col):
                    val = np.full(shape, self.ext.pow(int(col), a), dtype=np.int64)
                else:
                    key = (i, a)
                    if key not in powers:
                        powers[key] = vf.pow(col, a) if a > 1 else col
                    val = powers[key]
                term = val if term is None else vf.mul(term, val)
            if term is None:
                term = np.full(shape, c, dtype=np.int64)
            else:
                term = vf.scal(c, term)
            acc = vf.add(acc, term)
        return acc


def _chart_columns(n: int, lead: int, idx: np.ndarray, q: int, free: Sequence[int]) -> list:
    cols: list = [0] * (n + 1)
    cols[lead] = 1
    for j, v in enumerate(reversed(free)):
        cols[v] = (idx // q**j) % q
    return cols


def _chunks(total: int, size: int = CHUNK):
    for start in range(0, total, size):
        yield start, min(total, start + size)


def _run_chunks(fn, tasks, threads: int) -> int:
    if threads <= 1:
        return sum(fn(t) for t in tasks)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return sum(pool.map(fn, tasks))


def _common_zero_count(polys: Sequence[MultiPoly], n: int, ext: FieldCtx, threads: int = 1) -> int:
    """Number of points of P^n(ext) where every poly vanishes (naive enumeration)."""
    vps = [VecPoly(f, ext) for f in polys]
    q = ext.q
    tasks = []
    for lead in range(n + 1):
        free = list(range(lead + 1, n + 1))
        for a, b in _chunks(q ** len(free)):
            tasks.append((lead, free, a, b))

    def work(task) -> int:
        lead, free, a, b = task
        idx = np.arange(a, b, dtype=np.int64)
        cols = _chart_columns(n, lead, idx, q, free)
        mask = np.ones(b - a, dtype=bool)
        for vp in vps:
            mask &= vp(cols, (b - a,)) == 0
        return int(mask.sum())

    return _run_chunks(work, tasks, threads)


def _ext_for(ctx: FieldCtx, k: int) -> FieldCtx:
    if ctx.k != 1:
        raise ValueError("counting expects curves defined over the prime field")
    return make_field(ctx.p, k)


def count_plane(curve: PlaneCurve, k: int, budget: int = DEFAULT_BUDGET, threads: int = 1) -> CountRecord:
    t0 = time.perf_counter()
    ext = _ext_for(curve.ctx, k)
    cost = proj_size(ext.q, 2) * max(len(curve.equation.t), 1)
    if cost > budget:
        raise BudgetExceeded(cost, budget)
    n = _common_zero_count([curve.equation], 2, ext, threads)
    return CountRecord(curve.name, k, n, "enumerate", time.perf_counter() - t0)


# --- quadric nets -----------------------------------------------------------------


def _restrict(f: MultiPoly, fixed: dict[int, int]) -> MultiPoly:
    for i, v in fixed.items():
        f = f.specialize(i, f.ctx.element(v))
    return f


def _plan(quads: Sequence[MultiPoly], free: Sequence[int]):
    """Pick (quadric index, variable) with the variable of degree exactly one."""
    best = None
    for qi, f in enumerate(quads):
        for v in free:
            if f.degree_in(v) != 1:
                continue
            co = f.coefficients_in(v)
            L = co[1]
            score = 0 if (L.total_degree() == 0) else 1
            key = (score, qi, v)
            if best is None or key < best:
                best = key
    return best


def _count_quadratic_system(coeffs, vf, q: int, sqrt_tab: np.ndarray, ctx: FieldCtx) -> np.ndarray:
    """Per row, the number of v in F_q with a_j v^2 + b_j v + c_j = 0 for every j."""
    nrows = coeffs[0][0].shape[0]
    total = np.zeros(nrows, dtype=np.int64)
    unresolved = np.ones(nrows, dtype=bool)

    def holds_all(v, rows):
        ok = np.ones(rows.sum(), dtype=bool)
        for a, b, c in coeffs:
            a_, b_, c_ = a[rows], b[rows], c[rows]
            val = vf.add(vf.add(vf.mul(a_, vf.mul(v, v)), vf.mul(b_, v)), c_)
            ok &= val == 0
        return ok

    two = ctx.from_int(2)
    four = ctx.from_int(4)
    for a, b, c in coeffs:
        nz = unresolved & ((a != 0) | (b != 0) | (c != 0))
        quad = nz & (a != 0)
        if quad.any():
            aq, bq, cq = a[quad], b[quad], c[quad]
            disc = vf.sub(vf.mul(bq, bq), vf.scal(four, vf.mul(aq, cq)))
            s = sqrt_tab[disc]
            has = s >= 0
            s = np.where(has, s, 0)
            inv2a = vf.inv(vf.scal(two, aq))
            r1 = vf.mul(vf.sub(s, bq), inv2a)
            r2 = vf.mul(vf.sub(vf.neg(s), bq), inv2a)
            cnt = np.where(has & holds_all(r1, quad), 1, 0)
            cnt += np.where(has & (s != 0) & holds_all(r2, quad), 1, 0)
            total[quad] += cnt
        lin = nz & (a == 0) & (b != 0)
        if lin.any():
            r = vf.mul(vf.neg(c[lin]), vf.inv(b[lin]))
            total[lin] += holds_all(r, lin).astype(np.int64)
        unresolved &= ~nz
    total[unresolved] += q
    return total


def _eliminate_count(forms: Sequence[MultiPoly], n: int, ext: FieldCtx, budget: int, threads: int) -> int:
    q = ext.q
    vf = ext.vec()
    sqrt_tab = vf.sqrt_table()
    lifted = [f.lift(ext) for f in forms]
    total = 0
    for lead in range(n + 1):
        fixed = {i: 0 for i in range(lead)}
        fixed[lead] = 1
        free = list(range(lead + 1, n + 1))
        quads = [_restrict(f, fixed) for f in lifted]
        if not free:
            total += int(all(f.is_zero() for f in quads))
            continue
        plan = _plan(quads, free)
        if plan is None:
            cost = q ** len(free) * len(quads)
            if cost > budget:
                raise BudgetExceeded(cost, budget)
            total += _chart_naive(quads, n, lead, free, ext, threads)
            continue
        _, qi, v = plan
        others = [w for w in free if w != v]
        cost = q ** len(others) * len(quads)
        if cost > budget:
            raise BudgetExceeded(cost, budget)
        co = quads[qi].coefficients_in(v)
        zero = MultiPoly(ext, n + 1)
        L, R = VecPoly(co.get(1, zero), ext), VecPoly(co.get(0, zero), ext)
        rest = [f for j, f in enumerate(quads) if j != qi]
        rest_vp = [VecPoly(f, ext) for f in rest]
        rest_coeffs = [
            tuple(VecPoly(f.coefficients_in(v).get(d, zero), ext) for d in (2, 1, 0)) for f in rest
        ]
        m = len(others)

        def work(task, others=others, v=v, L=L, R=R, rest_vp=rest_vp, rest_coeffs=rest_coeffs, lead=lead):
            a, b = task
            idx = np.arange(a, b, dtype=np.int64)
            cols: list = [0] * (n + 1)
            for i in range(lead):
                cols[i] = 0
            cols[lead] = 1
            for j, w in enumerate(reversed(others)):
                cols[w] = (idx // q**j) % q
            shape = (b - a,)
            lv, rv = L(cols, shape), R(cols, shape)
            good = lv != 0
            count = 0
            if good.any():
                sub = [c[good] if not np.isscalar(c) else c for c in cols]
                sol = vf.mul(vf.neg(rv[good]), vf.inv(lv[good]))
                sub[v] = sol
                ok = np.ones(int(good.sum()), dtype=bool)
                for vp in rest_vp:
                    ok &= vp(sub, ok.shape) == 0
                count += int(ok.sum())
            degen = (lv == 0) & (rv == 0)
            if degen.any():
                sub = [c[degen] if not np.isscalar(c) else c for c in cols]
                shp = (int(degen.sum()),)
                coeffs = [tuple(vp(sub, shp) for vp in trip) for trip in rest_coeffs]
                if coeffs:
                    count += int(_count_quadratic_system(coeffs, vf, q, sqrt_tab, ext).sum())
                else:
                    count += q * shp[0]
            return count

        total += _run_chunks(work, list(_chunks(q**m)), threads)
    return total


def _chart_naive(quads, n, lead, free, ext, threads) -> int:
    vps = [VecPoly(f, ext) for f in quads]
    q = ext.q

    def work(task):
        a, b = task
        idx = np.arange(a, b, dtype=np.int64)
        cols = _chart_columns(n, lead, idx, q, free)
        ok = np.ones(b - a, dtype=bool)
        for vp in vps:
            ok &= vp(cols, (b - a,)) == 0
        return int(ok.sum())

    return _run_chunks(work, list(_chunks(q ** len(free))), threads)


def count_net(
    net: QuadricNet | Sequence[MultiPoly],
    k: int,
    strategy: str = "eliminate",
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    model: str = "",
) -> CountRecord:
    """Common zeros of three quadrics in P^n(F_{p^k})."""
    t0 = time.perf_counter()
    forms = net.forms() if isinstance(net, QuadricNet) else list(net)
    n = forms[0].nvars - 1
    ext = _ext_for(forms[0].ctx, k)
    if strategy == "naive":
        cost = proj_size(ext.q, n) * len(forms)
        if cost > budget:
            raise BudgetExceeded(cost, budget)
        N = _common_zero_count(forms, n, ext, threads)
    elif strategy == "eliminate":
        N = _eliminate_count(forms, n, ext, budget, threads)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return CountRecord(model, k, N, strategy, time.perf_counter() - t0)


def jacobian_rank_at(net: QuadricNet, point: Sequence[FFElement]) -> int:
    ext = point[0].ctx
    forms = net.forms()
    if any(f.eval(point).c for f in forms):
        raise ValueError("point is not on the net")
    rows = [[f.derive(i).eval(point) for i in range(len(point))] for f in forms]
    return linalg.rank(rows, ext)


# --- plane singularities ------------------------------------------------------------


def _partials(F: MultiPoly) -> list[MultiPoly]:
    return [F.derive(i) for i in range(3)]


def singular_points_plane(curve: PlaneCurve, k: int, method: str = "auto", budget: int = DEFAULT_BUDGET) -> list[tuple[FFElement, ...]]:
    """Singular points in P^2(F_{p^k}), as normalised coordinate tuples sorted by code."""
    ext = _ext_for(curve.ctx, k)
    if method == "auto":
        method = "enumerate" if proj_size(ext.q, 2) <= 10**7 else "resultant"
    if method == "enumerate":
        cost = proj_size(ext.q, 2) * 4
        if cost > budget:
            raise BudgetExceeded(cost, budget)
        return _singular_enumerate(curve, ext)
    if method == "resultant":
        return _singular_resultant(curve, ext)
    raise ValueError(f"unknown method {method!r}")


def _singular_enumerate(curve: PlaneCurve, ext: FieldCtx):
    F = curve.equation
    vps = [VecPoly(g, ext) for g in [F] + _partials(F)]
    q = ext.q
    out = []
    for lead in range(3):
        free = list(range(lead + 1, 3))
        total = q ** len(free)
        for a, b in _chunks(total):
            idx = np.arange(a, b, dtype=np.int64)
            cols = _chart_columns(2, lead, idx, q, free)
            mask = np.ones(b - a, dtype=bool)
            for vp in vps:
                mask &= vp(cols, (b - a,)) == 0
            for j in np.nonzero(mask)[0]:
                pt = [0, 0, 0]
                pt[lead] = 1
                for w in free:
                    pt[w] = int(cols[w][j])
                out.append(tuple(FFElement(ext, c) for c in pt))
    return sorted(out, key=lambda P: tuple(x.c for x in P))


def _affine_system(F: MultiPoly) -> list[MultiPoly]:
    """f, f_x, f_y in the chart z = 1 (kept in three variables, z absent)."""
    gs = [F] + _partials(F)[:2]
    return [g.specialize(2, 1) for g in gs]


def _x_candidates(polys: Sequence[MultiPoly], elim: int) -> UniPolyF | None:
    """gcd of the nonzero pairwise resultants eliminating variable `elim`."""
    keep = 1 - elim
    G = None
    nz = [g for g in polys if not g.is_zero()]
    for i in range(len(nz)):
        for j in range(i + 1, len(nz)):
            R = resultant_in(nz[i], nz[j], elim)
            if R.is_zero():
                continue
            u = R.to_unipoly(keep)
            G = u if G is None else uni_gcd(G, u)
    return G


def _at_infinity(F: MultiPoly) -> UniPolyF | None:
    """gcd of F, F_x, F_y, F_z restricted to (x : 1 : 0), as a polynomial in x."""
    G = None
    for g in [F] + _partials(F):
        h = g.specialize(1, 1).specialize(2, 0)
        if h.is_zero():
            continue
        u = h.to_unipoly(0)
        G = u if G is None else uni_gcd(G, u)
    return G


def _vanish_all(polys, point) -> bool:
    return all(not g.eval(point).c for g in polys)


def _singular_resultant(curve: PlaneCurve, ext: FieldCtx):
    F = curve.equation
    allp = [F] + _partials(F)
    out = set()
    aff = _affine_system(F)
    Gx = _x_candidates(aff, 1)
    if Gx is None:
        raise Refusal("all resultants vanish identically; curve is not reduced")
    if Gx.degree() > 0:
        for x0 in sorted({r.c for r in roots_in(Gx, ext)}):
            ys = _common_y_roots(aff, FFElement(ext, x0), ext)
            for y0 in ys:
                out.add((x0, y0.c, 1))
    Gi = _at_infinity(F)
    if Gi is not None and Gi.degree() > 0:
        for r in roots_in(Gi, ext):
            out.add((r.c, 1, 0))
    P = (FFElement(ext, 1), FFElement(ext, 0), FFElement(ext, 0))
    if _vanish_all(allp, P):
        out.add((1, 0, 0))
    return [tuple(FFElement(ext, c) for c in pt) for pt in sorted(out)]


def _univariate_at_x(g: MultiPoly, x0: FFElement, ext: FieldCtx) -> UniPolyF:
    """g(x0, y) as a polynomial in y over ext (g lives in variables x, y, [z absent])."""
    gl = g.lift(ext) if g.ctx is not ext else g
    coeffs: dict[int, int] = {}
    for e, c in gl.t.items():
        v = ext.mul(c, ext.pow(x0.c, e[0]))
        coeffs[e[1]] = ext.add(coeffs.get(e[1], 0), v)
    deg = max(coeffs, default=-1)
    return UniPolyF(ext, [coeffs.get(i, 0) for i in range(deg + 1)])


def _common_y_gcd(aff, x0: FFElement, ext: FieldCtx) -> UniPolyF | None:
    G = None
    for g in aff:
        u = _univariate_at_x(g, x0, ext)
        if u.is_zero():
            continue
        G = u if G is None else uni_gcd(G, u)
    return G


def _common_y_roots(aff, x0, ext):
    G = _common_y_gcd(aff, x0, ext)
    if G is None:
        return [FFElement(ext, c) for c in range(ext.q)]
    if G.degree() <= 0:
        return []
    return sorted({r for r in roots_in(G, ext)}, key=lambda r: r.c)


@dataclass
class SmoothnessCertificate:
    smooth: bool
    extensions_searched: list[int] = field(default_factory=list)
    bezout_bound: int = 0
    resultant_degree: int = 0
    witness: tuple | None = None

    def to_json(self) -> dict:
        return {
            "smooth": self.smooth,
            "extensions_searched": self.extensions_searched,
            "bezout_bound": self.bezout_bound,
            "resultant_degree": self.resultant_degree,
            "witness": None if self.witness is None else [str(x) for x in self.witness],
        }


def is_smooth_plane(curve: PlaneCurve) -> SmoothnessCertificate:
    """Decide smoothness over the algebraic closure.

    x-coordinates of affine singular points are roots of the gcd G of the
    resultants (in y) of f, f_x, f_y.  Each irreducible factor of G of degree
    e is split over F_{p^e}, and at every root x0 the three polynomials in y
    are tested for a common factor.  The line at infinity is handled the same
    way with the chart y = 1.
    """
    F = curve.equation
    d = curve.degree
    if d > 8:
        raise ValueError("degree above 8 is not supported")
    p = F.ctx.p
    cert = SmoothnessCertificate(True, bezout_bound=(d - 1) ** 2)
    aff = _affine_system(F)
    Gx = _x_candidates(aff, 1)
    if Gx is None:
        cert.smooth = False
        return cert
    cert.resultant_degree = Gx.degree()
    searched = set()
    checks = []
    if Gx.degree() > 0:
        checks.append(("affine", Gx))
    Gi = _at_infinity(F)
    if Gi is None:
        cert.smooth = False
        return cert
    if Gi.degree() > 0:
        checks.append(("infinity", Gi))
    for where, G in checks:
        for e, g in sorted(distinct_degree(squarefree_part(G)).items()):
            ext = make_field(p, e)
            searched.add(e)
            for x0 in roots_in(g, ext):
                if where == "affine":
                    h = _common_y_gcd(aff, x0, ext)
                    if h is None or h.degree() > 0:
                        cert.smooth = False
                        cert.witness = ("affine x", x0)
                else:
                    pt = (x0, ext.one, ext.zero)
                    cert.smooth = False
                    cert.witness = pt
                if not cert.smooth:
                    cert.extensions_searched = sorted(searched)
                    return cert
    one = F.ctx.one
    if _vanish_all([F] + _partials(F), (one, F.ctx.zero, F.ctx.zero)):
        cert.smooth = False
        cert.witness = (one, F.ctx.zero, F.ctx.zero)
    cert.extensions_searched = sorted(searched)
    return cert


def singular_points_closure(curve: PlaneCurve) -> tuple[FieldCtx, list[tuple[FFElement, ...]]]:
    """All singular points over the algebraic closure, inside one field F_{p^E}.

    E is the lcm of the degrees of the irreducible factors of the x- and
    y-coordinate candidate polynomials, so every singular point is rational
    over F_{p^E}.
    """
    F = curve.equation
    p = F.ctx.p
    aff = _affine_system(F)
    Gx = _x_candidates(aff, 1)
    Gy = _x_candidates(aff, 0)
    Gi = _at_infinity(F)
    if Gx is None or Gy is None or Gi is None:
        raise Refusal("curve is not reduced")
    E = 1
    for G in (Gx, Gy, Gi):
        if G.degree() > 0:
            for e in distinct_degree(squarefree_part(G)):
                E = E * e // math.gcd(E, e)
    if E > 32:
        raise Refusal(f"singular points need F_{p}^{E}, beyond supported extensions")
    ext = make_field(p, E)
    allp = [F] + _partials(F)
    pts = []
    xs = sorted({r.c for r in roots_in(Gx, ext)}) if Gx.degree() > 0 else []
    ys = sorted({r.c for r in roots_in(Gy, ext)}) if Gy.degree() > 0 else []
    for x0 in xs:
        for y0 in ys:
            P = (FFElement(ext, x0), FFElement(ext, y0), ext.one)
            if _vanish_all(allp, P):
                pts.append(P)
    if Gi.degree() > 0:
        for r in sorted({r.c for r in roots_in(Gi, ext)}):
            pts.append((FFElement(ext, r), ext.one, ext.zero))
    P = (ext.one, ext.zero, ext.zero)
    if _vanish_all(allp, P):
        pts.append(P)
    return ext, pts


def _chart_expansion(F: MultiPoly, point: Sequence[FFElement]):
    """Affine equation centred at the point: returns g(u, v) with g(0,0) = F(point)."""
    ext = point[0].ctx
    Fl = F.lift(ext) if F.ctx is not ext else F
    i = max(j for j in range(3) if point[j].c)
    s = point[i].inverse()
    pt = [x * s for x in point]
    others = [j for j in range(3) if j != i]
    u = MultiPoly.var(ext, 2, 0)
    v = MultiPoly.var(ext, 2, 1)
    images = [None, None, None]
    images[i] = MultiPoly.const(ext, 2, 1)
    images[others[0]] = u + MultiPoly.const(ext, 2, pt[others[0]])
    images[others[1]] = v + MultiPoly.const(ext, 2, pt[others[1]])
    return Fl.substitute(images), ext


def _homogeneous_part(g: MultiPoly, d: int) -> MultiPoly:
    return MultiPoly(g.ctx, g.nvars, {e: c for e, c in g.t.items() if sum(e) == d})


def classify_double_point(curve: PlaneCurve, point: Sequence[FFElement]) -> str:
    """node-split, node-nonsplit, cusp or other, judged over the point's field."""
    g, ext = _chart_expansion(curve.equation, point)
    if _homogeneous_part(g, 0).t or _homogeneous_part(g, 1).t:
        raise ValueError("point is not a singular point of the curve")
    q2 = _homogeneous_part(g, 2)
    if q2.is_zero():
        return "other"
    A = q2.t.get((2, 0), 0)
    B = q2.t.get((1, 1), 0)
    C = q2.t.get((0, 2), 0)
    disc = ext.sub(ext.mul(B, B), ext.mul(ext.from_int(4), ext.mul(A, C)))
    if disc:
        return "node-split" if ext.sqrt_codes(disc) else "node-nonsplit"
    # tangent cone is a double line; ordinary cusp iff the cubic part is nonzero along it
    if A:
        r = ext.neg(ext.div(B, ext.add(A, A)))
        direction = (FFElement(ext, r), ext.one)
    else:
        direction = (ext.one, ext.zero)
    cubic = _homogeneous_part(g, 3)
    return "cusp" if cubic.eval(direction).c else "other"


PLACE_CHANGE = {"node-split": 1, "node-nonsplit": -1, "cusp": 0}


def smooth_count(curve: PlaneCurve, k: int, budget: int = DEFAULT_BUDGET) -> dict:
    """Rational places over F_{p^k} of the normalisation, for curves with only nodes and cusps."""
    _, closure = singular_points_closure(curve)
    kinds = []
    for P in closure:
        kind = classify_double_point(curve, P)
        if kind == "other":
            raise Refusal(f"singularity at {[str(x) for x in P]} is not a node or cusp")
        kinds.append(kind)
    plane = count_plane(curve, k, budget).N
    local = singular_points_plane(curve, k, budget=budget)
    correction = 0
    detail = []
    for P in local:
        kind = classify_double_point(curve, P)
        correction += PLACE_CHANGE[kind]
        detail.append({"point": [str(x) for x in P], "kind": kind})
    return {
        "k": k,
        "N_plane": plane,
        "N_smooth": plane + correction,
        "singular_points": detail,
        "delta": len(closure),
    }


def genus_from_delta(degree: int, delta: int) -> int:
    return (degree - 1) * (degree - 2) // 2 - delta
