"""The quotient and the degree-3 elliptic cover: exact pullback checks, ideal
membership for the quotient quartic, and a fiber census over small fields.

Fibers are counted on places, not plane points.  Away from singular points
and base points of the map a place is a point; at the remaining finitely many
points the branches are parametrised by blowing up until the strict transform
is smooth and then lifting a power series coefficient by coefficient.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

from . import linalg
from .counting import PlaneCurve, _chart_expansion, singular_points_plane
from .gf import FFElement, FieldCtx, enumerate_proj, make_field
from .poly import (
    MultiPoly,
    UniPolyF,
    definition_degree,
    divide_exact,
    embedding,
    pullback,
    roots_in,
    uni_gcd,
)


class MapUndefined(ValueError):
    pass


# --- rational maps -----------------------------------------------------------------


@dataclass
class RationalMap:
    """Affine rational map (N_i / D_i) in the source variables."""

    components: list[tuple[MultiPoly, MultiPoly]]
    source: str = ""
    target: str = ""

    def __post_init__(self):
        ctx, nv = self.components[0][0].ctx, self.components[0][0].nvars
        for num, den in self.components:
            if den.is_zero():
                raise ValueError("denominator is the zero polynomial")
            if {num.ctx, den.ctx} != {ctx} or {num.nvars, den.nvars} != {nv}:
                raise ValueError("components must share variables and field")

    @property
    def ctx(self) -> FieldCtx:
        return self.components[0][0].ctx

    def homogeneous(self) -> list[MultiPoly]:
        """Forms (G0 : G1 : G2) in (x, y, z) for (N0/D0 : N1/D1 : 1).

        When one denominator divides the other the common part is cancelled,
        which removes a whole curve of spurious base points.
        """
        if len(self.components) != 2:
            raise ValueError("homogeneous form is defined for maps to the affine plane")
        (N0, D0), (N1, D1) = self.components
        q = divide_exact(D1, D0)
        if q is not None:
            forms = [N0 * q, N1, D1]
        else:
            q = divide_exact(D0, D1)
            forms = [N0, N1 * q, D0] if q is not None else [N0 * D1, N1 * D0, D0 * D1]
        d = max(g.total_degree() for g in forms)
        return [g.homogenize(d) for g in forms]


@dataclass
class CoverCertificate:
    holds: bool
    numerator_degree: int
    quotient_degree: int | None
    denominator_degree: int
    quotient: MultiPoly | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "numerator_degree": self.numerator_degree,
            "quotient_degree": self.quotient_degree,
            "denominator_degree": self.denominator_degree,
        }


def verify_cover(source: MultiPoly, rmap: RationalMap, target: MultiPoly) -> CoverCertificate:
    """Exact check that the map sends the affine source curve into the target curve."""
    for _, den in rmap.components:
        if divide_exact(den, source) is not None:
            raise MapUndefined("map undefined along curve: a denominator vanishes on the source")
    N, D = pullback(target, rmap.components)
    if N.is_zero():
        return CoverCertificate(True, -1, -1, D.total_degree(), N)
    Q = divide_exact(N, source)
    if Q is not None and Q * source != N:
        raise AssertionError("division certificate does not re-multiply")
    return CoverCertificate(
        Q is not None, N.total_degree(), None if Q is None else Q.total_degree(), D.total_degree(), Q
    )


def involution_check(model: MultiPoly, var: int = 1) -> bool:
    """Is the model fixed, up to scalar, by negating one variable?"""
    images = [MultiPoly.var(model.ctx, model.nvars, i) for i in range(model.nvars)]
    images[var] = -images[var]
    return model.substitute(images).scale_equal(model) is not None


def choose_377() -> int:
    return sum(math.comb(13, i) for i in (1, 2, 3))


# --- quotient membership -------------------------------------------------------------


def _monomials(nvars: int, d: int) -> list[tuple[int, ...]]:
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(set(out), reverse=True)


def quotient_membership(D: MultiPoly, forms: Sequence[MultiPoly]) -> bool:
    """Is D (in the first variables) in the degree-4 part of the ideal of the forms?"""
    n = forms[0].nvars
    ctx = forms[0].ctx
    if not D.is_homogeneous() or D.total_degree() != 4:
        raise ValueError("D must be a homogeneous quartic")
    if D.nvars < n:
        D = MultiPoly(ctx, n, {e + (0,) * (n - D.nvars): c for e, c in D.t.items()})
    quartics = _monomials(n, 4)
    index = {e: i for i, e in enumerate(quartics)}
    gens = []
    for q in forms:
        for m in _monomials(n, 2):
            g = q.mul_monomial(m, 1)
            gens.append(g)
    A = [[0] * len(gens) for _ in quartics]
    for j, g in enumerate(gens):
        for e, c in g.t.items():
            A[index[e]][j] = c
    b = [0] * len(quartics)
    for e, c in D.t.items():
        b[index[e]] = c
    return linalg.solve_codes(A, b, ctx) is not None


# --- branches ------------------------------------------------------------------------


def _ser_mul(a: list[int], b: list[int], ext: FieldCtx, n: int) -> list[int]:
    out = [0] * n
    add, mul = ext.add, ext.mul
    for i, x in enumerate(a[:n]):
        if x:
            for j in range(min(len(b), n - i)):
                if b[j]:
                    out[i + j] = add(out[i + j], mul(x, b[j]))
    return out


def _ser_eval(g: MultiPoly, series: Sequence[list[int]], ext: FieldCtx, n: int) -> list[int]:
    """g(series...) truncated to n terms."""
    powers: dict[tuple[int, int], list[int]] = {}

    def power(i: int, a: int) -> list[int]:
        if (i, a) not in powers:
            if a == 1:
                powers[(i, a)] = series[i][:n] + [0] * (n - len(series[i][:n]))
            else:
                powers[(i, a)] = _ser_mul(power(i, a - 1), series[i], ext, n)
        return powers[(i, a)]

    out = [0] * n
    for e, c in g.t.items():
        term = [c] + [0] * (n - 1)
        for i, a in enumerate(e):
            if a:
                term = _ser_mul(term, power(i, a), ext, n)
        out = [ext.add(x, y) for x, y in zip(out, term)]
    return out


def _order(g: MultiPoly) -> int:
    return min((sum(e) for e in g.t), default=-1)


def _hensel(g: MultiPoly, n: int, ext: FieldCtx) -> tuple[list[int], list[int]]:
    """Smooth germ g(u, v) = 0 at the origin: (u(t), v(t)) with t a uniformiser."""
    gu = g.t.get((1, 0), 0)
    gv = g.t.get((0, 1), 0)
    swap = not gv
    if swap:
        g = MultiPoly(ext, 2, {(b, a): c for (a, b), c in g.t.items()})
        gv = gu
    t = [0, 1] + [0] * (n - 2)
    v = [0] * n
    s = ext.neg(ext.inv(gv))
    for i in range(1, n):
        r = _ser_eval(g, [t, v], ext, i + 1)[i]
        if r:
            v[i] = ext.mul(r, s)
    return (v, t) if swap else (t, v)


def _blowup(g: MultiPoly, m: int, vertical: bool) -> MultiPoly:
    """Strict transform: v = u w (or u = v w when vertical), divided by the exceptional power."""
    out = {}
    for (a, b), c in g.t.items():
        if vertical:
            out[(a + b - m, a)] = c  # (v, w): u^a v^b = v^(a+b) w^a
        else:
            out[(a + b - m, b)] = c  # (u, w): u^a (u w)^b
    return MultiPoly(g.ctx, 2, out)


def _shift_second(g: MultiPoly, w0: int) -> MultiPoly:
    ext = g.ctx
    u = MultiPoly.var(ext, 2, 0)
    w = MultiPoly.var(ext, 2, 1) + MultiPoly.const(ext, 2, FFElement(ext, w0))
    return g.substitute([u, w])


def branches(g: MultiPoly, n: int, depth: int = 0) -> list[tuple[list[int], list[int]]]:
    """Branches of g(u, v) = 0 at the origin that are rational over g's field.

    Each branch is (u(t), v(t)) to n terms.  Branches whose tangent data needs
    a larger field are not returned.
    """
    ext = g.ctx
    m = _order(g)
    if m <= 0:
        raise ValueError("origin is not on the curve")
    if m == 1:
        return [_hensel(g, n, ext)]
    if depth > 12:
        raise RecursionError("branch resolution did not terminate")
    out = []
    g1 = _blowup(g, m, vertical=False)
    cone = UniPolyF(ext, [g1.t.get((0, j), 0) for j in range(m + 1)])
    for w0 in sorted({r.c for r in roots_in(cone, ext)}) if cone.degree() > 0 else []:
        for U, W in branches(_shift_second(g1, w0), n, depth + 1):
            Wfull = [ext.add(W[0], w0)] + W[1:]
            out.append((U, _ser_mul(U, Wfull, ext, n)))
    if cone.degree() < m:  # the vertical direction u = 0 is tangent
        g2 = _blowup(g, m, vertical=True)
        for V, W in branches(g2, n, depth + 1):
            out.append((_ser_mul(V, W, ext, n), V))
    return out


@dataclass(frozen=True)
class Place:
    point: tuple  # codes of the centre in P^2
    branch: int  # index among the rational branches at that point (0 for ordinary points)
    image: tuple  # codes of the image point in P^2

    def to_json(self, ext: FieldCtx) -> dict:
        return {
            "point": [str(FFElement(ext, c)) for c in self.point],
            "branch": self.branch,
            "image": [str(FFElement(ext, c)) for c in self.image],
        }


def _branch_image(curve: PlaneCurve, forms: Sequence[MultiPoly], point, ext: FieldCtx) -> list[tuple]:
    g, _ = _chart_expansion(curve.equation, [FFElement(ext, c) for c in point])
    i = max(j for j in range(3) if point[j])
    s = ext.inv(point[i])
    centre = [ext.mul(c, s) for c in point]
    others = [j for j in range(3) if j != i]
    flifted = [f.lift(ext) if f.ctx is not ext else f for f in forms]
    n = 12
    while True:
        images = []
        done = True
        for U, V in branches(g, n):
            coords = [None, None, None]
            coords[i] = [1] + [0] * (n - 1)
            coords[others[0]] = [ext.add(centre[others[0]], U[0])] + U[1:]
            coords[others[1]] = [ext.add(centre[others[1]], V[0])] + V[1:]
            vals = [_ser_eval(F, coords, ext, n) for F in flifted]
            v = min((next((j for j, c in enumerate(s_) if c), n) for s_ in vals))
            if v >= n:
                done = False
                break
            images.append(linalg.normalize_projective([s_[v] for s_ in vals], ext))
        if done:
            return images
        if n > 200:
            raise MapUndefined("map vanishes to high order along a branch")
        n *= 2


class PlaceTable:
    """All places of the source curve rational over ext, with their images."""

    def __init__(self, curve: PlaneCurve, rmap: RationalMap, ext: FieldCtx):
        self.curve = curve
        self.ext = ext
        self.forms = rmap.homogeneous()
        F = curve.equation.lift(ext) if curve.ctx is not ext else curve.equation
        G = [f.lift(ext) if f.ctx is not ext else f for f in self.forms]
        sing = {tuple(x.c for x in P) for P in singular_points_plane(curve, ext.k, method="resultant")}
        places: list[Place] = []
        bad: set[tuple] = set()
        for P in self._points(F, ext):
            vals = [g.eval([FFElement(ext, c) for c in P]).c for g in G]
            if P in sing or not any(vals):
                bad.add(P)
                continue
            places.append(Place(P, 0, linalg.normalize_projective(vals, ext)))
        for P in sorted(bad):
            for b, img in enumerate(_branch_image(curve, self.forms, P, ext)):
                places.append(Place(P, b, img))
        self.places = sorted(places, key=lambda pl: (pl.point, pl.branch))
        self.bad_points = sorted(bad)
        self.by_image: dict[tuple, list[Place]] = {}
        for pl in self.places:
            self.by_image.setdefault(pl.image, []).append(pl)

    @staticmethod
    def _points(F: MultiPoly, ext: FieldCtx) -> list[tuple]:
        """Projective points of F = 0 over ext: affine (z = 1) by roots in x, then z = 0."""
        pts = []
        for y0 in range(ext.q):
            coeffs: dict[int, int] = {}
            for (a, b, c), v in F.t.items():
                coeffs[a] = ext.add(coeffs.get(a, 0), ext.mul(v, ext.pow(y0, b)))
            deg = max(coeffs, default=-1)
            u = UniPolyF(ext, [coeffs.get(i, 0) for i in range(deg + 1)])
            if u.is_zero():
                pts.extend((x0, y0, 1) for x0 in range(ext.q))
            elif u.degree() > 0:
                pts.extend((x0, y0, 1) for x0 in sorted({r.c for r in roots_in(u, ext)}))
        for P in [(1, 0, 0)] + [(x0, 1, 0) for x0 in range(ext.q)]:
            if not F.eval([FFElement(ext, c) for c in P]).c:
                pts.append(P)
        return pts

    def fiber(self, target_point: Sequence[int]) -> list[Place]:
        return self.by_image.get(linalg.normalize_projective(list(target_point), self.ext), [])


_TABLES: dict = {}


def place_table(curve: PlaneCurve, rmap: RationalMap, k: int) -> PlaceTable:
    key = (curve.equation, tuple(rmap.homogeneous()), k)
    if key not in _TABLES:
        _TABLES[key] = PlaceTable(curve, rmap, make_field(curve.ctx.p, k))
    return _TABLES[key]


def fiber(curve: PlaneCurve, rmap: RationalMap, target: MultiPoly, point: Sequence[FFElement], k: int) -> list[Place]:
    """Places of the source over F_{p^k} mapping to a target point (given over F_{p^k})."""
    ext = make_field(curve.ctx.p, k)
    pt = [ext(x) for x in point]
    T = target.lift(ext) if target.ctx is not ext else target
    if T.eval(pt).c:
        raise ValueError("point is not on the target curve")
    return place_table(curve, rmap, k).fiber([x.c for x in pt])


# --- census --------------------------------------------------------------------------


@dataclass
class FiberRecord:
    point: list[str]
    degree: int
    counts: dict[int, int]  # j -> places over F_{p^{degree * j}}
    pattern: list[tuple[int, int]] | None  # (e, f) per place over the point's field
    fully_split: bool
    wild: bool

    def to_json(self) -> dict:
        return {
            "target_point": self.point,
            "definition_degree": self.degree,
            "fiber_counts": {str(j): n for j, n in sorted(self.counts.items())},
            "pattern": None if self.pattern is None else [{"e": e, "f": f} for e, f in self.pattern],
            "fully_split": self.fully_split,
            "wild": self.wild,
        }


@dataclass
class RamificationReport:
    degree: int
    k_max: int
    records: list[FiberRecord]
    genus_source: int
    genus_target: int

    @property
    def ramified(self) -> list[FiberRecord]:
        return [r for r in self.records if r.pattern and any(e > 1 for e, _ in r.pattern)]

    @property
    def required_different(self) -> int:
        return 2 * self.genus_source - 2 - self.degree * (2 * self.genus_target - 2)

    def tame_sum(self) -> int:
        """Sum of (e - 1) over geometric ramification points found."""
        return sum(r.degree * f * (e - 1) for r in self.ramified for e, f in r.pattern)

    def wild_lower_bound(self) -> int:
        """Different degree lower bound: e - 1 for tame places, e for wild ones."""
        out = 0
        for r in self.ramified:
            for e, f in r.pattern:
                if e > 1:
                    out += r.degree * f * (e if e % 3 == 0 else e - 1)
        return out

    def riemann_hurwitz(self) -> dict:
        wild = any(r.wild for r in self.records)
        req = self.required_different
        return {
            "required_different_degree": req,
            "tame_accounting": self.tame_sum(),
            "different_lower_bound": self.wild_lower_bound(),
            "wild_found": wild,
            "consistent": self.wild_lower_bound() <= req and (not wild or self.tame_sum() < req),
        }

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "k_max": self.k_max,
            "fibers": [r.to_json() for r in self.records],
            "ramified_fibers": len(self.ramified),
            "riemann_hurwitz": self.riemann_hurwitz(),
            "note": "ramification indices are apparent, inferred from fiber sizes over extensions",
        }


def _pattern(n1: int, n2: int) -> list[tuple[int, int]] | None:
    """Fiber type of a degree-3 map from place counts over the point's field and its quadratic extension."""
    if n1 == 3:
        return [(1, 1)] * 3
    if n1 == 2:
        return [(2, 1), (1, 1)]
    if n1 == 0 and n2 == 0:
        return [(1, 3)]
    if n1 == 1 and n2 == 3:
        return [(1, 1), (1, 2)]
    if n1 == 1 and n2 == 1:
        return [(3, 1)]
    return None


def _target_points(target: MultiPoly, k: int) -> list[tuple[int, ...]]:
    ext = make_field(target.ctx.p, k)
    T = target.lift(ext) if target.ctx is not ext else target
    out = []
    for P in enumerate_proj(ext, 2):
        if T.eval(P).c:
            continue
        d = 1
        for x in P:
            d = d * definition_degree(x) // math.gcd(d, definition_degree(x))
        if d == k:
            out.append(tuple(x.c for x in P))
    return out


def fiber_census(
    curve: PlaneCurve, rmap: RationalMap, target: MultiPoly, k_max: int = 2, degree: int = 3,
    genus_source: int = 5, genus_target: int = 1,
) -> RamificationReport:
    if k_max > 6:
        raise ValueError("k_max above 6 is not supported")
    records = []
    for k in range(1, k_max + 1):
        ext = make_field(curve.ctx.p, k)
        big = make_field(curve.ctx.p, 2 * k)
        emb = embedding(ext, big)
        t1 = place_table(curve, rmap, k)
        t2 = place_table(curve, rmap, 2 * k)
        for P in _target_points(target, k):
            n1 = len(t1.fiber(P))
            n2 = len(t2.fiber([emb.code(c) for c in P]))
            pat = _pattern(n1, n2)
            records.append(
                FiberRecord(
                    point=[str(FFElement(ext, c)) for c in P],
                    degree=k,
                    counts={1: n1, 2: n2},
                    pattern=pat,
                    fully_split=pat is not None and all(f == 1 for _, f in pat),
                    wild=pat is not None and any(e % curve.ctx.p == 0 for e, _ in pat),
                )
            )
    return RamificationReport(degree, k_max, records, genus_source, genus_target)
