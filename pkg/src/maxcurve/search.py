"""Exhaustive scan of plane sextics over F_3 through the 13 points of P^2(F_3).

Candidates are coordinate vectors in a fixed basis of the 15-dimensional space
of such sextics, taken up to sign (first nonzero digit 1).  Within a block of
candidates sharing their leading position the free digits run through a
modular ternary Gray code, so neighbours differ in one digit.  The scan splits
those digits into a low part, whose contributions to every evaluation column
are tabulated once, and a high part that is constant across 3^L consecutive
candidates; a column vanishes exactly when the low value equals minus the
high value, so one vectorised comparison screens a whole run.
"""

from __future__ import annotations

import hashlib
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from . import linalg
from .counting import _chart_expansion
from .gf import FieldCtx, VecField, enumerate_proj, make_field
from .poly import MultiPoly
from .zeta import feasible_count_profiles

DEGREE = 6
NBASIS = 15
TOTAL = (3**NBASIS - 1) // 2  # 7,174,453
CHECKPOINT_VERSION = 1


class CheckpointError(ValueError):
    pass


def monomials(d: int = DEGREE) -> list[tuple[int, int, int]]:
    """Degree-d monomials in (x, y, z), x-power descending then y."""
    return [(a, b, d - a - b) for a in range(d, -1, -1) for b in range(d - a, -1, -1)]


@dataclass
class SexticBasis:
    ctx: FieldCtx
    monos: list[tuple[int, int, int]]
    vectors: list[list[int]]  # each of length len(monos)
    free: list[int]  # column where each vector has its 1

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def poly(self, digits: Sequence[int]) -> MultiPoly:
        ctx = self.ctx
        coeffs = [0] * len(self.monos)
        for d, v in zip(digits, self.vectors):
            if d:
                coeffs = [ctx.add(c, ctx.mul(d, x)) for c, x in zip(coeffs, v)]
        return MultiPoly(ctx, 3, {m: c for m, c in zip(self.monos, coeffs) if c})

    def coordinates(self, f: MultiPoly) -> list[int] | None:
        """Basis coordinates of f, or None if f is outside the span."""
        ctx = self.ctx
        index = {m: i for i, m in enumerate(self.monos)}
        vec = [0] * len(self.monos)
        for e, c in f.t.items():
            if e not in index:
                return None
            vec[index[e]] = c
        digits = [vec[c] for c in self.free]
        fl = f if f.ctx is ctx else f.lift(ctx)
        return digits if self.poly(digits) == fl else None


def sextic_space(points: Sequence[Sequence[int]], ctx: FieldCtx | None = None, d: int = DEGREE) -> SexticBasis:
    ctx = ctx or make_field(3, 1)
    monos = monomials(d)
    rows = []
    for P in points:
        row = []
        for m in monos:
            v = 1
            for c, a in zip(P, m):
                v = ctx.mul(v, ctx.pow(c, a)) if a else v
            row.append(v)
        rows.append(row)
    if len(set(map(tuple, points))) != len(points):
        raise ValueError("points must be distinct")
    if not rows:
        vecs = [[1 if i == j else 0 for i in range(len(monos))] for j in range(len(monos))]
    else:
        vecs = linalg.kernel_codes(rows, ctx, len(monos))
    free = [next(i for i, x in enumerate(v) if x == 1 and all(w[i] == 0 for w in vecs if w is not v)) for v in vecs]
    return SexticBasis(ctx, monos, vecs, free)


def rational_points(ctx: FieldCtx | None = None) -> list[tuple[int, ...]]:
    ctx = ctx or make_field(3, 1)
    return [tuple(x.c for x in P) for P in enumerate_proj(ctx, 2)]


# --- candidate indexing ----------------------------------------------------------------


def _block_offsets(n: int = NBASIS) -> list[int]:
    out, acc = [], 0
    for j in range(n):
        out.append(acc)
        acc += 3 ** (n - 1 - j)
    return out


OFFSETS = _block_offsets()


def gray_digits(rank: int, n: int) -> list[int]:
    """Modular ternary Gray code of rank, least significant digit first."""
    r = []
    for _ in range(n):
        r.append(rank % 3)
        rank //= 3
    r.append(0)
    return [(r[i] - r[i + 1]) % 3 for i in range(n)]


def gray_rank(g: Sequence[int]) -> int:
    n = len(g)
    r = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        r[i] = (g[i] + r[i + 1]) % 3
    return sum(r[i] * 3**i for i in range(n))


def index_to_digits(index: int) -> list[int]:
    if not 0 <= index < TOTAL:
        raise IndexError(index)
    j = max(b for b, off in enumerate(OFFSETS) if off <= index)
    n = NBASIS - 1 - j
    g = gray_digits(index - OFFSETS[j], n)
    digits = [0] * NBASIS
    digits[j] = 1
    for i, gi in enumerate(g):
        digits[NBASIS - 1 - i] = gi
    return digits


def digits_to_index(digits: Sequence[int]) -> int:
    digits = [d % 3 for d in digits]
    j = next((i for i, d in enumerate(digits) if d), None)
    if j is None:
        raise ValueError("the zero vector is not a candidate")
    if digits[j] != 1:
        digits = [(2 * d) % 3 for d in digits]
    n = NBASIS - 1 - j
    g = [digits[NBASIS - 1 - i] for i in range(n)]
    return OFFSETS[j] + gray_rank(g)


def canonical(digits: Sequence[int]) -> list[int]:
    j = next((i for i, d in enumerate(digits) if d % 3), None)
    if j is None:
        raise ValueError("the zero vector is not a candidate")
    s = 1 if digits[j] % 3 == 1 else 2
    return [(d * s) % 3 for d in digits]


@dataclass(frozen=True)
class SearchCandidate:
    index: int
    digits: tuple
    stats: "Stats"

    def line(self) -> str:
        st = self.stats
        return f"cand={''.join(map(str, self.digits))} n3={st.n3} n9={st.n9} n27={st.n27}"

    def to_json(self) -> dict:
        return {"index": self.index, "digits": "".join(map(str, self.digits)), **asdict(self.stats)}


def enumerate_candidates(basis: SexticBasis, a: int, b: int) -> Iterator[list[int]]:
    for i in range(max(a, 0), min(b, TOTAL)):
        yield index_to_digits(i)


# --- evaluation tables ---------------------------------------------------------------


def _eval_mono(m, P, ctx) -> int:
    v = 1
    for c, a in zip(P, m):
        if a:
            v = ctx.mul(v, ctx.pow(c, a))
    return v


def _column_values(basis: SexticBasis, points, ext: FieldCtx) -> np.ndarray:
    """values[i, c] = basis sextic i evaluated at column point c (codes in ext)."""
    mono_vals = np.array([[_eval_mono(m, P, ext) for P in points] for m in basis.monos], dtype=np.int64)
    vf = VecField(ext)
    out = np.zeros((basis.dim, len(points)), dtype=np.int64)
    for i, v in enumerate(basis.vectors):
        acc = np.zeros(len(points), dtype=np.int64)
        for coeff, row in zip(v, mono_vals):
            if coeff:
                acc = vf.add(acc, vf.mul(np.full_like(row, coeff), row))
        out[i] = acc
    return out


def _partial_values(basis: SexticBasis, points, ext: FieldCtx) -> np.ndarray:
    """Columns (P, var): d/dvar of each basis sextic at the points (codes in ext)."""
    ctx = basis.ctx
    out = np.zeros((basis.dim, 3 * len(points)), dtype=np.int64)
    for i, v in enumerate(basis.vectors):
        f = MultiPoly(ctx, 3, {m: c for m, c in zip(basis.monos, v) if c})
        for var in range(3):
            df = f.derive(var)
            df = df if ext is ctx else df.lift(ext)
            for j, P in enumerate(points):
                out[i, 3 * j + var] = df.eval([ext.element(c) for c in P]).c
    return out


JET = ((2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3))


def _jet_values(basis: SexticBasis, points) -> np.ndarray:
    """Columns (P, term): coefficients of the quadratic and cubic terms of each basis
    sextic in the affine chart centred at the rational point P."""
    ctx = basis.ctx
    out = np.zeros((basis.dim, len(JET) * len(points)), dtype=np.int64)
    for i, v in enumerate(basis.vectors):
        f = MultiPoly(ctx, 3, {m: c for m, c in zip(basis.monos, v) if c})
        for j, P in enumerate(points):
            g, _ = _chart_expansion(f, [ctx.element(c) for c in P])
            for t, e in enumerate(JET):
                out[i, len(JET) * j + t] = g.t.get(e, 0)
    return out


def classify_jets(J: np.ndarray, sing: np.ndarray) -> dict[str, np.ndarray]:
    """Count rational singular points by type from their jets over F_3.

    J has shape (rows, points, 7), sing (rows, points).  A double point is a node
    when its quadratic part is non-degenerate (split when the discriminant is a
    square in F_3), a cusp when the quadratic part is a square l^2 and the cubic
    part does not vanish on l = 0; both have delta = 1.  Other double points have
    delta >= 2, points of multiplicity >= 3 have delta >= 3.
    """
    A, B, C = J[..., 0], J[..., 1], J[..., 2]
    disc = (B * B - A * C) % 3
    qzero = (A == 0) & (B == 0) & (C == 0)
    node = disc != 0
    rank1 = ~qzero & ~node
    # kernel direction of l: (-B/(2A), 1) when A != 0, else (1, 0)
    d0 = np.where(A != 0, (A * B) % 3, 1)
    d1 = np.where(A != 0, 1, 0)
    cubic = (J[..., 3] * d0**3 + J[..., 4] * d0**2 * d1 + J[..., 5] * d0 * d1**2 + J[..., 6] * d1**3) % 3
    return {
        "node_split": (sing & node & (disc == 1)).sum(axis=-1),
        "node_nonsplit": (sing & node & (disc == 2)).sum(axis=-1),
        "cusp": (sing & rank1 & (cubic != 0)).sum(axis=-1),
        "double_other": (sing & rank1 & (cubic == 0)).sum(axis=-1),
        "triple": (sing & qzero).sum(axis=-1),
    }


@dataclass
class Group:
    """Evaluation columns over one field: vals[i, c] for basis element i."""

    vals: np.ndarray
    add: np.ndarray
    mul: np.ndarray

    @property
    def neg(self) -> np.ndarray:
        return np.argmax(self.add == 0, axis=1)


@dataclass
class Tables:
    """Column groups.  F_9 and F_27 columns skip the 13 forced points; the d-groups
    hold the three partial derivatives at each point of the matching group."""

    f9: Group
    f27: Group
    d3: Group
    d9: Group
    d27: Group
    jets: Group  # quadratic and cubic jets at the 13 rational points


def _arith(ctx: FieldCtx) -> tuple[np.ndarray, np.ndarray]:
    q = ctx.q
    add = np.array([[ctx.add(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
    mul = np.array([[ctx.mul(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
    return add, mul


def build_tables(basis: SexticBasis) -> Tables:
    F3 = basis.ctx
    base = rational_points(F3)
    baseset = set(base)
    F9, F27 = make_field(3, 2), make_field(3, 3)
    p9 = [P for P in (tuple(x.c for x in Q) for Q in enumerate_proj(F9, 2)) if P not in baseset]
    p27 = [P for P in (tuple(x.c for x in Q) for Q in enumerate_proj(F27, 2)) if P not in baseset]
    a3, a9, a27 = _arith(F3), _arith(F9), _arith(F27)
    return Tables(
        f9=Group(_column_values(basis, p9, F9), *a9),
        f27=Group(_column_values(basis, p27, F27), *a27),
        d3=Group(_partial_values(basis, base, F3), *a3),
        d9=Group(_partial_values(basis, p9, F9), *a9),
        d27=Group(_partial_values(basis, p27, F27), *a27),
        jets=Group(_jet_values(basis, base), *a3),
    )


def _combine(group: Group, digits: Sequence[int]) -> np.ndarray:
    acc = np.zeros(group.vals.shape[1], dtype=np.int64)
    for d, row in zip(digits, group.vals):
        if d:
            acc = group.add[acc, group.mul[d, row]]
    return acc


@dataclass(frozen=True)
class Stats:
    n3: int
    n9: int
    n27: int
    singular3: int  # singular points in P^2(F_3)
    singular9: int  # singular points in P^2(F_9), the F_3 ones included
    singular27: int  # singular points in P^2(F_27), the F_3 ones included
    node_split: int = 0
    node_nonsplit: int = 0
    cusp: int = 0
    double_other: int = 0
    triple: int = 0


def screen(digits: Sequence[int], tables: Tables) -> Stats:
    """Profile of one candidate computed from scratch."""
    z9 = _combine(tables.f9, digits) == 0
    z27 = _combine(tables.f27, digits) == 0
    sing = (_combine(tables.d3, digits).reshape(-1, 3) == 0).all(axis=1)
    s3 = int(sing.sum())
    s9 = int(((_combine(tables.d9, digits).reshape(-1, 3) == 0).all(axis=1) & z9).sum())
    s27 = int(((_combine(tables.d27, digits).reshape(-1, 3) == 0).all(axis=1) & z27).sum())
    J = _combine(tables.jets, digits)
    kinds = {k: int(v[0]) for k, v in classify_jets(J.reshape(1, -1, len(JET)), sing[None, :]).items()}
    return Stats(13, 13 + int(z9.sum()), 13 + int(z27.sum()), s3, s3 + s9, s3 + s27, **kinds)


# --- configuration and screening windows -------------------------------------------------


@lru_cache(maxsize=None)
def default_profiles(genus: int = 5, n1: int = 13) -> tuple[tuple[int, int], ...]:
    return tuple(feasible_count_profiles(3, genus, n1, ks=(2, 3)))


@dataclass
class SearchConfig:
    """Screening parameters.

    A candidate is kept when some (N_2, N_3) allowed for a genus-g curve with
    N_1 = n1 differs from its plane counts by amounts that its singular points
    can explain (see explained).  Every condition is necessary for a curve of
    geometric genus g, so no such curve is screened out.
    The windows and the rational singular range are cheap prefilters.
    """

    genus: int = 5
    n1: int = 13
    delta_max: int = 5
    n9_window: tuple[int, int] | None = None
    n27_window: tuple[int, int] | None = None
    singular_range: tuple[int, int] = (0, 5)
    corrected: bool = True
    threads: int = 1
    checkpoint: str | None = None
    checkpoint_every: int = 64
    shortlist_cap: int = 100000
    low_digits: int = 8

    def __post_init__(self):
        prof = self.profiles
        if self.n9_window is None:
            self.n9_window = (min(a for a, _ in prof) - self.delta_max, max(a for a, _ in prof) + self.delta_max)
        if self.n27_window is None:
            self.n27_window = (min(b for _, b in prof) - self.delta_max, max(b for _, b in prof) + self.delta_max)
        self.n9_window = tuple(self.n9_window)
        self.n27_window = tuple(self.n27_window)
        self.singular_range = tuple(self.singular_range)
        for lo, hi in (self.n9_window, self.n27_window, self.singular_range):
            if lo > hi:
                raise ValueError("windows must be non-empty")
        if self.shortlist_cap < 1:
            raise ValueError("shortlist cap must be at least 1")
        if not 1 <= self.low_digits <= 10:
            raise ValueError("low_digits must be between 1 and 10")

    @property
    def profiles(self) -> tuple[tuple[int, int], ...]:
        return default_profiles(self.genus, self.n1)

    def prefilter(self, n9, n27, s3):
        return (
            (self.n9_window[0] <= n9) & (n9 <= self.n9_window[1])
            & (self.n27_window[0] <= n27) & (n27 <= self.n27_window[1])
            & (self.singular_range[0] <= s3) & (s3 <= self.singular_range[1])
        )

    def explained(self, n9, n27, S9, S27, kinds: dict):
        """Vectorised corrected-profile test.

        An irreducible plane sextic of geometric genus g has delta invariants
        summing to exactly 10 - g = delta_max.  Rational nodes and cusps take
        delta 1 and change the counts by a known amount (a node +1 when its
        tangents split, -1 otherwise; a cusp 0).  Every other singular point P
        has delta_P at least a known lower bound and changes a count defined over
        its field by an amount in [-1, delta_P].  Singular points outside F_9 and
        F_27 form orbits of size >= 4, so they exist only if 4 units of delta are
        left over.
        """
        n9, n27, S9, S27 = (np.asarray(v) for v in (n9, n27, S9, S27))
        ns, nn, cu, w2, w3 = (np.asarray(kinds[k]) for k in ("node_split", "node_nonsplit", "cusp", "double_other", "triple"))
        s3 = ns + nn + cu + w2 + w3
        u9, u27 = S9 - s3, S27 - s3  # non-rational singular points over F_9 and F_27
        lb_rat = 2 * w2 + 3 * w3
        slack = self.delta_max - (ns + nn + cu + lb_rat + u9 + u27)
        loose = (w2 + w3 + u9 + u27) > 0
        balanced = (slack == 0) | loose | (slack >= 4)
        exact2 = ns + nn
        exact3 = ns - nn
        lo2, hi2 = exact2 - (w2 + w3 + u9), exact2 + lb_rat + u9 + slack
        lo3, hi3 = exact3 - (w2 + w3 + u27), exact3 + lb_rat + u27 + slack
        ok = np.zeros(n9.shape, dtype=bool)
        for N2, N3 in self.profiles:
            c2, c3 = N2 - n9, N3 - n27
            ok |= (c2 >= lo2) & (c2 <= hi2) & (c3 >= lo3) & (c3 <= hi3)
        return ok & (slack >= 0) & balanced

    def accepts(self, st: Stats) -> bool:
        if not self.prefilter(st.n9, st.n27, st.singular3):
            return False
        return not self.corrected or bool(self.explained(st.n9, st.n27, st.singular9, st.singular27, asdict(st)))


# --- block engine ----------------------------------------------------------------------

GROUPS = ("f9", "f27", "d3", "d9", "d27", "jets")


class Engine:
    """Screens work units (aligned runs of 3^L candidate indices)."""

    def __init__(self, tables: Tables, config: SearchConfig):
        self.t = tables
        self.cfg = config
        self.L = config.low_digits
        self._low: dict[tuple[int, int], dict] = {}
        self._neg = {name: getattr(tables, name).neg for name in GROUPS}

    def units(self) -> list[tuple[int, int, int, int]]:
        """(start index, length, block j, high rank) for every unit, in index order."""
        out = []
        for j in range(NBASIS):
            n = NBASIS - 1 - j
            L = min(n, self.L)
            size = 3**L
            for h in range(3 ** (n - L)):
                out.append((OFFSETS[j] + h * size, size, j, h))
        return out

    def _low_tables(self, L: int, c: int) -> dict:
        key = (L, c)
        if key not in self._low:
            rows = 3**L
            g = np.array([gray_digits(r + c * rows, L + 1)[:L] for r in range(rows)], dtype=np.int64)
            tabs = {}
            for name in GROUPS:
                grp = getattr(self.t, name)
                lo = np.zeros((rows, grp.vals.shape[1]), dtype=np.int64)
                for i in range(L):
                    lo = grp.add[lo, grp.mul[g[:, i][:, None], grp.vals[NBASIS - 1 - i][None, :]]]
                tabs[name] = lo.astype(np.uint8)
            self._low[key] = tabs
        return self._low[key]

    def _high(self, j: int, n: int, L: int, h: int) -> dict:
        """Minus the contribution of the leading digit and the high Gray digits, per group."""
        g = gray_digits(h * 3**L, n)
        digits = [0] * NBASIS
        digits[j] = 1
        for i in range(L, n):
            digits[NBASIS - 1 - i] = g[i]
        return {name: self._neg[name][_combine(getattr(self.t, name), digits)].astype(np.uint8) for name in GROUPS}

    def run_unit(self, unit, histogram: bool = False):
        start, size, j, h = unit
        n = NBASIS - 1 - j
        L = min(n, self.L)
        c = (h % 3) if n > L else 0
        lo = self._low_tables(L, c)
        hi = self._high(j, n, L, h)
        cfg = self.cfg
        n9 = (lo["f9"] == hi["f9"]).sum(axis=1) + 13
        s3 = (lo["d3"] == hi["d3"]).reshape(size, -1, 3).all(axis=2).sum(axis=1)
        if histogram:
            n27 = (lo["f27"] == hi["f27"]).sum(axis=1) + 13
            return size, [], (n9.astype(np.int64), n27.astype(np.int64), s3.astype(np.int64))
        else:
            rows = np.nonzero(cfg.prefilter(n9, cfg.n27_window[0], s3))[0]
            n27 = (lo["f27"][rows] == hi["f27"]).sum(axis=1) + 13
            keep = (n27 >= cfg.n27_window[0]) & (n27 <= cfg.n27_window[1])
            rows, n27 = rows[keep], n27[keep]
        z9 = lo["f9"][rows] == hi["f9"]
        z27 = lo["f27"][rows] == hi["f27"]
        S9 = s3[rows] + ((lo["d9"][rows] == hi["d9"]).reshape(len(rows), z9.shape[1], 3).all(axis=2) & z9).sum(axis=1)
        S27 = s3[rows] + ((lo["d27"][rows] == hi["d27"]).reshape(len(rows), z27.shape[1], 3).all(axis=2) & z27).sum(axis=1)
        J = (lo["jets"][rows].astype(np.int64) - hi["jets"]) % 3
        sing = (lo["d3"][rows] == hi["d3"]).reshape(len(rows), 13, 3).all(axis=2)
        kinds = classify_jets(J.reshape(len(rows), 13, len(JET)), sing)
        if cfg.corrected:
            keep = cfg.explained(n9[rows], n27, S9, S27, kinds)
            rows, n27, S9, S27 = rows[keep], n27[keep], S9[keep], S27[keep]
            kinds = {k: v[keep] for k, v in kinds.items()}
        found = []
        for i, r in enumerate(rows.tolist()):
            idx = start + r
            st = Stats(13, int(n9[r]), int(n27[i]), int(s3[r]), int(S9[i]), int(S27[i]), **{k: int(v[i]) for k, v in kinds.items()})
            found.append(SearchCandidate(idx, tuple(index_to_digits(idx)), st))
        return size, found, None


# --- checkpoints -----------------------------------------------------------------------


def _checksum(body: str) -> str:
    return hashlib.sha256(body.encode()).hexdigest()[:16]


def write_checkpoint(path: str, next_index: int, processed: int, shortlist: Sequence[SearchCandidate]) -> None:
    lines = [f"version={CHECKPOINT_VERSION}", f"next_index={next_index}", f"processed={processed}"]
    lines += [c.line() for c in shortlist]
    body = "\n".join(lines) + "\n"
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(body + f"checksum={_checksum(body)}\n")
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def read_checkpoint(path: str) -> tuple[int, int, list[tuple[list[int], int, int, int]]]:
    with open(path) as fh:
        text = fh.read()
    head, sep, tail = text.rpartition("checksum=")
    if not sep or tail.strip() != _checksum(head):
        raise CheckpointError("checkpoint digest mismatch; refusing to resume")
    lines = head.splitlines()
    if not lines or lines[0] != f"version={CHECKPOINT_VERSION}":
        raise CheckpointError("unsupported checkpoint version")
    try:
        next_index = int(lines[1].split("=", 1)[1])
        processed = int(lines[2].split("=", 1)[1])
        cands = []
        for line in lines[3:]:
            fields = dict(part.split("=", 1) for part in line.split())
            cands.append(([int(ch) for ch in fields["cand"]], int(fields["n3"]), int(fields["n9"]), int(fields["n27"])))
    except (IndexError, KeyError, ValueError) as exc:
        raise CheckpointError(f"malformed checkpoint: {exc}") from exc
    return next_index, processed, cands


# --- driver ---------------------------------------------------------------------------


_WORKER: Engine | None = None


def _init_worker(tables: Tables, config: SearchConfig) -> None:
    global _WORKER
    _WORKER = Engine(tables, config)


def _work(batch):
    return [_WORKER.run_unit(u)[:2] for u in batch]


@dataclass
class SearchResult:
    shortlist: list[SearchCandidate]
    accepted: int
    processed: int
    total: int
    complete: bool
    elapsed_s: float
    config: dict = field(default_factory=dict)

    def shortlist_bytes(self) -> bytes:
        return "".join(f"{c.index} {c.line()} s3={c.stats.singular3} s9={c.stats.singular9} s27={c.stats.singular27}\n" for c in self.shortlist).encode()

    def to_json(self) -> dict:
        return {
            "processed": self.processed,
            "total_projective": self.total,
            "total_coefficient_vectors": 3**NBASIS,
            "complete": self.complete,
            "accepted": self.accepted,
            "shortlist_size": len(self.shortlist),
            "shortlist": [c.to_json() for c in self.shortlist],
            "config": self.config,
            "note": "screening applies necessary conditions only; no genus is certified",
        }


def run_search(
    config: SearchConfig,
    basis: SexticBasis | None = None,
    resume: bool = False,
    stop_after_units: int | None = None,
    index_range: tuple[int, int] | None = None,
) -> SearchResult:
    t0 = time.perf_counter()
    basis = basis or sextic_space(rational_points())
    tables = build_tables(basis)
    engine = Engine(tables, config)
    units = engine.units()
    if index_range is not None:
        a, b = index_range
        units = [u for u in units if u[0] >= a and u[0] + u[1] <= b]
        if sum(u[1] for u in units) != b - a:
            raise ValueError(f"index range [{a}, {b}) does not align with work units of 3^{config.low_digits}")
    shortlist: list[SearchCandidate] = []
    processed = 0
    accepted = 0
    next_index = units[0][0] if units else 0
    if resume:
        if not config.checkpoint or not os.path.exists(config.checkpoint):
            raise CheckpointError("no checkpoint to resume from")
        next_index, processed, cands = read_checkpoint(config.checkpoint)
        for digits, n3, n9, n27 in cands:
            idx = digits_to_index(digits)
            stats = screen(digits, tables)
            if (stats.n3, stats.n9, stats.n27) != (n3, n9, n27):
                raise CheckpointError(f"checkpoint entry {idx} does not re-screen to the recorded counts")
            shortlist.append(SearchCandidate(idx, tuple(digits), stats))
        accepted = len(shortlist)
        units = [u for u in units if u[0] >= next_index]
    done_units = 0
    batches = [units[i : i + config.checkpoint_every] for i in range(0, len(units), config.checkpoint_every)]

    def absorb(results):
        nonlocal processed, accepted
        for size, found in results:
            processed += size
            accepted += len(found)
            room = config.shortlist_cap - len(shortlist)
            if room > 0:
                shortlist.extend(found[:room])

    stopped = False
    pool = None
    if config.threads > 1:
        pool = ProcessPoolExecutor(config.threads, initializer=_init_worker, initargs=(tables, config))
        results = pool.map(_work, batches)
    else:
        results = ([engine.run_unit(u)[:2] for u in batch] for batch in batches)
    try:
        for batch, res in zip(batches, results):
            absorb(res)
            done_units += len(batch)
            next_index = batch[-1][0] + batch[-1][1]
            if config.checkpoint:
                write_checkpoint(config.checkpoint, next_index, processed, shortlist)
            if stop_after_units is not None and done_units >= stop_after_units:
                stopped = True
                break
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
    shortlist.sort(key=lambda c: c.index)
    total = sum(u[1] for u in engine.units()) if index_range is None else index_range[1] - index_range[0]
    return SearchResult(
        shortlist,
        accepted,
        processed,
        TOTAL,
        not stopped and processed == total,
        time.perf_counter() - t0,
        asdict(config),
    )


def profile_histogram(basis: SexticBasis | None = None, config: SearchConfig | None = None) -> dict:
    """Counts of every (n9, n27, singular) profile over the whole candidate space."""
    basis = basis or sextic_space(rational_points())
    cfg = config or SearchConfig(n9_window=(0, 10**6), n27_window=(0, 10**6), singular_range=(0, 13), corrected=False)
    engine = Engine(build_tables(basis), cfg)
    hist: dict[tuple[int, int, int], int] = {}
    for u in engine.units():
        _, _, (z9, z27, sing) = engine.run_unit(u, histogram=True)
        key = z9 * 10**6 + z27 * 100 + sing
        vals, counts = np.unique(key, return_counts=True)
        for v, c in zip(vals.tolist(), counts.tolist()):
            k3 = (v // 10**6, (v // 100) % 10**4, v % 100)
            hist[k3] = hist.get(k3, 0) + c
    return hist


def model_digits(basis: SexticBasis, f: MultiPoly) -> list[int] | None:
    coords = basis.coordinates(f)
    return None if coords is None else canonical(coords)

