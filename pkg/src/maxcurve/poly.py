"""Polynomials over finite fields and over Z.

``MultiPoly`` is sparse (exponent tuple -> coefficient code), ``UniPolyF`` and
``UniPolyZ`` are dense (constant term first).  Monomials are ordered
graded-lexicographically with the declared variable order, which fixes the
remainder returned by :func:`divide_exact`.
"""

from __future__ import annotations

import itertools
import random
import re
from functools import lru_cache
from typing import Iterable, Sequence

from .gf import FFElement, FieldCtx, FieldError, make_field


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} (at position {pos})")
        self.pos = pos


def _grlex_key(e: tuple[int, ...]):
    return (sum(e), e)


class MultiPoly:
    __slots__ = ("ctx", "nvars", "t")

    def __init__(self, ctx: FieldCtx, nvars: int, terms: dict | None = None):
        self.ctx = ctx
        self.nvars = nvars
        self.t: dict[tuple[int, ...], int] = {}
        if terms:
            for e, c in terms.items():
                if isinstance(c, FFElement):
                    c = ctx(c).c
                elif not 0 <= c < ctx.q:
                    c = c % ctx.p
                if c:
                    self.t[tuple(e)] = c

    # construction ---------------------------------------------------------

    @classmethod
    def const(cls, ctx: FieldCtx, nvars: int, c=1) -> "MultiPoly":
        code = ctx(c).c
        return cls(ctx, nvars, {(0,) * nvars: code} if code else {})

    @classmethod
    def var(cls, ctx: FieldCtx, nvars: int, i: int) -> "MultiPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(ctx, nvars, {tuple(e): 1})

    @classmethod
    def _raw(cls, ctx, nvars, t):
        obj = cls.__new__(cls)
        obj.ctx, obj.nvars, obj.t = ctx, nvars, t
        return obj

    @property
    def terms(self) -> dict[tuple[int, ...], FFElement]:
        return {e: FFElement(self.ctx, c) for e, c in self.t.items()}

    def copy(self) -> "MultiPoly":
        return MultiPoly._raw(self.ctx, self.nvars, dict(self.t))

    # predicates -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.t

    def total_degree(self) -> int:
        return max((sum(e) for e in self.t), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.t), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.t}) <= 1

    def constant_term(self) -> FFElement:
        return FFElement(self.ctx, self.t.get((0,) * self.nvars, 0))

    def leading(self) -> tuple[tuple[int, ...], int]:
        e = max(self.t, key=_grlex_key)
        return e, self.t[e]

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.t == other.t
        if isinstance(other, int):
            return self == MultiPoly.const(self.ctx, self.nvars, other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.t.items()))

    # arithmetic -----------------------------------------------------------

    def _check(self, other: "MultiPoly") -> None:
        if other.nvars != self.nvars:
            raise ValueError("variable count mismatch")
        if other.ctx is not self.ctx:
            raise FieldError("polynomials over different fields")

    def _wrap(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.const(self.ctx, self.nvars, other)

    def __add__(self, other) -> "MultiPoly":
        other = self._wrap(other)
        t = dict(self.t)
        add = self.ctx.add
        for e, c in other.t.items():
            s = add(t.get(e, 0), c)
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        return MultiPoly._raw(self.ctx, self.nvars, t)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        neg = self.ctx.neg
        return MultiPoly._raw(self.ctx, self.nvars, {e: neg(c) for e, c in self.t.items()})

    def __sub__(self, other) -> "MultiPoly":
        return self + (-self._wrap(other))

    def __rsub__(self, other) -> "MultiPoly":
        return self._wrap(other) - self

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            c = self.ctx(other).c
            if not c:
                return MultiPoly(self.ctx, self.nvars)
            mul = self.ctx.mul
            return MultiPoly._raw(self.ctx, self.nvars, {e: mul(v, c) for e, v in self.t.items()})
        self._check(other)
        ctx = self.ctx
        out: dict[tuple[int, ...], int] = {}
        if ctx.k == 1:
            p = ctx.p
            for e1, c1 in self.t.items():
                for e2, c2 in other.t.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    out[e] = (out.get(e, 0) + c1 * c2) % p
        else:
            add, mul = ctx.add, ctx.mul
            for e1, c1 in self.t.items():
                for e2, c2 in other.t.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    out[e] = add(out.get(e, 0), mul(c1, c2))
        return MultiPoly._raw(ctx, self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultiPoly":
        result = MultiPoly.const(self.ctx, self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def mul_monomial(self, e: tuple[int, ...], c: int) -> "MultiPoly":
        mul = self.ctx.mul
        return MultiPoly._raw(
            self.ctx,
            self.nvars,
            {tuple(a + b for a, b in zip(f, e)): mul(v, c) for f, v in self.t.items()},
        )

    # calculus and substitution ------------------------------------------

    def derive(self, i: int) -> "MultiPoly":
        if not 0 <= i < self.nvars:
            raise IndexError("variable index out of range")
        ctx = self.ctx
        out = {}
        for e, c in self.t.items():
            if e[i] and e[i] % ctx.p:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = ctx.mul(c, e[i] % ctx.p)
        return MultiPoly(ctx, self.nvars, out)

    def eval(self, point: Sequence) -> FFElement:
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates, got {len(point)}")
        pts = [x if isinstance(x, FFElement) else self.ctx(x) for x in point]
        target = self.ctx
        for x in pts:
            if x.ctx.k > target.k:
                if target.k != 1:
                    raise FieldError("cannot evaluate over an unrelated extension")
                target = x.ctx
        vals = [target(x).c for x in pts]
        add, mul, pw = target.add, target.mul, target.pow
        acc = 0
        cache: dict[tuple[int, int], int] = {}
        for e, c in self.t.items():
            term = c
            for i, a in enumerate(e):
                if a:
                    key = (i, a)
                    if key not in cache:
                        cache[key] = pw(vals[i], a)
                    term = mul(term, cache[key])
                    if not term:
                        break
            acc = add(acc, term)
        return FFElement(target, acc)

    def __call__(self, *point) -> FFElement:
        return self.eval(point)

    def substitute(self, images: Sequence["MultiPoly"]) -> "MultiPoly":
        """Compose: replace variable i by images[i] (all images share one ring)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        ring = images[0]
        result = MultiPoly(ring.ctx, ring.nvars)
        powers: dict[tuple[int, int], MultiPoly] = {}
        for e, c in self.t.items():
            term = MultiPoly.const(ring.ctx, ring.nvars, ring.ctx(FFElement(self.ctx, c)))
            for i, a in enumerate(e):
                if a:
                    if (i, a) not in powers:
                        powers[(i, a)] = images[i] ** a
                    term = term * powers[(i, a)]
            result = result + term
        return result

    def lift(self, ext: FieldCtx) -> "MultiPoly":
        """Move prime-field coefficients into an extension of the same characteristic."""
        if ext is self.ctx:
            return self
        if self.ctx.k != 1 or ext.p != self.ctx.p:
            raise FieldError("only prime-field polynomials can be lifted")
        return MultiPoly._raw(ext, self.nvars, dict(self.t))

    def homogenize(self, d: int | None = None) -> "MultiPoly":
        """Append a homogenising variable as the last variable."""
        deg = self.total_degree()
        if d is None:
            d = max(deg, 0)
        if deg > d:
            raise ValueError(f"degree {deg} exceeds homogenisation degree {d}")
        return MultiPoly._raw(
            self.ctx, self.nvars + 1, {e + (d - sum(e),): c for e, c in self.t.items()}
        )

    def dehomogenize(self, i: int) -> "MultiPoly":
        """Set variable i to 1 and drop it."""
        out: dict[tuple[int, ...], int] = {}
        add = self.ctx.add
        for e, c in self.t.items():
            f = e[:i] + e[i + 1 :]
            out[f] = add(out.get(f, 0), c)
        return MultiPoly(self.ctx, self.nvars - 1, out)

    def specialize(self, i: int, value) -> "MultiPoly":
        """Substitute a constant for variable i, keeping the variable slot (now absent)."""
        ctx = self.ctx
        v = ctx(value).c
        out: dict[tuple[int, ...], int] = {}
        for e, c in self.t.items():
            f = e[:i] + (0,) + e[i + 1 :]
            out[f] = ctx.add(out.get(f, 0), ctx.mul(c, ctx.pow(v, e[i])))
        return MultiPoly(ctx, self.nvars, out)

    def coefficients_in(self, i: int) -> dict[int, "MultiPoly"]:
        """View as a polynomial in variable i: degree -> coefficient (variable i removed from monomials)."""
        out: dict[int, dict] = {}
        for e, c in self.t.items():
            f = e[:i] + (0,) + e[i + 1 :]
            out.setdefault(e[i], {})[f] = c
        return {d: MultiPoly._raw(self.ctx, self.nvars, t) for d, t in out.items()}

    def to_unipoly(self, i: int) -> "UniPolyF":
        """For a polynomial in variable i alone."""
        coeffs = [0] * (self.degree_in(i) + 1)
        for e, c in self.t.items():
            if any(a for j, a in enumerate(e) if j != i):
                raise ValueError("polynomial involves other variables")
            coeffs[e[i]] = c
        return UniPolyF(self.ctx, coeffs)

    def scale_equal(self, other: "MultiPoly") -> FFElement | None:
        """Return c with self == c*other, or None."""
        if set(self.t) != set(other.t):
            return None
        if not self.t:
            return self.ctx.one
        e0 = next(iter(self.t))
        c = self.ctx.div(self.t[e0], other.t[e0])
        mul = self.ctx.mul
        if all(self.t[e] == mul(c, other.t[e]) for e in self.t):
            return FFElement(self.ctx, c)
        return None

    # printing -----------------------------------------------------------

    def to_str(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = [f"x{i + 1}" for i in range(self.nvars)]
        if not self.t:
            return "0"
        parts = []
        for e in sorted(self.t, key=_grlex_key, reverse=True):
            c = FFElement(self.ctx, self.t[e])
            mono = "*".join(
                names[i] if a == 1 else f"{names[i]}^{a}" for i, a in enumerate(e) if a
            )
            cs = str(c) if self.ctx.k == 1 else f"({c})"
            if not mono:
                parts.append(cs)
            elif c.c == 1:
                parts.append(mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"MultiPoly({self.to_str()})"


# --- parsing ------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str, names: Sequence[str], ctx: FieldCtx):
        self.text = text
        self.names = sorted(names, key=len, reverse=True)
        self.index = {n: i for i, n in enumerate(names)}
        self.ctx = ctx
        self.n = len(names)
        self.toks = self._tokenize()
        self.i = 0

    def _tokenize(self):
        toks = []
        s, i = self.text, 0
        while i < len(s):
            ch = s[i]
            if ch.isspace():
                i += 1
            elif ch.isdigit():
                m = re.match(r"\d+", s[i:])
                toks.append(("num", int(m.group()), i))
                i += m.end()
            elif ch in "+-*^()":
                toks.append((ch, ch, i))
                i += 1
            else:
                for name in self.names:
                    if s.startswith(name, i):
                        toks.append(("var", name, i))
                        i += len(name)
                        break
                else:
                    m = re.match(r"[A-Za-z_][A-Za-z0-9_']*", s[i:])
                    word = m.group() if m else ch
                    raise ParseError(f"unknown variable or symbol {word!r}", i)
        toks.append(("end", None, len(s)))
        return toks

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def parse(self) -> MultiPoly:
        if self.peek()[0] == "end":
            raise ParseError("empty polynomial", 0)
        f = self.expr()
        kind, _, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {kind!r}", pos)
        return f

    def expr(self) -> MultiPoly:
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        f = self.term()
        if sign < 0:
            f = -f
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            g = self.term()
            f = f + g if op == "+" else f - g
        return f

    def term(self) -> MultiPoly:
        f = self.factor()
        while True:
            kind = self.peek()[0]
            if kind == "*":
                self.take()
                f = f * self.factor()
            elif kind in ("num", "var", "("):
                f = f * self.factor()
            else:
                return f

    def factor(self) -> MultiPoly:
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "num":
                raise ParseError("expected exponent after '^'", pos)
            base = base**val
        return base

    def atom(self) -> MultiPoly:
        kind, val, pos = self.take()
        if kind == "num":
            return MultiPoly.const(self.ctx, self.n, val)
        if kind == "var":
            return MultiPoly.var(self.ctx, self.n, self.index[val])
        if kind == "(":
            f = self.expr()
            k2, _, p2 = self.take()
            if k2 != ")":
                raise ParseError("expected ')'", p2)
            return f
        if kind == "end":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected {kind!r}", pos)


def parse_poly(text: str, names: Sequence[str], ctx: FieldCtx) -> MultiPoly:
    return _Parser(text, names, ctx).parse()


# --- multivariate operations -----------------------------------------------------


def divide_exact(f: MultiPoly, g: MultiPoly) -> MultiPoly | None:
    """Quotient f/g, or None when g does not divide f (grlex division by one divisor)."""
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    q, r = divide(f, g)
    return q if r.is_zero() else None


def divide(f: MultiPoly, g: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    f._check(g)
    ctx = f.ctx
    lg, cg = g.leading()
    inv = ctx.inv(cg)
    rest = [(e, c) for e, c in g.t.items() if e != lg]
    work = dict(f.t)
    quot: dict[tuple[int, ...], int] = {}
    rem: dict[tuple[int, ...], int] = {}
    add, mul, neg = ctx.add, ctx.mul, ctx.neg
    # grlex is a total order, so a heap of candidate terms is not needed:
    # pick the current maximum each round.
    while work:
        e = max(work, key=_grlex_key)
        c = work.pop(e)
        if all(a >= b for a, b in zip(e, lg)):
            m = tuple(a - b for a, b in zip(e, lg))
            qc = mul(c, inv)
            quot[m] = add(quot.get(m, 0), qc)
            nq = neg(qc)
            for eg, cgi in rest:
                t = tuple(a + b for a, b in zip(m, eg))
                s = add(work.get(t, 0), mul(nq, cgi))
                if s:
                    work[t] = s
                else:
                    work.pop(t, None)
        else:
            rem[e] = c
    return MultiPoly(ctx, f.nvars, quot), MultiPoly(ctx, f.nvars, rem)


def det_poly_matrix(M: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Determinant by Laplace expansion along rows, memoised on column subsets."""
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("matrix must be square")
    if n == 0:
        raise ValueError("empty matrix")
    memo: dict[tuple[int, int], MultiPoly] = {}
    full = (1 << n) - 1

    def minor(row: int, cols: int) -> MultiPoly:
        if row == n:
            return MultiPoly.const(M[0][0].ctx, M[0][0].nvars, 1)
        key = (row, cols)
        if key in memo:
            return memo[key]
        acc = MultiPoly(M[0][0].ctx, M[0][0].nvars)
        sign_pos = 0
        for j in range(n):
            if cols >> j & 1:
                entry = M[row][j]
                if not entry.is_zero():
                    sub = minor(row + 1, cols & ~(1 << j))
                    term = entry * sub
                    acc = acc - term if sign_pos % 2 else acc + term
                sign_pos += 1
        memo[key] = acc
        return acc

    return minor(0, full)


def pullback(f: MultiPoly, components: Sequence[tuple[MultiPoly, MultiPoly]]) -> tuple[MultiPoly, MultiPoly]:
    """Substitute target variable i -> N_i/D_i into f.

    Clearing convention: the denominator is D = prod_i D_i**deg_i(f), and a
    term c*prod x_i**a_i contributes c*prod N_i**a_i * D_i**(deg_i(f)-a_i).
    A constant f = c gives (c, 1).
    """
    if len(components) != f.nvars:
        raise ValueError("one component per target variable required")
    num0, den0 = components[0]
    ring_ctx, nv = num0.ctx, num0.nvars
    for num, den in components:
        if den.is_zero():
            raise ZeroDivisionError("map has a zero denominator")
    degs = [f.degree_in(i) for i in range(f.nvars)]
    one = MultiPoly.const(ring_ctx, nv, 1)
    npow: dict[tuple[int, int], MultiPoly] = {}
    dpow: dict[tuple[int, int], MultiPoly] = {}

    def cached(store, i, a, base):
        if (i, a) not in store:
            store[(i, a)] = base**a if a else one
        return store[(i, a)]

    N = MultiPoly(ring_ctx, nv)
    for e, c in f.t.items():
        term = MultiPoly.const(ring_ctx, nv, ring_ctx(FFElement(f.ctx, c)))
        for i, a in enumerate(e):
            num, den = components[i]
            term = term * cached(npow, i, a, num) * cached(dpow, i, degs[i] - a, den)
        N = N + term
    D = one
    for i, d in enumerate(degs):
        if d > 0:
            D = D * cached(dpow, i, d, components[i][1])
    return N, D


# --- dense univariate over F_q -----------------------------------------------------


class UniPolyF:
    __slots__ = ("ctx", "c")

    def __init__(self, ctx: FieldCtx, coeffs: Iterable = ()):
        self.ctx = ctx
        c = [x.c if isinstance(x, FFElement) else x for x in coeffs]
        while c and not c[-1]:
            c.pop()
        self.c = c

    @classmethod
    def from_elements(cls, ctx: FieldCtx, elems: Iterable[FFElement]) -> "UniPolyF":
        return cls(ctx, [ctx(x).c for x in elems])

    @property
    def coeffs(self) -> list[FFElement]:
        return [FFElement(self.ctx, x) for x in self.c]

    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def lead(self) -> int:
        return self.c[-1]

    def __eq__(self, other) -> bool:
        return isinstance(other, UniPolyF) and self.c == other.c

    def __repr__(self) -> str:
        return f"UniPolyF({self.ctx.spec}, {[str(x) for x in self.coeffs]})"

    def __add__(self, other: "UniPolyF") -> "UniPolyF":
        add = self.ctx.add
        n = max(len(self.c), len(other.c))
        a = self.c + [0] * (n - len(self.c))
        b = other.c + [0] * (n - len(other.c))
        return UniPolyF(self.ctx, [add(x, y) for x, y in zip(a, b)])

    def __neg__(self) -> "UniPolyF":
        return UniPolyF(self.ctx, [self.ctx.neg(x) for x in self.c])

    def __sub__(self, other: "UniPolyF") -> "UniPolyF":
        return self + (-other)

    def __mul__(self, other) -> "UniPolyF":
        ctx = self.ctx
        if not isinstance(other, UniPolyF):
            s = ctx(other).c
            return UniPolyF(ctx, [ctx.mul(x, s) for x in self.c])
        if not self.c or not other.c:
            return UniPolyF(ctx, [])
        out = [0] * (len(self.c) + len(other.c) - 1)
        if ctx.k == 1:
            p = ctx.p
            for i, x in enumerate(self.c):
                if x:
                    for j, y in enumerate(other.c):
                        out[i + j] += x * y
            return UniPolyF(ctx, [v % p for v in out])
        add, mul = ctx.add, ctx.mul
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(other.c):
                    if y:
                        out[i + j] = add(out[i + j], mul(x, y))
        return UniPolyF(ctx, out)

    def divmod(self, other: "UniPolyF") -> tuple["UniPolyF", "UniPolyF"]:
        if not other.c:
            raise ZeroDivisionError("polynomial division by zero")
        ctx = self.ctx
        r = list(self.c)
        db = len(other.c) - 1
        inv = ctx.inv(other.c[-1])
        q = [0] * max(len(r) - db, 0)
        add, mul, neg = ctx.add, ctx.mul, ctx.neg
        while len(r) - 1 >= db and r:
            c = mul(r[-1], inv)
            s = len(r) - 1 - db
            q[s] = c
            if c:
                nc = neg(c)
                for i, y in enumerate(other.c):
                    if y:
                        r[s + i] = add(r[s + i], mul(nc, y))
            r.pop()
            while r and not r[-1]:
                r.pop()
        return UniPolyF(ctx, q), UniPolyF(ctx, r)

    def __mod__(self, other: "UniPolyF") -> "UniPolyF":
        return self.divmod(other)[1]

    def __floordiv__(self, other: "UniPolyF") -> "UniPolyF":
        return self.divmod(other)[0]

    def monic(self) -> "UniPolyF":
        if not self.c:
            return self
        inv = self.ctx.inv(self.c[-1])
        return UniPolyF(self.ctx, [self.ctx.mul(x, inv) for x in self.c])

    def eval(self, x) -> FFElement:
        ctx = self.ctx
        v = ctx(x).c
        acc = 0
        for a in reversed(self.c):
            acc = ctx.add(ctx.mul(acc, v), a)
        return FFElement(ctx, acc)

    def deriv(self) -> "UniPolyF":
        ctx = self.ctx
        return UniPolyF(ctx, [ctx.mul(c, i % ctx.p) for i, c in enumerate(self.c)][1:])

    def powmod(self, e: int, m: "UniPolyF") -> "UniPolyF":
        result = UniPolyF(self.ctx, [1]) % m
        base = self % m
        while e:
            if e & 1:
                result = (result * base) % m
            e >>= 1
            if e:
                base = (base * base) % m
        return result

    def lift(self, ext: FieldCtx) -> "UniPolyF":
        if ext is self.ctx:
            return self
        if self.ctx.k != 1 or ext.p != self.ctx.p:
            raise FieldError("only prime-field polynomials can be lifted")
        return UniPolyF(ext, list(self.c))


def uni_gcd(f: UniPolyF, g: UniPolyF) -> UniPolyF:
    if f.is_zero() and g.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    a, b = f, g
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def _x(ctx: FieldCtx) -> UniPolyF:
    return UniPolyF(ctx, [0, 1])


def squarefree_part(f: UniPolyF) -> UniPolyF:
    """Product of the distinct irreducible factors of f (char-p aware)."""
    ctx = f.ctx
    f = f.monic()
    if f.degree() <= 0:
        return f
    d = f.deriv()
    if d.is_zero():
        # f(X) = g(X^p); take p-th roots of coefficients
        root = [ctx.pow(c, ctx.q // ctx.p) for c in f.c[:: ctx.p]]
        return squarefree_part(UniPolyF(ctx, root))
    g = uni_gcd(f, d)
    if g.degree() == 0:
        return f
    return _mul_distinct(f // g, squarefree_part(g))


def _mul_distinct(a: UniPolyF, b: UniPolyF) -> UniPolyF:
    if b.degree() <= 0:
        return a.monic()
    g = uni_gcd(a, b)
    return (a * (b // g)).monic()


def distinct_degree(f: UniPolyF) -> dict[int, UniPolyF]:
    """Distinct-degree factorisation of a squarefree monic polynomial."""
    ctx = f.ctx
    f = f.monic()
    out: dict[int, UniPolyF] = {}
    x = _x(ctx)
    h = x % f if f.degree() > 0 else x
    d = 0
    while f.degree() >= 2 * (d + 1):
        d += 1
        h = h.powmod(ctx.q, f)
        g = uni_gcd(f, h - x)
        if g.degree() > 0:
            out[d] = g
            f = f // g
            h = h % f
    if f.degree() > 0:
        out[f.degree()] = f
    return out


def _split_equal_degree(f: UniPolyF, rng: random.Random) -> list[UniPolyF]:
    """Split a monic product of linear factors over its field (odd q)."""
    ctx = f.ctx
    if f.degree() <= 1:
        return [f] if f.degree() == 1 else []
    while True:
        a = rng.randrange(ctx.q)
        h = UniPolyF(ctx, [a, 1]).powmod((ctx.q - 1) // 2, f) - UniPolyF(ctx, [1])
        g = uni_gcd(f, h) if not h.is_zero() else f
        if 0 < g.degree() < f.degree():
            return _split_equal_degree(g, rng) + _split_equal_degree(f // g, rng)


def roots_in(f: UniPolyF, ext: FieldCtx) -> list[FFElement]:
    """Roots of f in ext, with multiplicity, sorted by code."""
    if f.is_zero():
        raise ValueError("the zero polynomial has every element as a root")
    if f.ctx is not ext:
        f = f.lift(ext)
    ctx = ext
    if f.degree() <= 0:
        return []
    x = _x(ctx)
    fm = f.monic()
    if ctx.q <= 2**20 and fm.degree() > 8:
        distinct = [c for c in range(ctx.q) if not fm.eval(FFElement(ctx, c)).c]
    else:
        g = uni_gcd(fm, x.powmod(ctx.q, fm) - x)
        rng = random.Random(0x5EED)
        distinct = sorted(ctx.neg(h.monic().c[0]) for h in _split_equal_degree(g, rng))
    out = []
    for r in distinct:
        lin = UniPolyF(ctx, [ctx.neg(r), 1])
        rest = fm
        while True:
            qq, rr = rest.divmod(lin)
            if not rr.is_zero():
                break
            out.append(FFElement(ctx, r))
            rest = qq
    return out


def resultant_f(f: UniPolyF, g: UniPolyF) -> FFElement:
    """Determinant of the Sylvester matrix, by Gaussian elimination."""
    if f.is_zero() or g.is_zero():
        raise ValueError("resultant needs nonzero polynomials")
    ctx = f.ctx
    S = sylvester(f.c, g.c, 0)
    n = len(S)
    if n == 0:
        return ctx.one
    det = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if S[r][col]), None)
        if piv is None:
            return ctx.zero
        if piv != col:
            S[col], S[piv] = S[piv], S[col]
            det = ctx.neg(det)
        det = ctx.mul(det, S[col][col])
        inv = ctx.inv(S[col][col])
        for r in range(col + 1, n):
            if S[r][col]:
                fac = ctx.neg(ctx.mul(S[r][col], inv))
                S[r] = [ctx.add(a, ctx.mul(fac, b)) for a, b in zip(S[r], S[col])]
    return FFElement(ctx, det)


def sylvester(f: Sequence, g: Sequence, zero) -> list[list]:
    """Sylvester matrix of two dense coefficient lists (constant term first)."""
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    for i in range(n):
        row = [zero] * size
        for j, c in enumerate(reversed(f)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for j, c in enumerate(reversed(g)):
            row[i + j] = c
        rows.append(row)
    return rows


def resultant_in(f: MultiPoly, g: MultiPoly, i: int) -> MultiPoly:
    """Res_{x_i}(f, g) as a polynomial in the remaining variables."""
    fc = f.coefficients_in(i)
    gc = g.coefficients_in(i)
    zero = MultiPoly(f.ctx, f.nvars)
    fl = [fc.get(d, zero) for d in range(f.degree_in(i) + 1)]
    gl = [gc.get(d, zero) for d in range(g.degree_in(i) + 1)]
    if not fl or not gl:
        raise ValueError("resultant with the zero polynomial")
    if len(fl) == 1 and len(gl) == 1:
        return MultiPoly.const(f.ctx, f.nvars, 1)
    return det_poly_matrix(sylvester(fl, gl, zero))


# --- dense univariate over Z -------------------------------------------------------


class UniPolyZ:
    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable[int] = ()):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c = c

    @classmethod
    def from_high(cls, coeffs: Sequence[int]) -> "UniPolyZ":
        """Build from coefficients listed highest degree first."""
        return cls(list(reversed(coeffs)))

    @classmethod
    def product(cls, factors: Iterable["UniPolyZ"]) -> "UniPolyZ":
        out = cls([1])
        for f in factors:
            out = out * f
        return out

    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def is_monic(self) -> bool:
        return bool(self.c) and self.c[-1] == 1

    def high(self) -> list[int]:
        return list(reversed(self.c))

    def __eq__(self, other) -> bool:
        return isinstance(other, UniPolyZ) and self.c == other.c

    def __hash__(self) -> int:
        return hash(tuple(self.c))

    def __add__(self, other: "UniPolyZ") -> "UniPolyZ":
        n = max(len(self.c), len(other.c))
        return UniPolyZ(
            [(self.c[i] if i < len(self.c) else 0) + (other.c[i] if i < len(other.c) else 0) for i in range(n)]
        )

    def __neg__(self) -> "UniPolyZ":
        return UniPolyZ([-x for x in self.c])

    def __sub__(self, other: "UniPolyZ") -> "UniPolyZ":
        return self + (-other)

    def __mul__(self, other) -> "UniPolyZ":
        if isinstance(other, int):
            return UniPolyZ([x * other for x in self.c])
        if not self.c or not other.c:
            return UniPolyZ()
        out = [0] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(other.c):
                    out[i + j] += x * y
        return UniPolyZ(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "UniPolyZ":
        out = UniPolyZ([1])
        for _ in range(n):
            out = out * self
        return out

    def divmod_monic(self, other: "UniPolyZ") -> tuple["UniPolyZ", "UniPolyZ"]:
        if not other.c:
            raise ZeroDivisionError("division by zero polynomial")
        lead = other.c[-1]
        r = list(self.c)
        db = len(other.c) - 1
        q = [0] * max(len(r) - db, 0)
        while len(r) - 1 >= db and r:
            top = r[-1]
            if top % lead:
                return UniPolyZ(q), UniPolyZ(r)
            c = top // lead
            s = len(r) - 1 - db
            q[s] = c
            for i, y in enumerate(other.c):
                r[s + i] -= c * y
            while r and r[-1] == 0:
                r.pop()
        return UniPolyZ(q), UniPolyZ(r)

    def exact_div(self, other: "UniPolyZ") -> "UniPolyZ | None":
        q, r = self.divmod_monic(other)
        return q if r.is_zero() else None

    def eval(self, x: int) -> int:
        acc = 0
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def __repr__(self) -> str:
        return f"UniPolyZ({self.to_str()})"

    def to_str(self, var: str = "T") -> str:
        if not self.c:
            return "0"
        parts = []
        for i in range(len(self.c) - 1, -1, -1):
            a = self.c[i]
            if not a:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            mag = abs(a)
            body = str(mag) if (mag != 1 or not mono) else ""
            body = body + ("*" if body and mono else "") + mono
            sign = "-" if a < 0 else "+"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s


def bareiss_det(M: Sequence[Sequence[int]]) -> int:
    """Fraction-free integer determinant."""
    A = [list(row) for row in M]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if A[r][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def resultant_z(f: UniPolyZ, g: UniPolyZ) -> int:
    if f.is_zero() or g.is_zero():
        raise ValueError("resultant needs nonzero polynomials")
    S = sylvester(f.c, g.c, 0)
    return bareiss_det(S) if S else 1


# --- field embeddings ----------------------------------------------------------------


@lru_cache(maxsize=None)
def _embedding_root(p: int, k: int, n: int) -> int:
    small, big = make_field(p, k), make_field(p, n)
    mod = UniPolyF(make_field(p, 1), list(small.modulus))
    return min(r.c for r in roots_in(mod, big))


class Embedding:
    """The embedding F_{p^k} -> F_{p^n} (k | n) sending t to the smallest-code root of the modulus."""

    def __init__(self, small: FieldCtx, big: FieldCtx):
        if small.p != big.p or big.k % small.k:
            raise FieldError(f"F_{small.spec} does not embed in F_{big.spec}")
        self.small, self.big = small, big
        self.root = 0 if small.k == 1 else _embedding_root(small.p, small.k, big.k)
        self._table = None
        self._back = None
        if small.q <= 2**16:
            self._table = [self._compute(c) for c in range(small.q)]

    def _compute(self, c: int) -> int:
        if self.small.k == 1:
            return c
        big = self.big
        acc = 0
        pw = 1
        for d in self.small.digits(c):
            if d:
                acc = big.add(acc, big.mul(d, pw))
            pw = big.mul(pw, self.root)
        return acc

    def __call__(self, x) -> FFElement:
        c = x.c if isinstance(x, FFElement) else int(x)
        return FFElement(self.big, self._table[c] if self._table is not None else self._compute(c))

    def code(self, c: int) -> int:
        return self._table[c] if self._table is not None else self._compute(c)

    def preimage(self, x) -> FFElement | None:
        """Inverse on the image; None for elements outside the subfield."""
        c = x.c if isinstance(x, FFElement) else int(x)
        if self._back is None:
            if self._table is None:
                raise FieldError("preimage needs a tabulated embedding")
            self._back = {v: i for i, v in enumerate(self._table)}
        i = self._back.get(c)
        return None if i is None else FFElement(self.small, i)


def embedding(small: FieldCtx, big: FieldCtx) -> Embedding:
    return _embedding_cached(small.p, small.k, big.k)


@lru_cache(maxsize=None)
def _embedding_cached(p: int, k: int, n: int) -> Embedding:
    return Embedding(make_field(p, k), make_field(p, n))


def definition_degree(x: FFElement) -> int:
    """Degree over the prime field of the smallest subfield containing x."""
    ctx = x.ctx
    for d in range(1, ctx.k + 1):
        if ctx.k % d == 0 and ctx.pow(x.c, ctx.p**d) == x.c:
            return d
    return ctx.k


def embed_poly(f: MultiPoly, big: FieldCtx) -> MultiPoly:
    if f.ctx is big:
        return f
    emb = embedding(f.ctx, big)
    return MultiPoly._raw(big, f.nvars, {e: emb.code(c) for e, c in f.t.items()})
