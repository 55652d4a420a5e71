"""Arithmetic in F_p and F_{p^k}.

Elements are stored as integer codes: the coefficient list of the
polynomial representative (constant term first) read as a base-p number.
Scalar code arithmetic lives on :class:`FieldCtx`; :class:`FFElement` is a
thin operator-overloading wrapper, and :class:`VecField` does the same
arithmetic on numpy arrays of codes for the counting kernels.
"""

from __future__ import annotations

import functools
import itertools
from typing import Iterator, Sequence

import numpy as np

# fields up to this size get log/exp/Zech tables
TABLE_LIMIT = 3**9


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# --- dense polynomials over F_p as int lists (constant term first) -------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % p for c in out])


def _pmod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        if c:
            for i, mi in enumerate(m):
                a[shift + i] = (a[shift + i] - c * mi) % p
        a.pop()
        _trim(a)
    return _trim(a)


def _pgcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def _ppowmod(base: Sequence[int], e: int, m: Sequence[int], p: int) -> list[int]:
    result = [1]
    b = _pmod(base, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, b, p), m, p)
        b = _pmod(_pmul(b, b, p), m, p)
        e >>= 1
    return result


def is_irreducible_fp(f: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p."""
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    x = [0, 1]

    def frob_power(j: int) -> list[int]:
        return _ppowmod(x, p**j, f, p)

    xpk = frob_power(k)
    if _trim([(a - b) % p for a, b in itertools.zip_longest(xpk, x, fillvalue=0)]):
        return False
    for r in prime_factors(k):
        h = frob_power(k // r)
        diff = _trim([(a - b) % p for a, b in itertools.zip_longest(h, x, fillvalue=0)])
        if len(_pgcd(f, diff, p)) > 1:
            return False
    return True


def canonical_modulus(p: int, k: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree k, ordering coefficient lists as base-p integers."""
    if k == 1:
        return (0, 1)
    for low in range(p**k):
        coeffs = [(low // p**i) % p for i in range(k)] + [1]
        if coeffs[0] == 0:
            continue
        if is_irreducible_fp(coeffs, p):
            return tuple(coeffs)
    raise FieldError(f"no irreducible of degree {k} over F_{p}")  # unreachable


class FieldCtx:
    """The field F_{p^k} = F_p[t]/(modulus). Build through :func:`make_field`."""

    __slots__ = ("p", "k", "modulus", "q", "_exp", "_log", "_zech", "_neg", "_vec", "_sqrt")

    def __init__(self, p: int, k: int, modulus: tuple[int, ...]):
        self.p = p
        self.k = k
        self.modulus = modulus
        self.q = p**k
        self._exp = None
        self._log = None
        self._zech = None
        self._neg = None
        self._vec = None
        self._sqrt = None
        if k > 1 and self.q <= TABLE_LIMIT:
            self._build_tables()

    def __repr__(self) -> str:
        return f"FieldCtx({self.p}^{self.k})"

    def __reduce__(self):
        return (make_field, (self.p, self.k))

    @property
    def spec(self) -> str:
        return f"{self.p}^{self.k}"

    # --- digit-level fallback -------------------------------------------------

    def digits(self, c: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.k):
            out.append(c % p)
            c //= p
        return out

    def from_digits(self, d: Sequence[int]) -> int:
        c = 0
        for x in reversed(d):
            c = c * self.p + (x % self.p)
        return c

    def _mul_digits(self, a: int, b: int) -> int:
        prod = _pmul(self.digits(a), self.digits(b), self.p)
        return self.from_digits(_pmod(prod, self.modulus, self.p))

    def _build_tables(self) -> None:
        q, p = self.q, self.p
        g = self._find_primitive()
        exp = [0] * (q - 1)
        log = [-1] * q
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = self._mul_digits(x, g)
        neg = [self.from_digits([(-d) % p for d in self.digits(c)]) for c in range(q)]
        zech = [-1] * (q - 1)
        for d in range(q - 1):
            s = self._add_digits(1, exp[d])
            zech[d] = log[s]
        self._exp, self._log, self._zech, self._neg = exp, log, zech, neg

    def _add_digits(self, a: int, b: int) -> int:
        p = self.p
        c, mult = 0, 1
        while a or b:
            c += ((a % p + b % p) % p) * mult
            a //= p
            b //= p
            mult *= p
        return c

    def _find_primitive(self) -> int:
        q = self.q
        facs = prime_factors(q - 1)
        for g in range(2, q):
            if all(self._pow_digits(g, (q - 1) // r) != 1 for r in facs):
                return g
        raise FieldError("no primitive element")  # unreachable

    def _pow_digits(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._mul_digits(r, a)
            a = self._mul_digits(a, a)
            e >>= 1
        return r

    # --- code arithmetic ------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if not a:
            return b
        if not b:
            return a
        if self._log is not None:
            la, lb = self._log[a], self._log[b]
            z = self._zech[(lb - la) % (self.q - 1)]
            if z < 0:
                return 0
            return self._exp[(la + z) % (self.q - 1)]
        return self._add_digits(a, b)

    def neg(self, a: int) -> int:
        if self.k == 1:
            return -a % self.p
        if self._neg is not None:
            return self._neg[a]
        return self.from_digits([-d for d in self.digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        if not a or not b:
            return 0
        if self._log is not None:
            return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return self._mul_digits(a, b)

    def inv(self, a: int) -> int:
        if not a:
            raise ZeroDivisionError(f"inverse of zero in F_{self.spec}")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        if self._log is not None:
            return self._exp[(-self._log[a]) % (self.q - 1)]
        return self._pow_digits(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if e == 0:
            return 1
        if not a:
            return 0
        if self.k == 1:
            return pow(a, e, self.p)
        if self._log is not None:
            return self._exp[(self._log[a] * e) % (self.q - 1)]
        return self._pow_digits(a, e)

    def from_int(self, n: int) -> int:
        return n % self.p

    def sqrt_codes(self, a: int) -> list[int]:
        """All square roots of a (Tonelli-Shanks)."""
        if a == 0:
            return [0]
        q = self.q
        if self.pow(a, (q - 1) // 2) != 1:
            return []
        if q % 4 == 3:
            r = self.pow(a, (q + 1) // 4)
        else:
            s, t = 0, q - 1
            while t % 2 == 0:
                s += 1
                t //= 2
            z = next(c for c in range(2, q) if self.pow(c, (q - 1) // 2) != 1)
            m, c, tt, r = s, self.pow(z, t), self.pow(a, t), self.pow(a, (t + 1) // 2)
            while tt != 1:
                i, t2 = 0, tt
                while t2 != 1:
                    t2 = self.mul(t2, t2)
                    i += 1
                b = self.pow(c, 1 << (m - i - 1))
                m, c = i, self.mul(b, b)
                tt, r = self.mul(tt, c), self.mul(r, b)
        return sorted({r, self.neg(r)})

    # --- elements -------------------------------------------------------------

    def __call__(self, value) -> "FFElement":
        """Coerce an int (mod p) or a coefficient list into this field."""
        if isinstance(value, FFElement):
            if value.ctx is self:
                return value
            if value.ctx.k == 1 and value.ctx.p == self.p:
                return FFElement(self, value.c)
            raise FieldError(f"cannot move {value!r} into F_{self.spec}")
        if isinstance(value, (int, np.integer)):
            return FFElement(self, int(value) % self.p)
        coeffs = list(value)
        if len(coeffs) > self.k:
            raise FieldError("too many coefficients")
        return FFElement(self, self.from_digits(coeffs))

    def element(self, code: int) -> "FFElement":
        return FFElement(self, code)

    @property
    def zero(self) -> "FFElement":
        return FFElement(self, 0)

    @property
    def one(self) -> "FFElement":
        return FFElement(self, 1)

    @property
    def gen(self) -> "FFElement":
        """The class of t (equals p mod p for prime fields, i.e. 0)."""
        return FFElement(self, self.p if self.k > 1 else 0)

    def vec(self) -> "VecField":
        if self._vec is None:
            self._vec = VecField(self)
        return self._vec


@functools.lru_cache(maxsize=None)
def make_field(p: int, k: int = 1) -> FieldCtx:
    if p % 2 == 0 or not is_prime(p):
        raise FieldError(f"characteristic must be an odd prime, got {p}")
    if not 1 <= k <= 32:
        raise FieldError(f"extension degree must be in [1, 32], got {k}")
    return FieldCtx(p, k, canonical_modulus(p, k))


def parse_field_spec(text: str) -> FieldCtx:
    """Parse "p^k" (or "p") into a field."""
    text = text.strip()
    try:
        if "^" in text:
            ps, ks = text.split("^", 1)
            return make_field(int(ps), int(ks))
        return make_field(int(text), 1)
    except ValueError as exc:
        if isinstance(exc, FieldError):
            raise
        raise FieldError(f"bad field spec {text!r}") from exc


class FFElement:
    __slots__ = ("ctx", "c")

    def __init__(self, ctx: FieldCtx, c: int):
        self.ctx = ctx
        self.c = c

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(self.ctx.digits(self.c))

    def _coerce(self, other) -> int:
        if isinstance(other, FFElement):
            if other.ctx is not self.ctx:
                if other.ctx.k == 1 and other.ctx.p == self.ctx.p:
                    return other.c
                if self.ctx.k == 1 and other.ctx.p == self.ctx.p:
                    raise FieldError("mixed fields; lift the prime-field operand explicitly")
                raise FieldError(f"mixed fields {self.ctx} and {other.ctx}")
            return other.c
        if isinstance(other, (int, np.integer)):
            return int(other) % self.ctx.p
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FFElement(self.ctx, self.ctx.add(self.c, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FFElement(self.ctx, self.ctx.sub(self.c, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FFElement(self.ctx, self.ctx.sub(b, self.c))

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FFElement(self.ctx, self.ctx.mul(self.c, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FFElement(self.ctx, self.ctx.div(self.c, b))

    def __rtruediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FFElement(self.ctx, self.ctx.div(b, self.c))

    def __neg__(self):
        return FFElement(self.ctx, self.ctx.neg(self.c))

    def __pow__(self, e: int):
        return FFElement(self.ctx, self.ctx.pow(self.c, e))

    def inverse(self) -> "FFElement":
        return FFElement(self.ctx, self.ctx.inv(self.c))

    def __bool__(self) -> bool:
        return self.c != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, FFElement):
            return self.ctx.p == other.ctx.p and self.c == other.c and (
                self.ctx is other.ctx or self.ctx.k == 1 or other.ctx.k == 1
            )
        if isinstance(other, (int, np.integer)):
            return self.c == int(other) % self.ctx.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ctx.p, self.c))

    def __repr__(self) -> str:
        return f"FFElement({self.ctx.spec}, {self})"

    def __str__(self) -> str:
        if self.ctx.k == 1:
            return str(self.c)
        terms = []
        for i, d in enumerate(self.coeffs):
            if d:
                mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
                coef = "" if d == 1 and i else str(d)
                terms.append(coef + ("*" if coef and mono else "") + mono)
        return "+".join(reversed(terms)) or "0"


def arith(a: FFElement, b: FFElement | None, op: str) -> FFElement:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    raise ValueError(f"unknown op {op!r}")


def frobenius(a: FFElement) -> FFElement:
    return a ** a.ctx.p


def sqrt(a: FFElement) -> set[FFElement]:
    return {FFElement(a.ctx, c) for c in a.ctx.sqrt_codes(a.c)}


def enumerate_field(ctx: FieldCtx) -> Iterator[FFElement]:
    for c in range(ctx.q):
        yield FFElement(ctx, c)


def proj_size(q: int, n: int) -> int:
    return (q ** (n + 1) - 1) // (q - 1)


def enumerate_proj(ctx: FieldCtx, n: int) -> Iterator[tuple[FFElement, ...]]:
    """Points of P^n(F_q), first nonzero coordinate 1, chart x_0 = 1 first."""
    q = ctx.q
    zero, one = FFElement(ctx, 0), FFElement(ctx, 1)
    for lead in range(n + 1):
        free = n - lead
        for rest in itertools.product(range(q), repeat=free):
            yield (zero,) * lead + (one,) + tuple(FFElement(ctx, c) for c in rest)


def proj_codes(ctx: FieldCtx, n: int) -> np.ndarray:
    """Same order as :func:`enumerate_proj`, as an (N, n+1) array of codes."""
    q = ctx.q
    blocks = []
    for lead in range(n + 1):
        free = n - lead
        m = q**free
        idx = np.arange(m, dtype=np.int64)
        block = np.zeros((m, n + 1), dtype=np.int64)
        block[:, lead] = 1
        for j in range(free):
            # last coordinate varies fastest, matching itertools.product
            block[:, n - j] = (idx // q**j) % q
        blocks.append(block)
    return np.concatenate(blocks, axis=0)


class VecField:
    """Vectorised code arithmetic over one field (numpy int64 arrays)."""

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        self.q = q = ctx.q
        self.p = ctx.p
        if ctx.k == 1:
            self.prime = True
            return
        self.prime = False
        if ctx._log is None:
            raise FieldError(f"F_{ctx.spec} is too large for vectorised arithmetic")
        self.exp = np.array(ctx._exp + [ctx._exp[0]], dtype=np.int64)
        self.log = np.array(ctx._log, dtype=np.int64)
        self.zech = np.array(ctx._zech, dtype=np.int64)
        self.negtab = np.array(ctx._neg, dtype=np.int64)
        if q <= 729:
            codes = np.arange(q)
            self.addtab = np.array(
                [[ctx.add(a, b) for b in range(q)] for a in range(q)], dtype=np.int64
            ).ravel()
            self.multab = np.array(
                [[ctx.mul(a, b) for b in range(q)] for a in range(q)], dtype=np.int64
            ).ravel()
            del codes
        else:
            self.addtab = self.multab = None
        roots = np.full(q, -1, dtype=np.int64)
        for c in range(q):
            r = ctx.sqrt_codes(c)
            if r:
                roots[c] = r[0]
        self.sqrttab = roots

    def sqrt_table(self) -> np.ndarray:
        if self.prime:
            ctx = self.ctx
            return np.array(
                [(ctx.sqrt_codes(c) or [-1])[0] for c in range(ctx.q)], dtype=np.int64
            )
        return self.sqrttab

    def const(self, c: int, shape) -> np.ndarray:
        return np.full(shape, c, dtype=np.int64)

    def add(self, a, b):
        if self.prime:
            return (a + b) % self.p
        if self.addtab is not None:
            return self.addtab[a * self.q + b]
        a = np.asarray(a)
        b = np.asarray(b)
        m = self.q - 1
        la, lb = self.log[a], self.log[b]
        z = self.zech[(lb - la) % m]
        res = np.where(z < 0, 0, self.exp[(la + z) % m])
        res = np.where(a == 0, b, res)
        return np.where(b == 0, a, res)

    def neg(self, a):
        if self.prime:
            return (-a) % self.p
        return self.negtab[a]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.prime:
            return (a * b) % self.p
        if self.multab is not None:
            return self.multab[a * self.q + b]
        a = np.asarray(a)
        b = np.asarray(b)
        m = self.q - 1
        res = self.exp[(self.log[a] + self.log[b]) % m]
        return np.where((a == 0) | (b == 0), 0, res)

    def inv(self, a):
        """Inverse; zero maps to zero (callers mask)."""
        if self.prime:
            return np.array([0] + [pow(c, self.p - 2, self.p) for c in range(1, self.p)])[a]
        m = self.q - 1
        return np.where(a == 0, 0, self.exp[(-self.log[a]) % m])

    def scal(self, c: int, a):
        """Multiply array a by the scalar code c."""
        if c == 1:
            return a
        if c == 0:
            return np.zeros_like(a)
        if self.prime:
            return (a * c) % self.p
        if self.multab is not None:
            return self.multab[c * self.q + a]
        m = self.q - 1
        res = self.exp[(self.log[a] + self.ctx._log[c]) % m]
        return np.where(a == 0, 0, res)

    def pow(self, a, e: int):
        if e == 0:
            return np.ones_like(a)
        if self.prime:
            return np.array([pow(c, e, self.p) for c in range(self.p)])[a]
        m = self.q - 1
        res = self.exp[(self.log[a] * e) % m]
        return np.where(a == 0, 0, res)
