"""Integer-side Weil machinery.

Convention: P(T) = prod (T - alpha_i), monic of degree 2g with P(0) = q^g and
N_k = q^k + 1 - sum alpha_i^k.  All arithmetic is exact; a division in
Newton's identities that does not come out even is an error, never rounded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gf import is_prime
from .poly import UniPolyZ, resultant_z


class WeilError(ValueError):
    pass


@dataclass(frozen=True)
class LPolynomial:
    coeffs: UniPolyZ
    q: int
    g: int

    def __post_init__(self):
        P = self.coeffs
        if P.degree() != 2 * self.g or not P.is_monic():
            raise WeilError("L-polynomial must be monic of degree 2g")
        if P.c[0] != self.q**self.g:
            raise WeilError(f"P(0) = {P.c[0]}, expected q^g = {self.q ** self.g}")
        if not satisfies_functional_equation(P, self.q):
            raise WeilError("functional equation fails")

    def __str__(self) -> str:
        return self.coeffs.to_str()

    def to_json(self) -> dict:
        return {"q": self.q, "g": self.g, "coeffs_high_first": self.coeffs.high()}


@dataclass(frozen=True)
class IsogenyFactor:
    factor: UniPolyZ
    multiplicity: int

    def to_json(self) -> dict:
        return {"factor": self.factor.to_str(), "multiplicity": self.multiplicity}


def satisfies_functional_equation(P: UniPolyZ, q: int) -> bool:
    """T^{2g} P(q/T) = q^g P(T), i.e. a_{2g-i} = q^{g-i} a_i on the low-first coefficients."""
    n = P.degree()
    if n % 2:
        return False
    g = n // 2
    a = P.c
    return all(a[i] == q ** (g - i) * a[2 * g - i] for i in range(g + 1))


def _prime_of(q: int) -> int:
    for p in range(2, q + 1):
        if q % p == 0:
            r = q
            while r % p == 0:
                r //= p
            if r != 1:
                raise WeilError(f"{q} is not a prime power")
            return p
    raise WeilError(f"{q} is not a prime power")


def weil_interval(q: int, g: int) -> tuple[int, int]:
    m = math.isqrt(4 * g * g * q)  # floor(2 g sqrt q)
    return max(0, q + 1 - m), q + 1 + m


def power_sums(P: UniPolyZ, count: int) -> list[int]:
    """s_1..s_count of the roots of the monic P (Newton's recurrence)."""
    n = P.degree()
    hi = P.high()  # 1, c_1, ..., c_n with P = T^n + c_1 T^{n-1} + ...
    c = hi + [0] * max(0, count + 1 - len(hi))
    s = [0] * (count + 1)
    for k in range(1, count + 1):
        acc = -k * c[k] if k <= n else 0
        for i in range(1, min(k, n + 1)):
            acc -= c[i] * s[k - i]
        s[k] = acc
    return s[1:]


def poly_from_power_sums(s: list[int], n: int) -> UniPolyZ:
    """Monic degree-n polynomial with the given first n power sums (exact)."""
    e = [1] + [0] * n
    for k in range(1, n + 1):
        acc = 0
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * s[i - 1]
        if acc % k:
            raise WeilError(f"Newton identity at k={k} is not integral ({acc}/{k})")
        e[k] = acc // k
    high = [(-1) ** k * e[k] for k in range(n + 1)]
    return UniPolyZ.from_high(high)


def lpoly_from_counts(counts: list[int], q: int, g: int) -> LPolynomial:
    if len(counts) != g:
        raise WeilError(f"need exactly g = {g} counts, got {len(counts)}")
    if g == 0:
        return LPolynomial(UniPolyZ([1]), q, 0)
    for k, N in enumerate(counts, start=1):
        lo, hi = weil_interval(q**k, g)
        if not lo <= N <= hi:
            raise WeilError(f"N_{k} = {N} outside the Weil interval [{lo}, {hi}]")
    s = [q**k + 1 - N for k, N in enumerate(counts, start=1)]
    e = [1] + [0] * g
    for k in range(1, g + 1):
        acc = sum((-1) ** (i - 1) * e[k - i] * s[i - 1] for i in range(1, k + 1))
        if acc % k:
            raise WeilError(f"counts give a non-integral coefficient at k={k}")
        e[k] = acc // k
    high = [(-1) ** k * e[k] for k in range(g + 1)]
    for i in range(g + 1, 2 * g + 1):
        high.append(q ** (i - g) * high[2 * g - i])
    return LPolynomial(UniPolyZ.from_high(high), q, g)


def counts_from_lpoly(L: LPolynomial, k: int) -> int:
    if k < 1:
        raise ValueError("k must be positive")
    if L.g == 0:
        return L.q**k + 1
    return L.q**k + 1 - power_sums(L.coeffs, k)[k - 1]


def frobenius_power_charpoly(L: LPolynomial | UniPolyZ, m: int) -> UniPolyZ:
    """Monic polynomial whose roots are the m-th powers of the roots of L."""
    P = L.coeffs if isinstance(L, LPolynomial) else L
    if m < 1:
        raise ValueError("m must be positive")
    n = P.degree()
    s = power_sums(P, m * n)
    return poly_from_power_sums([s[m * j - 1] for j in range(1, n + 1)], n)


def real_weil(factor: UniPolyZ, q: int) -> UniPolyZ:
    """h of degree d with factor(T) = T^d h(T + q/T): minimal polynomial data of F + V."""
    n = factor.degree()
    if n % 2 or not factor.is_monic():
        raise WeilError("a Weil factor is monic of even degree")
    d = n // 2
    P = factor.high()
    # factor = sum_j h_j T^j (T^2 + q)^(d-j); solve top-down for h_j
    h = []
    residual = list(P)
    for j in range(d + 1):
        hj = residual[j]
        h.append(hj)
        # subtract hj * T^j (T^2+q)^(d-j), written highest power first
        block = [math.comb(d - j, i) * q**i for i in range(d - j + 1)]
        for i, b in enumerate(block):
            residual[j + 2 * i] -= hj * b
    if any(residual):
        raise WeilError(f"{factor.to_str()} is not of the form T^d h(T + q/T)")
    H = UniPolyZ.from_high(h)
    bound = 2 * math.sqrt(q)
    roots = np.roots(np.array(h, dtype=float)) if d else np.array([])
    if any(abs(r.imag) > 1e-6 or abs(r.real) > bound + 1e-6 for r in roots):
        raise WeilError(f"{factor.to_str()} has roots off the circle |z| = sqrt(q)")
    return H


def is_weil_polynomial(P: UniPolyZ, q: int) -> bool:
    try:
        real_weil(P, q)
    except WeilError:
        return False
    return True


def cover_degree_bound(e_factor: UniPolyZ, complement: UniPolyZ, q: int) -> int:
    """Signed resultant of the real Weil polynomials; 0 means the bound is vacuous."""
    return resultant_z(real_weil(e_factor, q), real_weil(complement, q))


def is_supersingular(factor: UniPolyZ, q: int) -> bool:
    if factor.degree() != 2 or not factor.is_monic():
        raise WeilError("expected an elliptic factor T^2 + aT + q")
    p = _prime_of(q)
    if p == 2:
        raise WeilError("characteristic 2 is out of scope")
    if factor.c[0] != q:
        raise WeilError("constant term must equal q")
    return factor.c[1] % p == 0


def divides(sub: UniPolyZ, L: UniPolyZ) -> bool:
    q, r = L.divmod_monic(sub)
    return r.is_zero()


def _weil_form(h: list[int], q: int) -> UniPolyZ:
    """T^d h(T + q/T) for h given highest-first."""
    d = len(h) - 1
    out = [0] * (2 * d + 1)
    for j, hj in enumerate(h):
        for i in range(d - j + 1):
            out[j + 2 * i] += hj * math.comb(d - j, i) * q**i
    return UniPolyZ.from_high(out)


def _candidates(d: int, q: int):
    """Monic integer real-Weil candidates of degree d within coefficient bounds."""
    B = 2 * math.sqrt(q)
    bounds = [math.floor(math.comb(d, j) * B**j + 1e-9) for j in range(1, d + 1)]
    ranges = [range(-b, b + 1) for b in bounds]

    def rec(prefix, j):
        if j == d:
            yield [1] + prefix
            return
        for c in ranges[j]:
            yield from rec(prefix + [c], j + 1)

    yield from rec([], 0)


def weil_factorization(L: LPolynomial | UniPolyZ, q: int | None = None, max_search_degree: int = 3):
    """Split L into monic Weil factors by bounded exhaustive trial division.

    Factors of degree 2d for d <= max_search_degree are found by enumerating
    real-Weil candidates; whatever remains is accepted as one factor if it is
    itself a Weil polynomial.  Returns (factors, diagnostic).
    """
    if isinstance(L, LPolynomial):
        P, q = L.coeffs, L.q
    else:
        P = L
    if q is None:
        raise ValueError("q is required")
    found: list[IsogenyFactor] = []
    rest = P
    for d in range(1, max_search_degree + 1):
        if rest.degree() < 2 * d:
            break
        for h in _candidates(d, q):
            cand = _weil_form(h, q)
            mult = 0
            while rest.degree() >= cand.degree():
                qt, r = rest.divmod_monic(cand)
                if not r.is_zero():
                    break
                rest = qt
                mult += 1
            if mult:
                found.append(IsogenyFactor(cand, mult))
            if rest.degree() < 2 * d:
                break
    diagnostic = ""
    if rest.degree() > 0:
        if is_weil_polynomial(rest, q):
            found.append(IsogenyFactor(rest, 1))
        else:
            diagnostic = f"cofactor {rest.to_str()} is not a Weil polynomial; returned unfactored"
            return [IsogenyFactor(P, 1)], diagnostic
    found.sort(key=lambda f: (f.factor.degree(), f.factor.high()))
    return found, diagnostic


def expand(factors) -> UniPolyZ:
    out = UniPolyZ([1])
    for f in factors:
        out = out * (f.factor**f.multiplicity)
    return out


def real_weil_polynomials(q: int, g: int, trace: int) -> list[list[int]]:
    """Monic integer h of degree g with all roots real in [-2 sqrt q, 2 sqrt q] and root sum trace.

    Coefficients are fixed one at a time: the (g-k)-th derivative of h has
    degree k and must itself have all roots in the interval, and given its
    derivative's roots the admissible constant terms form an interval read off
    from the values at the critical points and the endpoints.
    """
    a = 2 * math.sqrt(q)
    eps = 1e-7
    out: list[list[int]] = []

    def deriv_poly(h: list[int], order: int) -> np.ndarray:
        p = np.array(h + [0] * (g + 1 - len(h)), dtype=float)
        for _ in range(order):
            p = np.polyder(p)
        return p

    def rec(h: list[int]) -> None:
        k = len(h) - 1  # coefficients fixed so far: degrees g .. g-k
        if k == g:
            out.append(h)
            return
        k += 1
        D = deriv_poly(h, g - k)  # degree k, constant term still 0
        fact = math.factorial(g - k)
        crit = np.sort(np.roots(np.polyder(D)).real) if k > 1 else np.array([])
        lo, hi = -math.inf, math.inf
        # g(x) = D(x) + C; need sign alternation at the critical points and endpoints
        pts = [(a, 1)] + [(float(r), (-1) ** i) for i, r in enumerate(crit[::-1], start=1)]
        pts.append((-a, (-1) ** k))
        for x, sign in pts:
            v = np.polyval(D, x)
            if sign > 0:
                lo = max(lo, -v)
            else:
                hi = min(hi, -v)
        if lo > hi + eps:
            return
        for c in range(math.ceil((lo - eps) / fact), math.floor((hi + eps) / fact) + 1):
            rec(h + [c])

    rec([1, -trace])
    return [h for h in out if _roots_in_interval(h, a)]


def _roots_in_interval(h: list[int], a: float) -> bool:
    r = np.roots(np.array(h, dtype=float))
    return all(abs(z.imag) < 1e-5 and abs(z.real) <= a + 1e-6 for z in r)


def _mobius(n: int) -> int:
    out, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            out = -out
        p += 1
    return -out if m > 1 else out


def feasible_count_profiles(q: int, g: int, N1: int, ks=(2, 3), horizon: int = 12) -> list[tuple[int, ...]]:
    """Distinct (N_k for k in ks) over Weil polynomials with the given N_1 whose
    place counts of every degree up to horizon are non-negative integers."""
    trace = q + 1 - N1  # sum of x_i = alpha_i + q/alpha_i
    out = set()
    for h in real_weil_polynomials(q, g, trace):
        P = _weil_form(h, q)
        try:
            L = LPolynomial(P, q, g)
        except WeilError:
            continue
        N = [counts_from_lpoly(L, k) for k in range(1, horizon + 1)]
        ok = True
        for k in range(1, horizon + 1):
            b = sum(_mobius(k // d) * N[d - 1] for d in range(1, k + 1) if k % d == 0)
            if b < 0 or b % k:
                ok = False
                break
        if ok:
            out.add(tuple(N[k - 1] for k in ks))
    return sorted(out)
