import math

import pytest
import sympy
from sympy.polys.subresultants_qq_zz import sylvester
from hypothesis import assume, given
from hypothesis import strategies as st

from maxcurve.gf import enumerate_field, make_field
from maxcurve.poly import UniPolyZ
from maxcurve.zeta import (
    IsogenyFactor,
    LPolynomial,
    WeilError,
    counts_from_lpoly,
    cover_degree_bound,
    divides,
    expand,
    feasible_count_profiles,
    frobenius_power_charpoly,
    is_supersingular,
    is_weil_polynomial,
    lpoly_from_counts,
    real_weil,
    satisfies_functional_equation,
    weil_factorization,
    weil_interval,
)

T = sympy.Symbol("T")
H = UniPolyZ.from_high
FACTORS = ([1, 2, 3], [1, 3, 3], [1, 0, 3], [1, 4, 8, 12, 9])


def sym(P: UniPolyZ):
    return sympy.Poly(list(reversed(P.c)), T)


def product_oracle():
    e = sympy.expand((T**2 + 2 * T + 3) * (T**2 + 3 * T + 3) * (T**2 + 3) * (T**4 + 4 * T**3 + 8 * T**2 + 12 * T + 9))
    return [int(c) for c in sympy.Poly(e, T).all_coeffs()]


L_C = H(product_oracle())
C_COUNTS = [13, 15, 22, 59, 263]


def oracle_counts(high, q, k):
    """N_k = q^k + 1 - trace(M^k) for the companion matrix M of the polynomial, in exact arithmetic."""
    M = sympy.Matrix.companion(sympy.Poly(high, T))
    return int(q**k + 1 - (M**k).trace())


def test_product_expansion_is_a_weil_polynomial():
    assert L_C.degree() == 10 and L_C.c[0] == 3**5
    assert satisfies_functional_equation(L_C, 3)
    assert is_weil_polynomial(L_C, 3)


def test_lpoly_from_counts_recovers_expansion():
    L = lpoly_from_counts(C_COUNTS, 3, 5)
    assert L.coeffs == L_C


@pytest.mark.parametrize("k", range(1, 8))
def test_counts_match_power_sum_oracle(k):
    L = LPolynomial(L_C, 3, 5)
    assert counts_from_lpoly(L, k) == oracle_counts(L_C.high(), 3, k)


def test_lpoly_examples():
    assert lpoly_from_counts([7], 3, 1).coeffs == H([1, 3, 3])
    assert lpoly_from_counts([], 3, 0).coeffs == UniPolyZ([1])
    E = LPolynomial(H([1, 3, 3]), 3, 1)
    assert counts_from_lpoly(E, 1) == 7
    assert counts_from_lpoly(E, 2) == 7
    P1 = LPolynomial(UniPolyZ([1]), 3, 0)
    assert [counts_from_lpoly(P1, k) for k in (1, 2, 3)] == [4, 10, 28]


def test_elliptic_count_over_f9_by_brute_force():
    F9 = make_field(3, 2)
    one = F9.one
    affine = 0
    for x in enumerate_field(F9):
        rhs = x * x * x - x + one
        affine += sum(1 for y in enumerate_field(F9) if y * y == rhs)
    assert affine + 1 == 7


def test_lpoly_from_counts_errors():
    with pytest.raises(WeilError):
        lpoly_from_counts([13, 15], 3, 5)
    with pytest.raises(WeilError):
        lpoly_from_counts([40, 15, 22, 59, 263], 3, 5)
    with pytest.raises(WeilError):
        LPolynomial(H([1, 1, 2]), 3, 1)


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=3))
def test_counts_lpoly_roundtrip(traces):
    # products of elliptic factors T^2 - aT + 3 with |a| <= 3 are Weil polynomials
    P = UniPolyZ.product(H([1, -a, 3]) for a in traces)
    g = len(traces)
    L = LPolynomial(P, 3, g)
    counts = [counts_from_lpoly(L, k) for k in range(1, g + 1)]
    assume(all(n >= 0 for n in counts))
    assert lpoly_from_counts(counts, 3, g).coeffs == P


def test_factorization_of_expansion():
    factors, diag = weil_factorization(L_C, 3)
    assert diag == ""
    assert sorted((f.factor.high(), f.multiplicity) for f in factors) == sorted((f, 1) for f in FACTORS)
    assert expand(factors) == L_C


def test_factorization_examples():
    f, _ = weil_factorization(H([1, 3, 3]), 3)
    assert [(x.factor.high(), x.multiplicity) for x in f] == [([1, 3, 3], 1)]
    f, _ = weil_factorization(H([1, 0, 3]) ** 2, 3)
    assert [(x.factor.high(), x.multiplicity) for x in f] == [([1, 0, 3], 2)]
    with pytest.raises(ValueError):
        weil_factorization(L_C)


def test_quartic_factor_irreducible_over_q():
    assert len(sympy.factor_list(sympy.Poly([1, 4, 8, 12, 9], T))[1]) == 1


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=3))
def test_factorization_expand_roundtrip(traces):
    P = UniPolyZ.product(H([1, a, 3]) for a in traces)
    factors, _ = weil_factorization(P, 3)
    assert expand(factors) == P
    assert all(isinstance(f, IsogenyFactor) for f in factors)


def test_frobenius_power_examples():
    assert frobenius_power_charpoly(H([1, 0, 3]), 2) == H([1, 3]) ** 2
    assert frobenius_power_charpoly(L_C, 1) == L_C
    want = H([1, -531441]) ** 4 * H([1, 629918, 282429536481]) ** 3
    assert frobenius_power_charpoly(L_C, 24) == want


def test_frobenius_24_against_sympy_resultant():
    # charpoly of alpha^24 is Res_Y(L(Y), T - Y^24) up to sign
    Y = sympy.Symbol("Y")
    res = sympy.resultant(sympy.Poly(L_C.high(), Y).as_expr(), T - Y**24, Y)
    ref = [int(c) for c in sympy.Poly(res, T).all_coeffs()]
    got = frobenius_power_charpoly(L_C, 24).high()
    assert got == ref or got == [-c for c in ref]


@pytest.mark.parametrize("m", [2, 3, 5])
def test_frobenius_power_counts(m):
    P = frobenius_power_charpoly(L_C, m)
    L = LPolynomial(P, 3**m, 5)
    assert counts_from_lpoly(L, 1) == counts_from_lpoly(LPolynomial(L_C, 3, 5), m)


def test_real_weil_examples():
    assert real_weil(H([1, 3, 3]), 3) == H([1, 3])
    assert real_weil(H([1, 2, 3]), 3) == H([1, 2])
    assert real_weil(H([1, 0, 3]), 3) == H([1, 0])
    h = real_weil(H([1, 4, 8, 12, 9]), 3)
    assert h == H([1, 4, 2])
    # resubstitution: T^2 h(T + 3/T)
    assert sympy.expand(T**2 * sym(h).as_expr().subs(T, T + 3 / T)) == sym(H([1, 4, 8, 12, 9])).as_expr()


def test_real_weil_rejects_non_weil():
    with pytest.raises(WeilError):
        real_weil(H([1, 5, 3]), 3)
    with pytest.raises(WeilError):
        real_weil(H([1, 1, 1]), 3)
    assert not is_weil_polynomial(H([1, 1, 2]), 3)


def test_cover_degree_bound_examples():
    e = H([1, 3, 3])
    rest = UniPolyZ.product(H(f) for f in FACTORS if f != [1, 3, 3])
    r = cover_degree_bound(e, rest, 3)
    assert abs(r) == 3
    assert cover_degree_bound(e, e, 3) == 0


def test_cover_degree_bound_against_sylvester():
    e = H([1, 3, 3])
    rest = UniPolyZ.product(H(f) for f in FACTORS if f != [1, 3, 3])
    ref = sylvester(T + 3, sympy.expand((T + 2) * T * (T**2 + 4 * T + 2)), T).det()
    assert cover_degree_bound(e, rest, 3) == int(ref)


def test_supersingularity():
    assert is_supersingular(H([1, 3, 3]), 3)
    assert is_supersingular(H([1, 0, 3]), 3)
    assert not is_supersingular(H([1, 2, 3]), 3)
    with pytest.raises(WeilError):
        is_supersingular(H([1, 0, 2]), 2)


def test_weil_interval_examples():
    assert weil_interval(3, 5) == (0, 21)
    assert weil_interval(3, 0) == (4, 4)
    assert weil_interval(3, 1) == (1, 7)


@given(st.integers(1, 6), st.integers(0, 8))
def test_weil_interval_formula(k, g):
    q = 3**k
    lo, hi = weil_interval(q, g)
    assert hi == math.floor(q + 1 + 2 * g * math.sqrt(q))
    assert lo == max(0, math.ceil(q + 1 - 2 * g * math.sqrt(q)))


def test_divides_examples():
    assert divides(H([1, 0, 3]), L_C)
    assert not divides(H([1, 0, 1]), L_C)
    assert divides(L_C, L_C)


def test_feasible_profiles_contain_curve_c():
    profiles = feasible_count_profiles(3, 5, 13)
    assert (15, 22) in profiles
    assert len(profiles) == len(set(profiles))
    for n9, n27 in profiles:
        assert weil_interval(9, 5)[0] <= n9 <= weil_interval(9, 5)[1]
        assert n9 >= 13 and n27 >= 13
