import pytest
from hypothesis import given
from hypothesis import strategies as st

from maxcurve.counting import count_plane
from maxcurve.cover import (
    MapUndefined,
    RationalMap,
    choose_377,
    fiber,
    fiber_census,
    involution_check,
    quotient_membership,
    verify_cover,
)
from maxcurve.gf import FFElement, enumerate_proj, make_field
from maxcurve.poly import MultiPoly, parse_poly

F3 = make_field(3, 1)
XY = ["x", "y"]
X5 = ["x1", "x2", "x3", "x4", "x5"]


def P(text, names=XY):
    return parse_poly(text, names, F3)


@pytest.fixture(scope="module")
def setup(reg):
    src = reg.get_model("C.sextic2").equation()
    rmap = reg.get_model("cover.map").rational_map()
    E = reg.get_model("E.weierstrass").equation()
    return src, rmap, E, reg.get_model("C.sextic2").plane_curve()


def test_cover_map_is_a_cover(setup):
    src, rmap, E, _ = setup
    cert = verify_cover(src, rmap, E)
    assert cert.holds
    assert cert.quotient is not None and cert.quotient * src == pullback_numerator(rmap, E)


def pullback_numerator(rmap, E):
    from maxcurve.poly import pullback

    return pullback(E, rmap.components)[0]


def test_identity_map_on_e(setup):
    _, _, E, _ = setup
    one = MultiPoly.const(F3, 2, 1)
    ident = RationalMap([(P("x"), one), (P("y"), one)])
    assert verify_cover(E, ident, E).holds


def test_perturbed_map_fails(setup):
    src, rmap, E, _ = setup
    x, (yn, yd) = rmap.components
    shifted = RationalMap([x, (yn + yd, yd)])
    assert not verify_cover(src, shifted, E).holds


def test_shift_of_x_is_an_automorphism_of_e(setup):
    # (x + 1)^3 - (x + 1) + 1 = x^3 - x + 1 in characteristic 3
    src, rmap, E, _ = setup
    (xn, xd), y = rmap.components
    assert verify_cover(src, RationalMap([(xn + xd, xd), y]), E).holds
    neg = RationalMap([(-xn, xd), y])
    assert not verify_cover(src, neg, E).holds


def test_denominator_vanishing_on_source_raises(setup):
    src, rmap, E, _ = setup
    bad = RationalMap([(P("x"), src), rmap.components[1]])
    with pytest.raises(MapUndefined):
        verify_cover(src, bad, E)


def test_rational_map_rejects_zero_denominator():
    with pytest.raises(ValueError):
        RationalMap([(P("x"), MultiPoly(F3, 2)), (P("y"), MultiPoly.const(F3, 2, 1))])


def test_e_has_seven_points(reg):
    assert count_plane(reg.get_model("E.weierstrass").plane_curve(), 1).N == 7


# --- quotient membership ---------------------------------------------------------------------


def test_quotient_membership_examples(reg, forms):
    D = reg.get_model("D.quartic").equation()
    D5 = D.substitute([MultiPoly.var(F3, 5, i) for i in range(3)])
    assert quotient_membership(D5, forms)
    x1, x2 = MultiPoly.var(F3, 5, 0), MultiPoly.var(F3, 5, 1)
    assert quotient_membership(x1 * x2 * forms[0], forms)
    assert not quotient_membership(x1 ** 4, forms)


@given(st.lists(st.integers(0, 2), min_size=45, max_size=45))
def test_ideal_combinations_are_members(forms, coeffs):
    from maxcurve.cover import _monomials

    total = MultiPoly(F3, 5)
    mons = _monomials(5, 2)
    k = 0
    for q in forms:
        for e in mons:
            if coeffs[k]:
                total = total + MultiPoly(F3, 5, {e: coeffs[k]}) * q
            k += 1
    if not total.is_zero():
        assert quotient_membership(total, forms)


def test_quartic_vanishes_on_rational_points_of_c(reg, forms):
    D = reg.get_model("D.quartic").equation()
    D5 = D.substitute([MultiPoly.var(F3, 5, i) for i in range(3)])
    for pt in enumerate_proj(F3, 4):
        if all(not f.eval(pt) for f in forms):
            assert not D5.eval(pt)


# --- involution and the counting constant ---------------------------------------------------------


def test_involution_examples(reg):
    assert involution_check(reg.get_model("C.sextic1").equation())
    assert not involution_check(reg.get_model("C.sextic2").equation())
    assert involution_check(P("x^3 + y^4 - x*y^2 + 1"))


@given(st.dictionaries(st.tuples(st.integers(0, 4), st.integers(0, 3)), st.integers(1, 2), max_size=6))
def test_polynomials_in_y_squared_are_invariant(terms):
    f = MultiPoly(F3, 2, {(a, 2 * b): c for (a, b), c in terms.items()})
    if not f.is_zero():
        assert involution_check(f)


def test_choose_377():
    assert choose_377() == 377


# --- fibers and the census ------------------------------------------------------------------------


def test_fiber_examples(setup):
    _, rmap, E, C = setup
    Eh = E.homogenize(3)
    F9 = make_field(3, 2)
    sizes = {k: [] for k in (1, 2)}
    for k, ext in ((1, F3), (2, F9)):
        for pt in enumerate_proj(ext, 2):
            if not Eh.lift(ext).eval(pt).c:
                sizes[k].append(len(fiber(C, rmap, Eh, pt, k)))
    assert all(n <= 3 for n in sizes[1] + sizes[2])
    assert 3 in sizes[2]
    assert min(sizes[2]) < 3


def test_fiber_rejects_points_off_e(setup):
    _, rmap, E, C = setup
    Eh = E.homogenize(3)
    off = next(pt for pt in enumerate_proj(F3, 2) if Eh.eval(pt).c)
    with pytest.raises(ValueError):
        fiber(C, rmap, Eh, off, 1)


def test_places_over_f3_match_counts(setup):
    _, rmap, E, C = setup
    Eh = E.homogenize(3)
    total = sum(len(fiber(C, rmap, Eh, pt, 1)) for pt in enumerate_proj(F3, 2) if not Eh.eval(pt).c)
    assert total == 13


@pytest.fixture(scope="module")
def census(setup):
    _, rmap, E, C = setup
    return fiber_census(C, rmap, E.homogenize(3), k_max=2)


def test_census_fiber_degrees(census):
    assert census.records
    for r in census.records:
        assert r.pattern is not None
        assert sum(e * f for e, f in r.pattern) == 3
    assert any(r.fully_split for r in census.records)


def test_census_finds_wild_ramification(census):
    assert census.ramified
    assert any(r.wild for r in census.records)
    rh = census.riemann_hurwitz()
    assert rh["required_different_degree"] == 8
    assert rh["wild_found"] and rh["tame_accounting"] < 8
    assert rh["consistent"]


def test_census_json_shape(census):
    d = census.to_json()
    assert d["degree"] == 3 and d["k_max"] == 2
    assert d["ramified_fibers"] == len(census.ramified)
    assert all(set(f) >= {"target_point", "fiber_counts", "pattern", "wild"} for f in d["fibers"])
