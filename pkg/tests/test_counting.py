import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxcurve import linalg
from maxcurve.counting import (
    BudgetExceeded,
    PlaneCurve,
    QuadricNet,
    Refusal,
    classify_double_point,
    count_net,
    count_plane,
    genus_from_delta,
    is_smooth_plane,
    jacobian_rank_at,
    singular_points_plane,
    smooth_count,
)
from maxcurve.gf import FFElement, enumerate_field, enumerate_proj, make_field
from maxcurve.pencil import gram
from maxcurve.poly import MultiPoly, parse_poly

F3 = make_field(3, 1)
XYZ = ["x", "y", "z"]
X5 = ["x1", "x2", "x3", "x4", "x5"]


def curve(text, ctx=F3):
    return PlaneCurve(parse_poly(text, XYZ, ctx))


NODAL = "y^2*z - x^3 - x^2*z"
CUSPIDAL = "y^2*z - x^3"


def pt(ctx, *codes):
    return tuple(FFElement(ctx, c) for c in codes)


def random_form(rng, ctx, n=5):
    terms = {}
    for i in range(n):
        for j in range(i, n):
            c = rng.randrange(ctx.q)
            if c:
                e = [0] * n
                e[i] += 1
                e[j] += 1
                terms[tuple(e)] = c
    return MultiPoly(ctx, n, terms)


def random_invertible(rng, ctx, n):
    while True:
        M = [[rng.randrange(ctx.q) for _ in range(n)] for _ in range(n)]
        if linalg.det_codes(M, ctx):
            return M


def transform(forms, M):
    n = len(M)
    ctx = forms[0].ctx
    X = [MultiPoly.var(ctx, n, i) for i in range(n)]
    images = [sum((X[j] * FFElement(ctx, M[i][j]) for j in range(n)), MultiPoly(ctx, n)) for i in range(n)]
    return [f.substitute(images) for f in forms]


def brute_plane(f, ext):
    fl = f.lift(ext) if f.ctx is not ext else f
    return sum(1 for P in enumerate_proj(ext, 2) if not fl.eval(P))


# --- plane counts -------------------------------------------------------------------


def test_plane_counts_from_examples(reg):
    assert count_plane(reg.get_model("C.sextic2").plane_curve(), 1).N == 13
    assert count_plane(curve("x"), 1).N == 4
    assert count_plane(curve("x^2 + y^2 + z^2"), 1).N == 4


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_smooth_conic_has_q_plus_one_points(k):
    assert count_plane(curve("x^2 + y^2 + z^2"), k).N == 3**k + 1


@pytest.mark.parametrize("k", [1, 2])
def test_count_plane_matches_brute_force(k):
    rng = random.Random(k)
    ext = make_field(3, k)
    for _ in range(5):
        f = MultiPoly(F3, 3, {(a, b, 3 - a - b): rng.randrange(3) for a in range(4) for b in range(4 - a)})
        if f.is_zero():
            continue
        assert count_plane(PlaneCurve(f), k).N == brute_plane(f, ext)


def test_count_plane_budget_refusal():
    with pytest.raises(BudgetExceeded) as exc:
        count_plane(curve("x"), 4, budget=100)
    assert exc.value.required > 100


def test_count_plane_thread_invariance(reg):
    c = reg.get_model("S.quintic").plane_curve()
    assert count_plane(c, 3, threads=1).N == count_plane(c, 3, threads=2).N


# --- quadric nets -------------------------------------------------------------------


def test_canonical_net_has_13_points(net):
    assert count_net(net, 1).N == 13
    assert count_net(net, 1, strategy="naive").N == 13


def test_coordinate_net_counts_a_line():
    X = [MultiPoly.var(F3, 5, i) for i in range(5)]
    forms = [X[0] * X[0], X[1] * X[1], X[2] * X[2]]
    for k in (1, 2):
        assert count_net(forms, k, strategy="naive").N == 3**k + 1
        assert count_net(forms, k).N == 3**k + 1


@pytest.mark.parametrize("k", [1, 2])
def test_naive_equals_eliminate_on_canonical_net(net, k):
    assert count_net(net, k, strategy="naive").N == count_net(net, k).N


@pytest.mark.parametrize("seed", range(20))
def test_naive_equals_eliminate_on_random_nets(seed):
    rng = random.Random(seed)
    forms = [random_form(rng, F3) for _ in range(3)]
    # make one member linear in x5 so that an elimination plan exists
    forms[0] = forms[0] + MultiPoly.var(F3, 5, 4) * MultiPoly.var(F3, 5, rng.randrange(4))
    forms[0] = MultiPoly(F3, 5, {e: c for e, c in forms[0].t.items() if e[4] < 2})
    for k in (1, 2):
        assert count_net(forms, k, strategy="naive").N == count_net(forms, k).N


@pytest.mark.parametrize("seed", range(4))
def test_counts_invariant_under_pgl(forms, seed):
    rng = random.Random(100 + seed)
    moved = transform(forms, random_invertible(rng, F3, 5))
    for k in (1, 2):
        assert count_net(moved, k, strategy="naive").N == count_net(forms, k, strategy="naive").N


def test_count_net_threads_and_budget(net):
    assert count_net(net, 3, threads=1).N == count_net(net, 3, threads=2).N
    with pytest.raises(BudgetExceeded):
        count_net(net, 3, strategy="naive", budget=1000)
    with pytest.raises(ValueError):
        count_net(net, 1, strategy="guess")


def test_count_record_json(net):
    rec = count_net(net, 2, model="C.canonical")
    d = rec.to_json()
    assert d["model"] == "C.canonical" and d["k"] == 2 and d["N"] == 15
    assert d["strategy"] == "eliminate" and isinstance(d["elapsed_ms"], int)


def test_quadric_net_rejects_asymmetric_matrix():
    with pytest.raises(ValueError):
        QuadricNet(F3, ([[0, 1], [0, 0]],) * 3)


def test_gram_roundtrip(forms):
    assert gram(forms).forms() == forms


# --- jacobian rank ------------------------------------------------------------------


def test_jacobian_rank_three_on_rational_points(net, forms):
    pts = [P for P in enumerate_proj(F3, 4) if all(not f.eval(P) for f in forms)]
    assert len(pts) == 13
    assert all(jacobian_rank_at(net, P) == 3 for P in pts)


@pytest.mark.parametrize("k", [2, 3])
def test_jacobian_rank_three_over_extensions(net, forms, k):
    ext = make_field(3, k)
    lifted = [f.lift(ext) for f in forms]
    rng = random.Random(k)
    found = 0
    for P in enumerate_proj(ext, 4):
        if all(not f.eval(P) for f in lifted):
            assert jacobian_rank_at(net, P) == 3
            found += 1
            if found >= 8 and rng.random() < 0.5:
                break
    assert found >= 8


def test_jacobian_rank_zero_and_off_net():
    X = [MultiPoly.var(F3, 5, i) for i in range(5)]
    degenerate = gram([X[0] * X[0], X[0] * X[1], X[0] * X[2]])
    assert jacobian_rank_at(degenerate, pt(F3, 0, 0, 0, 1, 0)) == 0
    with pytest.raises(ValueError):
        jacobian_rank_at(degenerate, pt(F3, 1, 0, 0, 0, 0))


# --- singularities --------------------------------------------------------------------


def test_singular_points_examples(reg):
    assert singular_points_plane(curve(NODAL), 1) == [pt(F3, 0, 0, 1)]
    S = reg.get_model("S.quintic").plane_curve()
    for k in (1, 2, 3):
        assert singular_points_plane(S, k) == []
    D = reg.get_model("D.quartic").plane_curve()
    assert singular_points_plane(D, 1)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_singular_enumeration_equals_resultant_pipeline(reg, k):
    for c in [curve(NODAL), curve(CUSPIDAL), reg.get_model("D.quartic").plane_curve(), reg.get_model("S.quintic").plane_curve()]:
        a = singular_points_plane(c, k, method="enumerate")
        b = singular_points_plane(c, k, method="resultant")
        assert a == b


def test_is_smooth_examples(reg):
    assert is_smooth_plane(reg.get_model("S.quintic").plane_curve()).smooth
    conic = is_smooth_plane(curve("x^2 + y^2 + z^2"))
    assert conic.smooth and conic.bezout_bound == 1
    cert = is_smooth_plane(curve(NODAL))
    assert not cert.smooth
    assert cert.witness is not None


def test_smooth_conic_has_no_singular_points_up_to_f81():
    c = curve("x^2 + y^2 + z^2")
    assert all(singular_points_plane(c, k) == [] for k in range(1, 5))


@pytest.mark.parametrize("seed", range(10))
def test_is_smooth_agrees_with_singular_points_over_closure(seed):
    rng = random.Random(seed)
    f = MultiPoly(F3, 3, {(a, b, 3 - a - b): rng.randrange(3) for a in range(4) for b in range(4 - a)})
    if f.is_zero():
        return
    c = PlaneCurve(f)
    try:
        smooth = is_smooth_plane(c).smooth
    except Refusal:
        return
    # a plane cubic's singular points live in F_3^k with k <= 6
    seen = any(singular_points_plane(c, k) for k in (1, 2, 3))
    if seen:
        assert not smooth


def test_classify_double_points(reg):
    assert classify_double_point(curve(NODAL), pt(F3, 0, 0, 1)) == "node-split"
    assert classify_double_point(curve("y^2*z - x^3 + x^2*z"), pt(F3, 0, 0, 1)) == "node-nonsplit"
    assert classify_double_point(curve(CUSPIDAL), pt(F3, 0, 0, 1)) == "cusp"
    assert classify_double_point(curve("x^2*y - y^3"), pt(F3, 0, 0, 1)) == "other"
    with pytest.raises(ValueError):
        classify_double_point(curve(NODAL), pt(F3, 2, 0, 1))


def test_quartic_d_singularity(reg):
    D = reg.get_model("D.quartic").plane_curve()
    sing = singular_points_plane(D, 1)
    assert sing == [pt(F3, 0, 0, 1)]
    assert classify_double_point(D, sing[0]) == "node-split"
    res = smooth_count(D, 1)
    assert res["delta"] == 1
    assert genus_from_delta(D.degree, res["delta"]) == 2


def parametrised_nodal_places(k):
    """Places of y^2 z = x^3 + x^2 z over F_{3^k}: t -> (t^2 - 1 : t(t^2 - 1) : 1) plus t = infinity."""
    ext = make_field(3, k)
    return sum(1 for _ in enumerate_field(ext)) + 1


@pytest.mark.parametrize("k", [1, 2, 3])
def test_nodal_cubic_smooth_count_matches_parametrisation(k):
    res = smooth_count(curve(NODAL), k)
    assert res["N_smooth"] == parametrised_nodal_places(k) == 3**k + 1
    assert res["N_plane"] == 3**k


def test_nodal_cubic_plane_points_by_parametrisation():
    # images of t in F_3 plus the point at infinity; t = 1 and t = -1 both land on the node
    ext = F3
    pts = set()
    for t in enumerate_field(ext):
        x = t * t - ext.one
        pts.add(linalg.normalize_projective([x.c, (t * x).c, 1], ext))
    pts.add((0, 1, 0))
    assert len(pts) == 3 == count_plane(curve(NODAL), 1).N


def test_smooth_count_of_smooth_curve(reg):
    S = reg.get_model("S.quintic").plane_curve()
    res = smooth_count(S, 1)
    assert res["N_smooth"] == res["N_plane"] and res["delta"] == 0


def test_smooth_count_refuses_other_singularities():
    with pytest.raises(Refusal):
        smooth_count(curve("x^2*y - y^3"), 1)


@settings(max_examples=20)
@given(st.integers(0, 10**6))
def test_plane_count_pgl_invariance(seed):
    rng = random.Random(seed)
    f = MultiPoly(F3, 3, {(a, b, 3 - a - b): rng.randrange(3) for a in range(4) for b in range(4 - a)})
    if f.is_zero():
        return
    g = transform([f], random_invertible(rng, F3, 3))[0]
    for k in (1, 2):
        assert count_plane(PlaneCurve(f), k).N == count_plane(PlaneCurve(g), k).N


def test_two_genus_two_models_agree_on_counts(reg):
    quartic = reg.get_model("D.quartic").plane_curve()
    affine = reg.get_model("D.affine").plane_curve()
    for k in (1, 2):
        a, b = smooth_count(quartic, k), smooth_count(affine, k)
        assert a["N_smooth"] == b["N_smooth"]
        assert a["delta"] == b["delta"] == 1
    assert [smooth_count(quartic, k)["N_smooth"] for k in (1, 2)] == [8, 10]
    assert [d["kind"] for d in smooth_count(affine, 1)["singular_points"]] == ["node-split"]
