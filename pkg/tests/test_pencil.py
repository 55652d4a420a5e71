import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxcurve import linalg
from maxcurve.counting import PlaneCurve, QuadricNet, count_plane
from maxcurve.gf import FFElement, enumerate_proj, make_field
from maxcurve.pencil import (
    LemmaHypothesisError,
    NotTransverse,
    ProjLinearMap,
    brute_force_plane_autos,
    check_orthogonality,
    diag_map,
    discriminant_curve,
    find_transverse_line,
    gram,
    mu,
    quadric_kernel,
    random_admissible_pair,
    simultaneous_diagonalize,
    steinerian,
    transversal_rank,
    verify_net_automorphism,
)
from maxcurve.poly import MultiPoly, parse_poly

F3 = make_field(3, 1)
F9 = make_field(3, 2)


def net_of(ctx, *mats):
    return QuadricNet(ctx, tuple(tuple(map(tuple, Q)) for Q in mats))


def diag(entries):
    n = len(entries)
    return [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)]


def perm_matrix(perm):
    n = len(perm)
    return [[1 if perm[j] == i else 0 for j in range(n)] for i in range(n)]


# span{I, diag(0,1,2), diag(0,1,1)} is every diagonal form, so all of S_3 acts
S3_NET = net_of(F3, diag([1, 1, 1]), diag([0, 1, 2]), diag([0, 1, 1]))
S3 = [ProjLinearMap.of(perm_matrix(p), F3) for p in itertools.permutations(range(3))]


def diagonal_pencil(ctx):
    """F = sum X_i^2 and G = sum a_i X_i^2 with distinct a_i; the third member is G^2."""
    a = [0, 1, 2, 3, 4] if ctx.q > 5 else None
    return net_of(ctx, diag([1] * 5), diag(a), diag([ctx.mul(x, x) for x in a]))


# --- gram -------------------------------------------------------------------------------


def test_gram_examples():
    x = MultiPoly.var(F3, 1, 0)
    assert gram([x * x] * 3).Q[0] == ((1,),)
    Q = gram([parse_poly("2*x1*x2", ["x1", "x2"], F3)] * 3).Q[0]
    assert Q == ((0, 1), (1, 0))


def test_gram_rejects_non_quadratic():
    X = [MultiPoly.var(F3, 2, i) for i in range(2)]
    with pytest.raises(ValueError):
        gram([X[0], X[0] * X[1], X[1] * X[1]])
    with pytest.raises(ValueError):
        gram([X[0] * X[0] + X[1], X[0] * X[1], X[1] * X[1]])


def test_gram_reproduces_forms_on_all_of_f3_5(net, forms):
    for v in itertools.product(range(3), repeat=5):
        for Q, f in zip(net.Q, forms):
            val = sum(v[i] * Q[i][j] * v[j] for i in range(5) for j in range(5)) % 3
            assert val == f.eval([FFElement(F3, c) for c in v]).c


# --- discriminant ---------------------------------------------------------------------------


def test_discriminant_of_identity_pencil():
    zero = diag([0] * 5)
    S = discriminant_curve(net_of(F3, diag([1] * 5), zero, zero))
    assert S.equation == parse_poly("x^5", ["x", "y", "z"], F3)


def test_degenerate_net_raises():
    zero = diag([0] * 5)
    with pytest.raises(ValueError):
        discriminant_curve(net_of(F3, diag([1, 1, 1, 1, 0]), zero, zero))


def test_discriminant_matches_printed_quintic(reg, net):
    S = discriminant_curve(net).equation
    printed = reg.get_model("S.quintic").equation()
    assert S.total_degree() == 5
    assert S.dehomogenize(2).scale_equal(printed) is not None


def test_discriminant_evaluation_oracle():
    rng = random.Random(7)
    mats = []
    for _ in range(3):
        M = [[0] * 5 for _ in range(5)]
        for i in range(5):
            for j in range(i, 5):
                M[i][j] = M[j][i] = rng.randrange(9)
        mats.append(M)
    N = net_of(F9, *mats)
    S = discriminant_curve(N).equation
    for _ in range(50):
        p = [rng.randrange(9) for _ in range(3)]
        A = [[F9.add(F9.add(F9.mul(p[0], mats[0][i][j]), F9.mul(p[1], mats[1][i][j])), F9.mul(p[2], mats[2][i][j])) for j in range(5)] for i in range(5)]
        assert S.eval([FFElement(F9, c) for c in p]).c == linalg.det_codes(A, F9)


# --- kernels and the steinerian --------------------------------------------------------------


def test_quadric_kernel_examples():
    K = quadric_kernel(linalg.from_codes(diag([1, 1, 1, 1, 0]), F3), F3)
    assert [[x.c for x in v] for v in K] == [[0, 0, 0, 0, 1]]
    assert quadric_kernel(linalg.from_codes(diag([1, 2, 1, 1, 1]), F3), F3) == []


def test_rank_four_on_rational_points_of_s(net):
    S = discriminant_curve(net)
    pts = [P for P in enumerate_proj(F3, 2) if not S.equation.eval(P)]
    assert pts
    for P in pts:
        img = steinerian(net, P)
        assert len(img) == 5 and img[0].ctx is F3


def test_steinerian_of_diagonal_pencil_hits_the_basis():
    N = diagonal_pencil(F9)
    images = set()
    for a in range(5):
        # G - a F is singular exactly along e_a
        P = (FFElement(F9, F9.neg(a)), F9.one, F9.zero)
        images.add(tuple(x.c for x in steinerian(N, P)))
    assert images == {tuple(1 if i == j else 0 for i in range(5)) for j in range(5)}


def test_steinerian_errors(net):
    S = discriminant_curve(net).equation
    off = next(P for P in enumerate_proj(F3, 2) if S.eval(P).c)
    with pytest.raises(ValueError, match="not on the discriminant"):
        steinerian(net, off)
    # x Q1 + z Q3 at (1:0:2) is diag(1,0,0), a double plane
    with pytest.raises(ValueError, match="rank"):
        steinerian(S3_NET, (F3.one, F3.zero, FFElement(F3, 2)))


# --- mu ---------------------------------------------------------------------------------------


def test_mu_examples(reg, net):
    omega = reg.get_model("omega").linear_map()
    phi = reg.get_model("phi").linear_map()
    assert mu(ProjLinearMap.identity(5, F3), net) == ProjLinearMap.identity(3, F3)
    assert mu(omega, net) == phi
    assert verify_net_automorphism(omega, net)
    assert verify_net_automorphism(ProjLinearMap.identity(5, F3), net)


def test_random_maps_do_not_preserve_the_net(net):
    rng = random.Random(3)
    rejected = 0
    for _ in range(20):
        while True:
            M = [[rng.randrange(3) for _ in range(5)] for _ in range(5)]
            if linalg.det_codes(M, F3):
                break
        m = ProjLinearMap.of(M, F3)
        rejected += mu(m, net) is None and not verify_net_automorphism(m, net)
    assert rejected >= 19


def test_mu_reverses_products_on_omega_group(reg, net):
    group = [ProjLinearMap.identity(5, F3), reg.get_model("omega").linear_map()]
    for M in group:
        for N in group:
            assert mu(M @ N, net) == mu(N, net) @ mu(M, net)


def test_mu_reverses_products_on_s3():
    images = {}
    for M in S3:
        assert verify_net_automorphism(M, S3_NET)
        images[M] = mu(M, S3_NET)
        assert images[M] is not None
    for M in S3:
        for N in S3:
            assert mu(M @ N, S3_NET) == images[N] @ images[M]
    # S_3 is not abelian, so the reversal is visible
    assert any(images[M] @ images[N] != images[N] @ images[M] for M in S3 for N in S3)


@pytest.mark.parametrize("k", [2, 3])
def test_steinerian_compatible_with_mu(reg, net, k):
    ext = make_field(3, k)
    omega = reg.get_model("omega").linear_map()
    m = mu(omega, net)
    S = discriminant_curve(net).equation.lift(ext)
    Minv = omega.inverse()
    checked = 0
    for P in enumerate_proj(ext, 2):
        if S.eval(P).c:
            continue
        try:
            base = steinerian(net, P)
        except ValueError:
            continue
        moved = [FFElement(ext, c) for c in linalg.matvec_codes(m.rows(), [x.c for x in P], ext)]
        lhs = tuple(x.c for x in steinerian(net, moved))
        rhs = linalg.normalize_projective(linalg.matvec_codes(Minv.rows(), [x.c for x in base], ext), ext)
        assert lhs == rhs
        checked += 1
    assert checked >= 5


# --- plane automorphisms ---------------------------------------------------------------------


def _closed(group):
    s = set(group)
    return all(a @ b in s for a in s for b in s) and all(a.inverse() in s for a in s)


def test_quintic_has_only_phi(reg):
    S = reg.get_model("S.quintic").plane_curve()
    autos = brute_force_plane_autos(S, 1)
    assert set(autos) == {ProjLinearMap.identity(3, F3), reg.get_model("phi").linear_map()}


@pytest.mark.parametrize("text", ["x^2 + y^2 + z^2", "x", "x^3 + y^3 + z^3 - x*y*z"])
def test_autos_form_a_group(text):
    C = PlaneCurve(parse_poly(text, ["x", "y", "z"], F3))
    autos = brute_force_plane_autos(C, 1)
    assert ProjLinearMap.identity(3, F3) in autos
    assert _closed(autos)
    f = C.equation
    for A in autos:
        X = [MultiPoly.var(F3, 3, i) for i in range(3)]
        img = [sum((X[j] * FFElement(F3, A.M[i][j]) for j in range(3)), MultiPoly(F3, 3)) for i in range(3)]
        assert f.substitute(img).scale_equal(f) is not None


def test_conic_and_line_group_orders():
    conic = brute_force_plane_autos(PlaneCurve(parse_poly("x^2 + y^2 + z^2", ["x", "y", "z"], F3)), 1)
    line = brute_force_plane_autos(PlaneCurve(parse_poly("x", ["x", "y", "z"], F3)), 1)
    assert len(conic) == 24  # PO_3(F_3) is isomorphic to PGL_2(F_3)
    assert len(line) == 432  # stabiliser of a line: |PGL_3(F_3)| / 13


def test_projlinearmap_canonical_form():
    A = ProjLinearMap.of([[2, 0], [0, 2]], F3)
    assert A == ProjLinearMap.identity(2, F3)
    assert diag_map([1, 2], F3).M == ((1, 0), (0, 2))
    with pytest.raises(ValueError):
        ProjLinearMap.of([[1, 1], [1, 1]], F3)


# --- simultaneous diagonalisation --------------------------------------------------------------


def test_diagonalize_already_diagonal():
    F = diag([1, 1, 1])
    G = diag([1, 2, F9.add(1, F9.gen.c)])
    res = simultaneous_diagonalize(F, G, F9)
    assert check_orthogonality(F, G, res, F9)
    for v in linalg.transpose(linalg.to_codes(res.basis, F9)):
        assert sum(1 for c in v if c) == 1


def test_diagonalize_repeated_root_raises():
    with pytest.raises(LemmaHypothesisError):
        simultaneous_diagonalize(diag([1, 1, 1]), diag([1, 1, 1]), F3)


def test_diagonalize_reports_splitting_degree():
    # det(G - tF) = (2t^2 + 2)(1 - t): the quadratic factor is irreducible over F_3
    G = [[0, 1, 0], [1, 0, 0], [0, 0, 1]]
    with pytest.raises(LemmaHypothesisError, match="extension of degree 2"):
        simultaneous_diagonalize(diag([1, 2, 1]), G, F3)


@settings(max_examples=25)
@given(st.integers(1, 4), st.integers(0, 10**6))
def test_random_admissible_pairs_diagonalize(k, seed):
    ext = make_field(3, k)
    rng = random.Random(seed)
    n = rng.randint(2, min(5, ext.q - 1))
    F, G, lam = random_admissible_pair(ext, n, rng)
    res = simultaneous_diagonalize(F, G, ext)
    assert check_orthogonality(F, G, res, ext)
    assert sorted(x.c for x in res.eigenvalues) == sorted(lam)


# --- transversal lines ----------------------------------------------------------------------------


def test_transversal_rank_on_diagonal_pencil():
    assert transversal_rank(diagonal_pencil(F9), [1, 0, 0], [0, 1, 0], F9) == 5


def test_transversal_rank_on_canonical_net(net):
    A, B, e = find_transverse_line(net)
    assert transversal_rank(net, A, B, make_field(3, e)) == 5


def test_transversal_rank_rejects_tangent_line():
    # Q2 has a double zero on the diagonal, so the line meets S twice at (0:1:0)
    N = net_of(F9, diag([1, 1, 1, 1, 1]), diag([0, 0, 1, 2, 3]), diag([0, 1, 1, 1, 1]))
    with pytest.raises(NotTransverse, match="multiplicity pattern"):
        transversal_rank(N, [0, 1, 0], [1, 0, 0], F9)


def test_transversal_rank_needs_splitting_field(net):
    A, B, e = find_transverse_line(net)
    if e > 1:
        with pytest.raises(NotTransverse, match="extension"):
            transversal_rank(net, A, B, F3)
