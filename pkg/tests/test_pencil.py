import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dp4kit.algebra import linalg
from dp4kit.algebra.binary import BinaryForm, discriminant_binary
from dp4kit.algebra.fields import GF
from dp4kit.algebra.poly import UniPoly
from dp4kit.pencil import (
    DEGENERATE,
    SEMISTABLE,
    STABLE,
    UNSTABLE,
    DegeneratePencilError,
    DiagonalizationError,
    QuadricPencil,
    classify_stability,
    determinantal_quintic,
    diagonal_pencil,
    diagonalize,
    find_split_diagonal_surface,
    lines_on_surface,
    nodal_normal_form,
    random_invertible,
    random_nodal_data,
    random_pencil,
    rho_limit,
    sign_flip_orbit,
    singular_points,
    singular_points_brute_force,
    trace_form_pencil,
)

F101 = GF(101)
PAPER_WEIGHTS = (1, 0, 0, 0, -1)


def test_diagonal_quintic_product():
    c = [0, 1, 2, 3, 4]
    P = diagonal_pencil(F101, c)
    f = determinantal_quintic(P)
    expected = BinaryForm(F101, [1])
    for ci in c:
        expected = expected * BinaryForm(F101, [1, ci])
    assert f == expected
    assert discriminant_binary(f)


def test_proportional_pencil_degenerate():
    P = diagonal_pencil(F101, [1, 1, 1, 1, 1])
    assert P.is_proportional()
    assert classify_stability(P).status == DEGENERATE
    with pytest.raises(DegeneratePencilError):
        determinantal_quintic(P)


def test_random_pencil_squarefree():
    P = random_pencil(F101, random.Random(5))
    f = determinantal_quintic(P)
    assert f.degree == 5 and discriminant_binary(f)
    assert classify_stability(P).status == STABLE


def test_diagonal_stable_no_singular_points():
    P = diagonal_pencil(F101, [0, 1, 2, 3, 4])
    v = classify_stability(P)
    assert v.status == STABLE
    assert v.partition == (1, 1, 1, 1, 1)
    assert singular_points(P, k_max=2) == []


def test_stable_pencil_smooth_over_extensions():
    P = diagonal_pencil(GF(7), [0, 1, 2, 3, 4])
    assert singular_points(P, k_max=5) == []


def test_nodal_normal_form_one_node():
    rng = random.Random(1)
    R1, R2, l1 = random_nodal_data(F101, rng)
    P = nodal_normal_form(F101, R1, R2, l1)
    v = classify_stability(P)
    assert v.status == SEMISTABLE
    assert v.one_node
    node = v.singular_points[0]
    assert [int(x) for x in node.coords] == [0, 0, 0, 0, 1]
    assert node.ordinary


def test_rho_limit_identity_weights():
    P = random_pencil(F101, random.Random(2))
    assert rho_limit(P, (0, 0, 0, 0, 0)) == P


def test_rho_limit_two_nodes():
    R1, R2, l1 = random_nodal_data(F101, random.Random(4))
    P = nodal_normal_form(F101, R1, R2, l1)
    X0 = rho_limit(P, PAPER_WEIGHTS)
    # the limit drops the x0 * l1 term from the second quadric
    expected = nodal_normal_form(F101, R1, R2, [0, 0, 0, 0])
    assert X0 == expected
    v = classify_stability(X0)
    assert v.status == SEMISTABLE
    coords = sorted(tuple(int(x) for x in sp.coords) for sp in v.singular_points)
    assert coords == [(0, 0, 0, 0, 1), (1, 0, 0, 0, 0)]
    assert all(sp.ordinary for sp in v.singular_points)


def test_common_singular_point_unstable():
    rng = random.Random(7)
    n = 5
    A = [[F101.zero] * n for _ in range(n)]
    B = [[F101.zero] * n for _ in range(n)]
    for i in range(4):
        for j in range(i, 4):
            A[i][j] = A[j][i] = F101.random(rng)
            B[i][j] = B[j][i] = F101.random(rng)
    P = QuadricPencil.from_matrices(F101, A, B)
    # both quadrics are singular at e4, so every member is and the determinant vanishes
    assert P.contains([F101(0)] * 4 + [F101(1)])
    with pytest.raises(DegeneratePencilError):
        determinantal_quintic(P)
    assert classify_stability(P).status == UNSTABLE


def test_singular_points_match_brute_force():
    F = GF(7)
    R1, R2, l1 = random_nodal_data(F, random.Random(3))
    P = rho_limit(nodal_normal_form(F, R1, R2, l1), PAPER_WEIGHTS)
    found = sorted(tuple(int(x) for x in sp.coords) for sp in singular_points(P, k_max=1))
    brute = sorted(tuple(int(x) for x in p) for p in singular_points_brute_force(P, 1))
    assert found == brute


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32))
def test_verdict_invariant_under_congruence(seed):
    rng = random.Random(seed)
    if rng.random() < 0.5:
        P = random_pencil(F101, rng)
    else:
        P = nodal_normal_form(F101, *random_nodal_data(F101, rng))
    base = classify_stability(P)
    M = random_invertible(F101, 5, rng)
    a, b, c, d = (F101.random(rng) for _ in range(4))
    if not (a * d - b * c):
        a, b, c, d = F101.one, F101.zero, F101.zero, F101.one
    Q = P.congruence(M).basis_change(a, b, c, d)
    v = classify_stability(Q)
    assert v.status == base.status
    assert v.partition == base.partition


def test_diagonalize_round_trip():
    rng = random.Random(9)
    c = [F101(x) for x in (3, 17, 40, 62, 99)]
    P = diagonal_pencil(F101, c)
    for _ in range(5):
        M = random_invertible(F101, 5, rng)
        D = diagonalize(P.congruence(M))
        assert sorted(D.c, key=lambda x: x.sort_key()) == sorted(c, key=lambda x: x.sort_key())
        A, B = P.congruence(M).matrices()
        assert linalg.congruence(D.transform, A) == linalg.diagonal(F101, D.a)


def test_diagonalize_already_diagonal():
    c = [F101(x) for x in (0, 1, 2, 3, 4)]
    D = diagonalize(diagonal_pencil(F101, c))
    assert sorted(int(x) for x in D.c) == [0, 1, 2, 3, 4]


def test_diagonalize_irreducible_quintic_fails():
    F = GF(7)
    # x^5 - x - 3 has no roots over F_7; trace-form pencils have quintic roots -theta
    f = UniPoly(F, [-3, -1, 0, 0, 0, 1])
    P = trace_form_pencil(f)
    with pytest.raises(DiagonalizationError) as err:
        diagonalize(P)
    assert err.value.splitting_degree == 5


def test_lines_on_split_diagonal_surface():
    P, lines = find_split_diagonal_surface()
    assert len(lines) == 16
    assert len(set(ln.key for ln in lines)) == 16
    orbits = sign_flip_orbit(lines)
    assert [len(o) for o in orbits] == [16]


def test_lines_over_closure_of_small_field():
    P = diagonal_pencil(GF(5), [0, 1, 2, 3, 4])
    assert len(lines_on_surface(P, k=2)) == 16
