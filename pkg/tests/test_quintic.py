import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dp4kit.algebra.binary import BinaryForm, is_squarefree_form
from dp4kit.algebra.fields import QQ, FieldError, GF
from dp4kit.pencil import diagonal_pencil, random_invertible
from dp4kit.quintic import (
    UnstableQuinticError,
    equivalent_root_sets,
    invariants_quintic,
    moduli_point,
    pgl2,
    transvectant,
    weighted_equal,
    xi_of_pencil,
)

F101 = GF(101)


def random_quintic(F, rng):
    while True:
        f = BinaryForm(F, [F.random(rng) for _ in range(6)])
        if f.coeffs[0] and is_squarefree_form(f):
            return f


def random_matrix(F, rng, det_one=False):
    while True:
        a, b, c, d = (F.random(rng) for _ in range(4))
        det = a * d - b * c
        if not det:
            continue
        if det_one:
            # rescale the first row so the determinant becomes 1
            inv = det.inverse()
            a, b = a * inv, b * inv
        return a, b, c, d


def test_zeroth_transvectant_is_product():
    f = BinaryForm(F101, [1, 2, 3])
    g = BinaryForm(F101, [4, 0, 5, 6])
    assert transvectant(f, g, 0) == f * g


def test_odd_self_transvectant_vanishes():
    f = BinaryForm(F101, [3, 1, 4, 1, 5, 9])
    for r in (1, 3, 5):
        assert transvectant(f, f, r).is_zero()


def test_second_transvectant_of_conic():
    # f = s^2 + t^2: f_ss f_tt - f_st^2 = 2 * 2 - 0 = 4, and (f, f)_2 = 2 (f_ss f_tt - f_st^2)
    f = BinaryForm(QQ, [1, 0, 1])
    assert transvectant(f, f, 2) == BinaryForm(QQ, [8])


def test_transvectant_order_out_of_range():
    with pytest.raises(ValueError):
        transvectant(BinaryForm(F101, [1, 1]), BinaryForm(F101, [1, 0, 1]), 2)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_sl2_invariance(seed):
    rng = random.Random(seed)
    f = random_quintic(F101, rng)
    g = f.substitute(*random_matrix(F101, rng, det_one=True))
    assert invariants_quintic(g) == invariants_quintic(f)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_gl2_weighted_covariance(seed):
    rng = random.Random(seed)
    f = random_quintic(F101, rng)
    a, b, c, d = random_matrix(F101, rng)
    det = a * d - b * c
    u = invariants_quintic(f)
    v = invariants_quintic(f.substitute(a, b, c, d))
    assert v.I4 == det**10 * u.I4
    assert v.I8 == det**20 * u.I8
    assert v.I12 == det**30 * u.I12
    assert weighted_equal(u, v)
    assert moduli_point(f) == moduli_point(f.substitute(a, b, c, d))


def test_quintuple_root_unstable():
    f = BinaryForm(QQ, [1, 0, 0, 0, 0, 0])
    assert invariants_quintic(f).is_zero()
    with pytest.raises(UnstableQuinticError):
        moduli_point(f)


def test_triple_root_unstable():
    # s^3 t (s - t): a root of multiplicity three lies outside the semistable locus
    f = BinaryForm(QQ, [0, 0, 0, 1, -1, 0])
    assert invariants_quintic(f).is_zero()


def test_boundary_quintic_frozen():
    # s^2 t^2 (s - t): two double roots, the boundary point of the moduli space
    f = BinaryForm(QQ, [0, 0, 1, -1, 0, 0])
    v = invariants_quintic(f)
    assert v.I4 != 0
    assert v.to_json() == {"I4": "5308416", "I8": "440301256704", "I12": "-876488338465357824"}
    assert moduli_point(f).chart == "I4"


def test_boundary_quintic_frozen_mod_101():
    f = BinaryForm(F101, [0, 0, 1, -1, 0, 0])
    assert invariants_quintic(f).to_json() == {"I4": "58", "I8": "21", "I12": "23"}


def test_small_characteristic_refused():
    for p in (3, 5):
        with pytest.raises(FieldError):
            invariants_quintic(BinaryForm(GF(p), [1, 0, 0, 0, 0, 1]))


def test_wrong_degree_refused():
    with pytest.raises(ValueError):
        invariants_quintic(BinaryForm(F101, [1, 0, 1]))


def _split_quintic(F, pts):
    return BinaryForm.from_roots(F, [(F.one, F(x)) for x in pts])


def _moebius_equivalent(S, T, group, F):
    # exhaustive oracle over all of PGL2(F_q) acting on the affine parts
    target = set(T)
    for a, b, c, d in group:
        images = set()
        for x in S:
            den = c * F(x) + d
            if not den:
                break
            images.add(int((a * F(x) + b) / den))
        else:
            if images == target:
                return True
    return False


def test_separation_on_split_quintics():
    F = GF(13)
    group = list(pgl2(F))
    assert len(group) == 13 * (13**2 - 1)
    rng = random.Random(2024)
    elems = list(range(13))
    checked = 0
    while checked < 50:
        S, T = rng.sample(elems, 5), rng.sample(elems, 5)
        equivalent = _moebius_equivalent(S, T, group, F)
        assert equivalent == equivalent_root_sets([(F.one, F(x)) for x in S], [(F.one, F(x)) for x in T], F)
        if equivalent:
            assert moduli_point(_split_quintic(F, S)) == moduli_point(_split_quintic(F, T))
            continue
        assert moduli_point(_split_quintic(F, S)) != moduli_point(_split_quintic(F, T))
        checked += 1


def test_moebius_related_root_sets_agree():
    F = F101
    S = [0, 1, 2, 3, 4]
    # x -> (2x + 1) / (x + 5) keeps all five images finite
    T = [int((F(2) * F(x) + 1) / (F(x) + 5)) for x in S]
    assert moduli_point(_split_quintic(F, S)) == moduli_point(_split_quintic(F, T))
    assert xi_of_pencil(diagonal_pencil(F, S)) == xi_of_pencil(diagonal_pencil(F, T))


def test_xi_constant_on_congruence_orbit():
    rng = random.Random(17)
    P = diagonal_pencil(F101, [0, 1, 2, 3, 4])
    base = xi_of_pencil(P)
    for _ in range(20):
        Q = P.congruence(random_invertible(F101, 5, rng))
        a, b, c, d = random_matrix(F101, rng)
        assert xi_of_pencil(Q.basis_change(a, b, c, d)) == base


def test_xi_defined_on_nodal_pencil():
    from dp4kit.pencil import nodal_normal_form, random_nodal_data, rho_limit

    R1, R2, l1 = random_nodal_data(F101, random.Random(4))
    X0 = rho_limit(nodal_normal_form(F101, R1, R2, l1), (1, 0, 0, 0, -1))
    assert not xi_of_pencil(X0).invariants.is_zero()
