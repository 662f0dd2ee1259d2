import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dp4kit.algebra import linalg
from dp4kit.algebra.binary import BinaryForm, discriminant_binary, squarefree_profile
from dp4kit.algebra.embeddings import descend, extension, lift
from dp4kit.algebra.fields import QQ, FieldError, GF, canonical_modulus, field_build, field_from_json
from dp4kit.algebra.poly import (
    UniPoly,
    gcd,
    interpolate,
    is_squarefree,
    multiplicity_partition,
    resultant,
    roots,
    squarefree_part,
)
from dp4kit.algebra.polymatrix import det_laplace, det_poly_matrix, pencil_det

F101 = GF(101)


def poly(F, *cs):
    return UniPoly(F, cs)


# -- fields


def test_prime_field_build():
    F = field_build("prime", 101)
    assert F.order == 101
    assert F(100) + F(1) == F.zero


def test_characteristic_two_rejected():
    with pytest.raises(FieldError, match="characteristic two"):
        field_build("prime", 2)


def test_composite_rejected():
    with pytest.raises(FieldError):
        GF(9)


def test_f9_modulus_is_smallest_irreducible():
    F = GF(3, 2)
    assert F.order == 9
    mod = canonical_modulus(3, 2)
    # monic quadratics c0 + c1 x + x^2 in lexicographic (c0, c1) order; the first without roots wins
    candidates = [(c0, c1, 1) for c0 in range(3) for c1 in range(3)]
    rootless = [c for c in candidates if all((c[0] + c[1] * x + x * x) % 3 for x in range(3))]
    assert tuple(mod) == rootless[0]


def test_field_json_round_trip():
    for F in (GF(7), GF(3, 2), QQ):
        assert field_from_json(F.to_json()) == F


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))
def test_field_axioms_f9(i, j, k):
    F = GF(3, 2)
    a, b, c = F.from_index(i), F.from_index(j), F.from_index(k)
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + (-a) == F.zero
    if a:
        assert a * a.inverse() == F.one


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 124), st.integers(0, 124), st.integers(0, 124))
def test_field_axioms_f125(i, j, k):
    F = GF(5, 3)
    a, b, c = F.from_index(i), F.from_index(j), F.from_index(k)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    if a:
        assert a / a == F.one


@settings(max_examples=40, deadline=None)
@given(st.fractions(), st.fractions(), st.fractions())
def test_field_axioms_rationals(a, b, c):
    x, y, z = QQ(a), QQ(b), QQ(c)
    assert x * (y + z) == x * y + x * z
    assert (x + y) + z == x + (y + z)
    if a:
        assert x * x.inverse() == QQ.one


@pytest.mark.parametrize("p,k", [(3, 2), (3, 3), (5, 2), (7, 2)])
def test_frobenius_fixes_exactly_prime_field(p, k):
    F = GF(p, k)
    fixed = [x for x in F.elements() if x.frobenius() == x]
    assert len(fixed) == p
    assert all(x.in_prime_field() for x in fixed)


def test_lift_descend_round_trip():
    small, big = GF(3, 2), extension(GF(3, 2), 2)
    for x in small.elements():
        assert descend(lift(x, big), small) == x


# -- resultants


def test_resultant_linear_over_q():
    assert resultant(poly(QQ, -1, 1), poly(QQ, 1, 1)) == QQ(2)


def test_resultant_quadratics_over_q():
    # product of pairwise differences of roots: prod_{i,j} (a_i - b_j) with a = +-i, b = +-sqrt 2
    assert resultant(poly(QQ, 1, 0, 1), poly(QQ, -2, 0, 1)) == QQ(9)


def test_resultant_with_itself_vanishes():
    f = poly(F101, 3, 5, 0, 1)
    assert resultant(f, f) == F101.zero


def test_resultant_rejects_mismatched_fields():
    with pytest.raises(ValueError):
        resultant(poly(GF(7), 1, 1), poly(GF(11), 1, 1))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.booleans())
def test_resultant_vanishes_iff_common_factor(seed, plant):
    rng = random.Random(seed)
    F = GF(13)

    def rand(deg):
        return UniPoly(F, [F.random(rng) for _ in range(deg)] + [F.one])

    f, g = rand(2), rand(3)
    if plant:
        h = rand(1)
        f, g = f * h, g * h
    assert (resultant(f, g) == F.zero) == (gcd(f, g).degree > 0)


# -- discriminants and squarefree profiles


def _form(F, roots_):
    return BinaryForm.from_roots(F, [(F(a), F(b)) for a, b in roots_])


def test_discriminant_distinct_roots_nonzero():
    # s t (s - t)(s + t)(s - 2t): roots (0:1), (1:0), (1:1), (1:-1), (2:1) as points (s:t)
    f = _form(F101, [(0, 1), (1, 0), (1, 1), (1, -1), (2, 1)])
    assert discriminant_binary(f)


def test_discriminant_repeated_root_zero():
    f = _form(F101, [(0, 1), (0, 1), (1, 0), (1, 1), (1, -1)])
    assert discriminant_binary(f) == F101.zero


def test_discriminant_s5_plus_t5():
    f = BinaryForm(F101, [1, 0, 0, 0, 0, 1])
    assert discriminant_binary(f)
    assert all(m == 1 for _, m in squarefree_profile(f))


def test_squarefree_profile_double_root():
    f = poly(QQ, -1, 1) ** 2 * poly(QQ, 1, 1)
    prof = squarefree_part(f)
    assert sorted(prof) == [(1, 1), (1, 2)]
    assert multiplicity_partition(prof) == (2, 1)


def test_squarefree_profile_x5_minus_x():
    F = GF(5)
    f = poly(F, 0, -1, 0, 0, 0, 1)
    assert is_squarefree(f)
    assert multiplicity_partition(squarefree_part(f)) == (1, 1, 1, 1, 1)
    assert sorted(int(r) for r in roots(f)) == [0, 1, 2, 3, 4]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from([7, 11, 13]))
def test_discriminant_zero_iff_repeated_root(seed, p):
    rng = random.Random(seed)
    F = GF(p)
    cs = [F.random(rng) for _ in range(6)]
    if rng.random() < 0.4:
        lin = BinaryForm(F, [F.random(rng, nonzero=True), F.random(rng)])
        rest = BinaryForm(F, [F.random(rng) for _ in range(4)])
        f = lin * lin * rest
    else:
        f = BinaryForm(F, cs)
    if f.is_zero():
        return
    repeated = any(m > 1 for _, m in squarefree_profile(f))
    assert (discriminant_binary(f) == F.zero) == repeated


# -- interpolation and determinants


def test_interpolate_recovers_polynomial():
    f = poly(F101, 4, 0, 7, 1)
    xs = [F101(i) for i in range(4)]
    assert interpolate(xs, [f(x) for x in xs]) == f


def test_det_poly_identity():
    n = 5
    m = [[poly(F101, 1 if i == j else 0) for j in range(n)] for i in range(n)]
    assert det_poly_matrix(m) == poly(F101, 1)


def test_det_poly_diagonal_pencil():
    F = F101
    cs = [(2, 3), (5, 1), (7, 7), (1, 9), (4, 4)]
    A = linalg.diagonal(F, [c for c, _ in cs])
    B = linalg.diagonal(F, [d for _, d in cs])
    expected = BinaryForm(F, [1])
    for c, d in cs:
        expected = expected * BinaryForm(F, [c, d])
    assert pencil_det(A, B, F) == expected


def _random_poly_matrix(F, n, deg, rng):
    return [[UniPoly(F, [F.random(rng) for _ in range(deg + 1)]) for _ in range(n)] for _ in range(n)]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 4))
def test_det_poly_matches_laplace(seed, n):
    rng = random.Random(seed)
    m = _random_poly_matrix(F101, n, 2, rng)
    assert det_poly_matrix(m) == det_laplace(m)


def test_det_poly_small_field_falls_back():
    rng = random.Random(3)
    F = GF(3)
    m = _random_poly_matrix(F, 4, 2, rng)
    assert det_poly_matrix(m) == det_laplace(m)


def test_random_symmetric_pencil_det_matches_laplace():
    rng = random.Random(11)
    F = F101
    n = 5
    A = [[F.zero] * n for _ in range(n)]
    B = [[F.zero] * n for _ in range(n)]
    for i, j in itertools.combinations_with_replacement(range(n), 2):
        A[i][j] = A[j][i] = F.random(rng)
        B[i][j] = B[j][i] = F.random(rng)
    form = pencil_det(A, B, F)
    assert form.degree == 5
    # Laplace expansion of A + t B as a polynomial in t equals det(1, t) of the form
    m = [[UniPoly(F, [A[i][j], B[i][j]], "t") for j in range(n)] for i in range(n)]
    assert det_laplace(m) == form.dehomogenize("t")


def test_rational_arithmetic_is_exact():
    x = QQ(Fraction(1, 3))
    assert x + x + x == QQ.one
