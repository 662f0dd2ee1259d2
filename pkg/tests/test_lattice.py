import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dp4kit.lattice import (
    E,
    GramTable,
    PicClass,
    SignedPerm,
    builtin_tables,
    discriminant_group,
    exceptional_box_search,
    exceptional_classes,
    k3_class_arith,
    lambda_gram,
    lambda_matrix,
    orbit,
    pair_exprs,
    pic_pairing,
    preserves_gram,
    sign_kernel,
    weyl_act,
    weyl_group,
)

L = PicClass.of(1, 0, 0, 0, 0, 0)
K = PicClass.of(-3, -1, -1, -1, -1, -1)


def test_canonical_square():
    assert pic_pairing(K, K) == 4


def test_exceptional_pairings():
    assert pic_pairing(E(1), E(1)) == -1
    assert pic_pairing(E(1), E(2)) == 0
    c = PicClass.of(1, 1, 1, 0, 0, 0)
    assert pic_pairing(c, c) == -1
    assert c == L - E(1) - E(2)


def test_sixteen_exceptional_classes():
    exc = exceptional_classes()
    assert len(exc) == 16
    assert E(1) in exc
    assert E(1) == PicClass.of(0, -1, 0, 0, 0, 0)  # classes store d L - sum m_i E_i
    assert PicClass.of(0, 1, 0, 0, 0, 0) not in exc
    assert PicClass.of(2, 1, 1, 1, 1, 1) in exc
    assert all(pic_pairing(c, c) == -1 and pic_pairing(c, K) == -1 for c in exc)


def test_exceptional_classes_match_box_search():
    assert sorted(exceptional_classes()) == exceptional_box_search(3, 2)


def test_lambda_gram_matches_basis():
    assert lambda_gram() == [
        [-2, 1, 0, 0, 0],
        [1, -2, 1, 0, 0],
        [0, 1, -2, 1, 1],
        [0, 0, 1, -2, 0],
        [0, 0, 1, 0, -2],
    ]


def test_weyl_group_order():
    assert len(weyl_group()) == 1920


def test_single_sign_flip_rejected():
    w = SignedPerm((0, 1, 2, 3, 4), (-1, 1, 1, 1, 1))
    assert not w.in_weyl_group()
    with pytest.raises(ValueError):
        weyl_act(w, E(1))


def test_identity_fixes_classes():
    ident = SignedPerm((0, 1, 2, 3, 4), (1, 1, 1, 1, 1))
    for c in exceptional_classes():
        assert weyl_act(ident, c) == c


def test_orbit_of_e1_is_exceptional_set():
    orb = orbit(E(1))
    assert len(orb) == 16
    assert set(orb) == set(exceptional_classes())


def test_every_element_preserves_gram():
    G = lambda_gram()
    for w in weyl_group():
        assert preserves_gram(w)
    # spot-check the matrix identity w^T G w = G on a sample
    for w in list(weyl_group())[::97]:
        M = lambda_matrix(w)
        MT = [list(r) for r in zip(*M)]
        prod = [[sum(MT[i][k] * G[k][l] * M[l][j] for k in range(5) for l in range(5)) for j in range(5)] for i in range(5)]
        assert prod == G


def test_weyl_fixes_canonical_class():
    for w in list(weyl_group())[::37]:
        assert weyl_act(w, K) == K


def test_sign_kernel_order_16():
    assert len(sign_kernel()) == 16


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 1919), st.lists(st.integers(-3, 3), min_size=6, max_size=6), st.lists(st.integers(-3, 3), min_size=6, max_size=6))
def test_weyl_action_preserves_pairing(i, a, b):
    w = weyl_group()[i]
    x, y = PicClass(a[0], tuple(a[1:])), PicClass(b[0], tuple(b[1:]))
    assert pic_pairing(weyl_act(w, x), weyl_act(w, y)) == pic_pairing(x, y)


def test_discriminant_groups():
    assert discriminant_group(lambda_gram()) == [4]
    assert discriminant_group([[1, 0], [0, 1]]) == []
    assert discriminant_group([[2, 0], [0, 2]]) == [2, 2]


def test_discriminant_group_singular_rejected():
    with pytest.raises(ValueError):
        discriminant_group([[1, 1], [1, 1]])


def test_cubic_table_arithmetic():
    t = builtin_tables()["cubic"]
    R = "2h - C + R'"
    assert pair_exprs(t, "C", R) == 8
    assert pair_exprs(t, R, R) == -2


def test_quartic_table_arithmetic():
    t = builtin_tables()["quartic"]
    Rp = "2h - R"
    assert pair_exprs(t, "h", Rp) == 4
    assert pair_exprs(t, Rp, Rp) == -2
    assert pair_exprs(t, "C", Rp) == 5


def test_sextic_table_arithmetic():
    t = builtin_tables()["sextic"]
    Rp = "3h - R"
    assert pair_exprs(t, "C - h", Rp) == 1
    assert pair_exprs(t, "C", Rp) == 7


def test_class_arith_genus():
    t = GramTable(("a", "b"), ((2, 1), (1, -2)))
    res = k3_class_arith(t, "a + b")
    assert res.self_intersection == 2
    assert res.pairings == {"a": 3, "b": -1}
    assert res.genus == 2


def test_unknown_label_rejected():
    with pytest.raises(KeyError):
        k3_class_arith(builtin_tables()["quartic"], "2h - X")


def test_asymmetric_table_rejected():
    with pytest.raises(ValueError):
        GramTable(("a", "b"), ((2, 1), (0, 2)))


def test_builtin_tables_have_even_diagonal():
    for t in builtin_tables().values():
        assert all(t.gram[i][i] % 2 == 0 for i in range(len(t.labels)))
