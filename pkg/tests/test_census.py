import itertools
import random

import pytest

from dp4kit.algebra.embeddings import extension, lift
from dp4kit.algebra.fields import GF
from dp4kit.census import (
    base_points,
    base_points_brute_force,
    census,
    fiber_point_count,
    figure1_d1_check,
    nodal_quartic_gradient_vanishes,
    p1_points,
    section_search,
    split_height20_quadrics,
)
from dp4kit.fibration.cases import CaseSpec
from dp4kit.fibration.model import fiber_at, generate_model
from dp4kit.fibration.sections import (
    distinguished_sections,
    model_with_section,
    pullback_degree,
    section_height,
    verify_section,
)
from dp4kit.pencil import surface_points
from dp4kit.varieties import BudgetExceeded, normalize_point, to_elements

F3 = GF(3)


@pytest.fixture(scope="module")
def height10_f3():
    return generate_model(CaseSpec(1, "odd", 0), F3, seed=1)


@pytest.fixture(scope="module")
def height10_search(height10_f3):
    return section_search(height10_f3, 1)


def _keys(sections):
    return {tuple(f.coeffs for f in s.forms) for s in sections}


# -- fiber counts


def test_constant_family_counts_identical():
    m = generate_model(CaseSpec(1, "even", 0), GF(7), seed=0)
    counts = {fiber_point_count(m, p) for p in p1_points(m.field)}
    assert len(counts) == 1
    assert counts.pop() % 7 == 1


def test_nodal_fiber_count_differs_frozen():
    # case 1 odd n = 0 over F_7, seed 4: Delta has the single rational root t = 3
    F = GF(7)
    m = generate_model(CaseSpec(1, "odd", 0), F, seed=4)
    node, smooth = (F.one, F(3)), (F.one, F(0))
    assert fiber_point_count(m, node, 1) == 43
    assert fiber_point_count(m, smooth, 1) == 64
    assert fiber_point_count(m, node, 2) == 2451
    assert fiber_point_count(m, smooth, 2) == 2500


def test_counts_are_one_mod_q():
    m = generate_model(CaseSpec(1, "odd", 0), GF(7), seed=2)
    for p in p1_points(m.field):
        assert fiber_point_count(m, p) % 7 == 1


# -- section search


def test_constant_sections_are_surface_points():
    m = generate_model(CaseSpec(1, "even", 0), F3, seed=0)
    res = section_search(m, 0)
    fiber = fiber_at(m, (F3.one, F3.zero))
    pts = {normalize_point(p) for p in to_elements(F3, surface_points(fiber))}
    found = {normalize_point(tuple(f.coeffs[0] for f in s.forms)) for s in res.sections}
    assert found == pts
    assert all(section_height(m, s) == 0 for s in res.sections)


def test_height10_search_counts(height10_search, height10_f3):
    by_degree = {}
    for s in height10_search.sections:
        by_degree[s.degree] = by_degree.get(s.degree, 0) + 1
        assert verify_section(height10_f3, s).ok
    assert by_degree == {0: 4, 1: 13}


def test_search_order_invariance(height10_f3, height10_search):
    other = section_search(height10_f3, 1, threads=3, chunk=5)
    assert [s.forms for s in other.sections] == [s.forms for s in height10_search.sections]


def test_search_refuses_over_budget(monkeypatch):
    m = generate_model(CaseSpec(1, "odd", 0), GF(7), seed=1)
    monkeypatch.setenv("DP4KIT_BUDGET", "1000")
    with pytest.raises(BudgetExceeded):
        section_search(m, 1)


def test_search_rejects_negative_degree(height10_f3):
    with pytest.raises(ValueError):
        section_search(height10_f3, -1)


@pytest.mark.parametrize(
    "spec,expected",
    [(CaseSpec(5, "even", -1), 1), (CaseSpec(3, "odd", -1), 4), (CaseSpec(4, "even", -1), 4)],
)
def test_special_models_over_f3(spec, expected):
    m = generate_model(spec, F3, seed=0)
    res = section_search(m, 0)
    assert len(res.sections) == expected
    dist = distinguished_sections(m).sections
    assert _keys(dist) <= _keys(res.sections)


def test_conjugate_line_sections_need_extension():
    m = generate_model(CaseSpec(4, "odd", -1), F3, seed=0)
    rep = distinguished_sections(m)
    assert rep.all_verified
    assert rep.degrees == [2, 2]
    assert section_search(m, 0).sections == []
    found = section_search(m, 0, k=2).sections
    assert len(found) == 2


def test_census_report_json(height10_f3):
    rep = census(height10_f3, deg=0)
    js = rep.to_json()
    assert js["kind"] == "census"
    assert len(js["fiberCounts"]) == 4
    assert "timing" not in js
    assert rep.tsv().splitlines()[0] == "t\tcount\tsingular"


def test_planted_degree3_section_height():
    m, sec = model_with_section(CaseSpec(1, "even", 1), GF(101), 3, seed=0)
    assert verify_section(m, sec).ok
    assert sec.degree == 3
    assert section_height(m, sec) == 3 * 1 - 2 == 1
    rng = random.Random(0)
    linear = [m.field.random(rng) for _ in range(5)]
    assert pullback_degree(sec, m.alpha, 1, linear) == 1


# -- base points


def test_split_example_sixteen_points():
    for p in (3, 7, 101):
        F = GF(p)
        quads = split_height20_quadrics(F)
        rep = base_points(quads, F)
        assert len(rep.points) == 16
        assert rep.multiplicity_free
        coords = {tuple(int(c) for c in pt.coords) for pt in rep.points}
        expected = {(1,) + tuple(s % p for s in signs) for signs in _signs()}
        assert coords == expected
        brute = {tuple(int(c) for c in normalize_point(x)) for x in base_points_brute_force(quads, F)}
        assert brute == coords
        assert all(nodal_quartic_gradient_vanishes(quads, pt.coords) for pt in rep.points)


def _signs():
    return itertools.product((1, -1), repeat=4)


def test_random_quadruple_matches_brute_force_over_f49():
    F = GF(7)
    rng = random.Random(5)
    quads = []
    for _ in range(4):
        M = [[F.zero] * 5 for _ in range(5)]
        for i in range(5):
            for j in range(i, 5):
                M[i][j] = M[j][i] = F.random(rng)
        quads.append(M)
    rep = base_points(quads, F, k_max=2)
    E = extension(F, 2)
    ours = {normalize_point(tuple(lift(c, E) for c in p.coords)) for p in rep.points}
    brute = {normalize_point(x) for x in base_points_brute_force(quads, F, k=2)}
    assert ours == brute
    assert len(rep.points) <= 16


def test_random_quadruple_f101_bezout_bound():
    F = GF(101)
    rng = random.Random(1)
    quads = []
    for _ in range(4):
        M = [[F.zero] * 5 for _ in range(5)]
        for i in range(5):
            for j in range(i, 5):
                M[i][j] = M[j][i] = F.random(rng)
        quads.append(M)
    rep = base_points(quads, F, k_max=2)
    assert len(rep.points) <= 16
    assert all(p.degree <= 2 for p in rep.points)


# -- line incidence in the quadric threefold


def test_figure1_frozen_counts(height10_f3):
    chk = figure1_d1_check(height10_f3)
    assert (chk.lines, len(chk.sections), chk.bisections, chk.fiber_lines) == (40, 13, 25, 2)
    assert chk.all_verified
    assert chk.to_json()["secancy"] == [1]


def test_figure1_lines_equal_degree1_search(height10_f3, height10_search):
    chk = figure1_d1_check(height10_f3)
    line_sections = _keys(s.section for s in chk.sections)
    searched = _keys(s for s in height10_search.sections if s.degree == 1)
    assert line_sections == searched


def test_figure1_rejects_other_cases():
    m = generate_model(CaseSpec(1, "even", 0), F3, seed=0)
    with pytest.raises(ValueError):
        figure1_d1_check(m)
