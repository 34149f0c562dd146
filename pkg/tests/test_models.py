import random
from dataclasses import replace
from fractions import Fraction as F

import pytest

from logenriques.dual_graph import Kind, is_isomorphic
from logenriques.log_pair import (
    LogPair,
    crepancy_residuals,
    extract_zero_discrepancy,
    pushforward_self_intersection,
)
from logenriques.models import (
    SEGMENTS,
    ModelCase,
    golden_graph,
    label_involution,
    maximal_extraction,
    minimal_resolution_graph,
    validate_golden,
)

A26, I22 = ModelCase.A26, ModelCase.I22


def test_minimal_resolution_a26():
    g = minimal_resolution_graph(A26).graph
    assert len(g) == 5
    assert g["C1"].self_int == -1 == F(1, 6) - F(1, 2) - F(2, 3)
    assert (g["C2"].self_int, g["C2"].nodes) == (6, 1)
    assert g.mult("C1", "C2") == 1
    assert g["a1"].coeff == F(3, 7)
    assert (g["a2_1"].coeff, g["a2_2"].coeff) == (F(2, 7), F(4, 7))
    # the boundary meets the end of the A2 chain with coefficient 4/7
    assert g.mult("a2_2", "C1") == 1 and g.mult("a2_1", "C1") == 0


def test_minimal_resolution_i22():
    g = minimal_resolution_graph(I22).graph
    assert g["C1"].self_int == 1 == F(3, 2) - F(1, 2)
    assert g["C2"].self_int == 2 == F(8, 3) - F(2, 3)
    assert g.mult("C1", "C2") == 2
    assert g.mult("a1", "C1") == 1 and g.mult("a2_2", "C2") == 1
    assert all(v.nodes == 0 for v in g)


def test_golden_a26_lower_loop():
    g = golden_graph(A26).graph
    assert g["C1"].self_int == g["C2"].self_int == -14
    expected = [
        "C2", "10", (-2, F(1, 7)), (-2, F(2, 7)), (-3, F(3, 7)), "11", (-4, F(4, 7)), (-2, F(2, 7)), "12",
        (-7, F(5, 7)), "13", (-2, F(2, 7)), (-4, F(4, 7)), "14", (-3, F(3, 7)), (-2, F(2, 7)), (-2, F(1, 7)),
        "15", "C2",
    ]
    path, prev = ["C2", g.by_label("10").id], "C2"
    while path[-1] != "C2":
        cur = path[-1]
        nxt = [w for w in g.neighbors(cur) if w != prev]
        assert len(nxt) == 1
        prev = cur
        path.append(nxt[0])
    seen = []
    for vid in path:
        v = g[vid]
        seen.append(vid if v.kind is Kind.BOUNDARY else v.label if v.kind is Kind.CIRCLE else (v.self_int, v.coeff))
    assert seen == expected


def test_golden_i22_chains_end_on_both_curves():
    g = golden_graph(I22).graph
    for first, last in ((4, 9), (10, 15)):
        assert g.mult(g.by_label(str(first)).id, "C1") == 1
        assert g.mult(g.by_label(str(last)).id, "C2") == 1


@pytest.mark.parametrize("case", list(ModelCase))
def test_maximal_extraction_matches_golden(case):
    p = maximal_extraction(case)
    g = p.graph
    assert len(g) == 47
    assert len(g.of_kind(Kind.CIRCLE)) == 15
    assert is_isomorphic(g, golden_graph(case).graph)
    assert {g[b].self_int for b in p.boundary_ids} == {-14}


@pytest.mark.parametrize("case", list(ModelCase))
def test_validate_golden_passes(case):
    report = validate_golden(case)
    assert report.ok, str(report)
    assert [name for name, _, _ in report.checks] == ["crepancy", "circles", "boundary -14", "blow-down", "index 7"]


def test_validate_golden_catches_corruption():
    pair = golden_graph(A26)
    victim = next(v for v in pair.graph if v.kind is Kind.EXCEPTIONAL and v.self_int == -7)
    bad = LogPair.of(pair.graph.replace_vertices(replace(victim, self_int=-6)))
    report = validate_golden(A26, bad)
    assert "crepancy" in report.failed()
    crepancy_detail = next(d for name, _, d in report.checks if name == "crepancy")
    assert victim.id in crepancy_detail
    assert set(crepancy_residuals(bad)) >= {victim.id}


@pytest.mark.parametrize("case", list(ModelCase))
def test_global_extraction_order_independence(case):
    start = minimal_resolution_graph(case)
    golden = golden_graph(case).graph
    rng = random.Random(case.value)
    for _ in range(100):
        assert is_isomorphic(extract_zero_discrepancy(start, rng=rng).graph, golden)


def test_label_involution_is_involution():
    for case in ModelCase:
        s = label_involution(case)
        assert all(s[s[k]] == k for k in s)
        seg = SEGMENTS[case]
        assert all(s[k] == k for k in seg["T1"])


@pytest.mark.parametrize("case", list(ModelCase))
def test_pushforward_monotone(case):
    # contracting more curves can only raise the image self-intersection
    g = golden_graph(case).graph
    pool = [v.id for v in g if v.kind is not Kind.BOUNDARY]
    rng = random.Random(11)
    for _ in range(500):
        big = [v for v in pool if rng.random() < 0.5]
        small = [v for v in big if rng.random() < 0.5]
        for c in ("C1", "C2"):
            base = g[c].self_int
            lo = pushforward_self_intersection(g, small, c)
            hi = pushforward_self_intersection(g, big, c)
            assert base <= lo <= hi
