import json
import random
from fractions import Fraction

import pytest

from logenriques.dual_graph import (
    CurveVertex,
    DualGraph,
    Kind,
    MalformedDocument,
    UnknownVertex,
    deserialize,
    find_isomorphisms,
    intersection_matrix,
    is_isomorphic,
    serialize,
    to_dot,
)
from logenriques.exact_linalg import det_exact
from logenriques.log_pair import extract_zero_discrepancy
from logenriques.models import (
    ModelCase,
    golden_graph,
    label_involution,
    local_model,
    minimal_resolution_graph,
)


def chain(selfs, kind=Kind.EXCEPTIONAL):
    vs = [CurveVertex(f"v{i}", s, 0, kind) for i, s in enumerate(selfs)]
    return DualGraph(vs, [(f"v{i}", f"v{i + 1}", 1) for i in range(len(selfs) - 1)])


def test_intersection_matrix_of_chain():
    g = chain([-2, -3, -2])
    m = intersection_matrix(g, ["v0", "v1", "v2"])
    assert [list(r) for r in m.entries] == [[-2, 1, 0], [1, -3, 1], [0, 1, -2]]
    assert det_exact(m) == -8


def test_multiplicity_and_nodes():
    g = DualGraph(
        [CurveVertex("a", -4, Fraction(1, 2), nodes=0), CurveVertex("b", -1, 0, Kind.CIRCLE)],
        {("a", "b"): 2},
    )
    assert g.mult("a", "b") == 2 == g.mult("b", "a")
    assert intersection_matrix(g, ["a", "b"]).entries == ((-4, 2), (2, -1))
    with pytest.raises(ValueError):
        DualGraph([CurveVertex("a", -1)], [("a", "a", 1)])
    with pytest.raises(UnknownVertex):
        DualGraph([CurveVertex("a", -1)], [("a", "z", 1)])
    with pytest.raises(ValueError):
        CurveVertex("c", -1, Fraction(1, 7), Kind.CIRCLE)


def test_graph_is_immutable():
    g = chain([-2])
    with pytest.raises(AttributeError):
        g.vertices = {}
    h = g.update_vertex("v0", self_int=-5)
    assert g["v0"].self_int == -2 and h["v0"].self_int == -5


def test_golden_automorphism_matches_label_involution():
    for case in ModelCase:
        g = golden_graph(case).graph
        sigma = label_involution(case)
        relabeled = g.replace_vertices(
            *[v.__class__(v.id, v.self_int, v.coeff, v.kind, str(sigma[int(v.label)]), v.nodes)
              for v in g if v.kind is Kind.CIRCLE]
        )
        assert is_isomorphic(g, relabeled)
        assert relabeled != g


def test_a26_and_i22_are_not_isomorphic():
    a = golden_graph(ModelCase.A26).graph
    b = golden_graph(ModelCase.I22).graph
    assert len(a) == len(b) == 47
    assert not is_isomorphic(a, b)
    strip = lambda g: g.replace_vertices(*[v.__class__(v.id, v.self_int, v.coeff, v.kind, None, v.nodes) for v in g])
    assert not is_isomorphic(strip(a), strip(b))


def test_isomorphism_after_shuffling_ids():
    rnd = random.Random(3)
    g = golden_graph(ModelCase.I22).graph
    ids = list(g.vertices)
    names = [f"x{i}" for i in range(len(ids))]
    rnd.shuffle(names)
    h = g.relabel_ids(dict(zip(ids, names)))
    iso = next(find_isomorphisms(g, h))
    for v in g:
        assert h[iso[v.id]].signature() == v.signature()
    for (a, b), m in g.edges.items():
        assert h.mult(iso[a], iso[b]) == m


def test_serialize_round_trip():
    for case in ModelCase:
        for pair in (golden_graph(case), minimal_resolution_graph(case)):
            doc = json.loads(json.dumps(serialize(pair.graph)))
            assert deserialize(doc) == pair.graph
    for name in ("z2", "z3", "nc-red", "nc-irr"):
        g = local_model(name).graph
        assert deserialize(serialize(g)) == g


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.pop("edges"),
        lambda d: d["vertices"][0].update(coeff="2/4"),
        lambda d: d["vertices"][0].update(coeff="0.5"),
        lambda d: d["vertices"][0].update(kind="nope"),
        lambda d: d["vertices"][0].pop("self_int"),
        lambda d: d["edges"].append({"a": "C1", "b": "ghost", "mult": 1}),
        lambda d: d["edges"][0].update(mult=-1),
    ],
)
def test_malformed_documents(mutate):
    doc = serialize(golden_graph(ModelCase.A26).graph)
    mutate(doc)
    with pytest.raises(MalformedDocument):
        deserialize(doc)


def test_dot_for_z2_chain():
    g = extract_zero_discrepancy(local_model("z2")).graph
    text = to_dot(g, "z2")
    node_lines = [ln for ln in text.splitlines() if "[" in ln and "label=" in ln]
    edge_lines = [ln for ln in text.splitlines() if " -- " in ln]
    assert len(node_lines) == 5
    assert len(edge_lines) == 4
    assert sum('style=""' in ln for ln in node_lines) == 1
    assert sum("shape=box" in ln for ln in node_lines) == 1


def test_dot_repeats_multiple_edges():
    g = DualGraph([CurveVertex("a", -4), CurveVertex("b", -1, 0, Kind.CIRCLE)], {("a", "b"): 2})
    assert to_dot(g).count(" -- ") == 2


def test_components_and_subgraph():
    g = golden_graph(ModelCase.A26).graph
    circles = set(g.of_kind(Kind.CIRCLE))
    rest = [v for v in g.vertices if v not in circles]
    comps = g.components(rest)
    # removing all circles leaves the two boundary curves plus the chains between circles
    assert sum(len(c) for c in comps) == len(rest)
    assert g.is_connected()
    assert not g.subgraph(rest).is_connected()
