"""Crepant coefficients, blow-ups, blow-downs and rational pushforwards.

A :class:`LogPair` is a dual graph plus the ids of its boundary curves. The
coefficient ``d`` stored on a non-boundary vertex ``E`` is determined by
``K_Y + sum d_i D_i = f^*(K_X + B)``; for a smooth rational ``E`` adjunction
turns this into the linear equation::

    (-E^2 - 2) + d_E * E^2 + sum_{F != E} (E.F) d_F = 0

Local models whose boundary self-intersection is only meaningful up to an
unknown constant set ``relative=True``; their boundary ``self_int`` is then
the offset from the self-intersection of the image curve.
"""
from __future__ import annotations

import random
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .dual_graph import CurveVertex, DualGraph, Kind, intersection_matrix
from .exact_linalg import SingularMatrix, solve_exact

__all__ = [
    "LogPair",
    "SingularConfiguration",
    "NodalExceptional",
    "NoSuchEdge",
    "NoNode",
    "NotKlt",
    "NotMinusOne",
    "BoundaryContraction",
    "solve_coefficients",
    "crepancy_residuals",
    "blow_up_edge_point",
    "blow_up_node",
    "blowup_sites",
    "extract_zero_discrepancy",
    "contract_minus_one",
    "contract_all_minus_one",
    "pushforward_self_intersection",
    "pushforward_intersections",
]


class SingularConfiguration(ValueError):
    pass


class NodalExceptional(ValueError):
    pass


class NoSuchEdge(KeyError):
    pass


class NoNode(ValueError):
    pass


class NotKlt(ValueError):
    pass


class NotMinusOne(ValueError):
    pass


class BoundaryContraction(ValueError):
    pass


@dataclass(frozen=True)
class LogPair:
    graph: DualGraph
    boundary_ids: tuple[str, ...] = field(default=())
    relative: bool = False

    def __post_init__(self):
        ids = tuple(self.boundary_ids)
        object.__setattr__(self, "boundary_ids", ids)
        for b in ids:
            if self.graph[b].kind is not Kind.BOUNDARY:
                raise ValueError(f"boundary id {b!r} is not a boundary vertex")
        if set(ids) != set(self.graph.of_kind(Kind.BOUNDARY)):
            raise ValueError("boundary_ids must list every boundary vertex")

    @classmethod
    def of(cls, graph: DualGraph, relative: bool = False) -> LogPair:
        return cls(graph, tuple(graph.of_kind(Kind.BOUNDARY)), relative)

    def with_graph(self, graph: DualGraph) -> LogPair:
        return replace(self, graph=graph)

    def unknowns(self) -> list[str]:
        return [v.id for v in self.graph if v.kind is not Kind.BOUNDARY]


def _kind_for(coeff: Fraction) -> Kind:
    return Kind.CIRCLE if coeff == 0 else Kind.EXCEPTIONAL


def solve_coefficients(p: LogPair) -> LogPair:
    """Fill in the crepant coefficient of every non-boundary curve."""
    g = p.graph
    ids = p.unknowns()
    for vid in ids:
        if g[vid].nodes:
            raise NodalExceptional(f"{vid!r} has {g[vid].nodes} node(s); adjunction for nodal curves is not supported")
    if not ids:
        return p
    m = intersection_matrix(g, ids)
    rhs = []
    for vid in ids:
        s = g[vid].self_int
        boundary_part = sum(
            (mult * g[b].coeff for b, mult in g.neighbors(vid).items() if g[b].kind is Kind.BOUNDARY),
            Fraction(0),
        )
        rhs.append(s + 2 - boundary_part)
    try:
        d = solve_exact(m, rhs)
    except SingularMatrix as exc:
        raise SingularConfiguration(str(exc)) from None
    updated = []
    for vid, c in zip(ids, d):
        v = g[vid]
        kind = Kind.EXCEPTIONAL if v.kind is Kind.CIRCLE and c != 0 else v.kind
        updated.append(replace(v, coeff=c, kind=kind))
    return p.with_graph(g.replace_vertices(*updated))


def crepancy_residuals(p: LogPair) -> dict[str, Fraction]:
    """Left-hand side of the crepancy equation at each non-boundary curve."""
    g = p.graph
    out = {}
    for vid in p.unknowns():
        v = g[vid]
        total = -v.self_int - 2 + v.coeff * v.self_int
        for w, m in g.neighbors(vid).items():
            total += m * g[w].coeff
        out[vid] = total
    return out


def blow_up_edge_point(p: LogPair, edge: tuple[str, str], new_id: str | None = None) -> LogPair:
    """Blow up one of the intersection points of ``edge``."""
    a, b = edge
    g = p.graph
    m = g.mult(a, b)
    if a not in g or b not in g or m < 1:
        raise NoSuchEdge(edge)
    va, vb = g[a], g[b]
    coeff = va.coeff + vb.coeff - 1
    nid = new_id or g.fresh_id()
    new = CurveVertex(nid, Fraction(-1), coeff, _kind_for(coeff))
    vertices = [
        replace(v, self_int=v.self_int - 1) if v.id in (a, b) else v for v in g
    ] + [new]
    edges = dict(g.edges)
    key = (a, b) if (a, b) in edges else (b, a)
    if m == 1:
        del edges[key]
    else:
        edges[key] = m - 1
    edges[(nid, a)] = 1
    edges[(nid, b)] = 1
    return p.with_graph(DualGraph(vertices, edges))


def blow_up_node(p: LogPair, vid: str, new_id: str | None = None) -> LogPair:
    """Blow up an ordinary double point of the curve ``vid``."""
    g = p.graph
    v = g[vid]
    if v.nodes < 1:
        raise NoNode(vid)
    coeff = 2 * v.coeff - 1
    nid = new_id or g.fresh_id()
    new = CurveVertex(nid, Fraction(-1), coeff, _kind_for(coeff))
    vertices = [replace(v, self_int=v.self_int - 4, nodes=v.nodes - 1) if u.id == vid else u for u in g]
    edges = dict(g.edges)
    edges[(nid, vid)] = 2
    return p.with_graph(DualGraph(vertices + [new], edges))


# A site is ("edge", a, b) or ("node", v, v).
Site = tuple[str, str, str]


def blowup_sites(p: LogPair) -> list[Site]:
    """All blow-up sites whose exceptional curve has discrepancy <= 0,
    sorted by decreasing coefficient sum, then by vertex ids."""
    g = p.graph
    scored = []
    for (a, b), _ in g.edges.items():
        s = g[a].coeff + g[b].coeff
        if s >= 1:
            scored.append((-s, a, b, "edge"))
    for v in g:
        if v.nodes and 2 * v.coeff >= 1:
            scored.append((-2 * v.coeff, v.id, v.id, "node"))
    scored.sort()
    return [(kind, a, b) for _, a, b, kind in scored]


def extract_zero_discrepancy(
    p: LogPair,
    choose: Callable[[list[Site]], Site] | None = None,
    rng: random.Random | None = None,
) -> LogPair:
    """Blow up until no site with coefficient sum >= 1 remains.

    By default the first site of :func:`blowup_sites` is taken; ``rng`` picks
    a uniformly random one instead, ``choose`` any custom one.
    """
    bad = [v.id for v in p.graph if v.coeff >= 1]
    if bad:
        raise NotKlt(f"coefficients >= 1 on {bad}")
    if choose is None:
        choose = rng.choice if rng is not None else (lambda sites: sites[0])
    while True:
        sites = blowup_sites(p)
        if not sites:
            return p
        kind, a, b = choose(sites)
        p = blow_up_node(p, a) if kind == "node" else blow_up_edge_point(p, (a, b))


def contract_minus_one(p: LogPair, vid: str) -> LogPair:
    """Blow down the (-1)-curve ``vid``.

    Each neighbour ``u`` gains ``m(u,v)^2`` in self-intersection; ``m(u,v)``
    branches through one point create ``m(m-1)/2`` nodes on ``u``; two
    neighbours gain ``m(u,v) m(w,v)`` intersection points.
    """
    g = p.graph
    v = g[vid]
    if v.kind is Kind.BOUNDARY:
        raise BoundaryContraction(vid)
    if v.self_int != -1:
        raise NotMinusOne(f"{vid!r} has self-intersection {v.self_int}")
    nbrs = dict(g.neighbors(vid))
    vertices = []
    for u in g:
        if u.id == vid:
            continue
        if u.id in nbrs:
            m = nbrs[u.id]
            u = replace(u, self_int=u.self_int + m * m, nodes=u.nodes + m * (m - 1) // 2)
        vertices.append(u)
    edges = {e: m for e, m in g.edges.items() if vid not in e}
    items = sorted(nbrs.items())
    for i, (u, mu) in enumerate(items):
        for w, mw in items[i + 1:]:
            edges[(u, w)] = edges.get((u, w), 0) + edges.pop((w, u), 0) + mu * mw
    return p.with_graph(DualGraph(vertices, edges))


def contract_all_minus_one(p: LogPair) -> LogPair:
    """Blow down non-boundary (-1)-curves until none is left (smallest id first)."""
    while True:
        ids = sorted(v.id for v in p.graph if v.kind is not Kind.BOUNDARY and v.self_int == -1)
        if not ids:
            return p
        p = contract_minus_one(p, ids[0])


def pushforward_intersections(
    g: DualGraph, contracted: Iterable[str], keep: Sequence[str]
) -> list[list[Fraction]]:
    """Intersection matrix of the images of ``keep`` after contracting ``contracted``.

    Entry ``(a, b)`` is ``a.b - w_a^T M^{-1} w_b`` with ``M`` the intersection
    matrix of the contracted curves and ``w_x`` their intersections with ``x``.
    """
    cset = list(dict.fromkeys(contracted))
    for x in keep:
        g[x]
        if x in cset:
            raise ValueError(f"{x!r} is both kept and contracted")
    base = [[g[a].self_int if a == b else Fraction(g.mult(a, b)) for b in keep] for a in keep]
    if not cset:
        return base
    m = intersection_matrix(g, cset)
    ws = [[g.mult(x, c) for c in cset] for x in keep]
    solved = [solve_exact(m, w) if any(w) else [Fraction(0)] * len(cset) for w in ws]
    for i in range(len(keep)):
        for j in range(len(keep)):
            base[i][j] -= sum((a * b for a, b in zip(ws[i], solved[j])), Fraction(0))
    return base


def pushforward_self_intersection(g: DualGraph, contracted: Iterable[str], c: str) -> Fraction:
    """Self-intersection of the image of ``c`` after contracting ``contracted``."""
    return pushforward_intersections(g, contracted, [c])[0][0]
