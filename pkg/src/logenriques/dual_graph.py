"""Weighted dual graphs of curve configurations.

A vertex is a curve carrying its self-intersection number, its coefficient
``d`` in the crepant pullback (the discrepancy with opposite sign), a kind and
an optional figure label. Edges carry the number of transversal intersection
points. An ordinary double point of a curve is kept as a ``nodes`` count on
the vertex rather than as a self-loop, so the intersection matrix never
double counts it.
"""
from __future__ import annotations

import enum
import re
from collections import Counter
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, replace
from fractions import Fraction
from types import MappingProxyType

from .exact_linalg import SymMatrix, as_rational

__all__ = [
    "Kind",
    "CurveVertex",
    "DualGraph",
    "UnknownVertex",
    "MalformedDocument",
    "intersection_matrix",
    "is_isomorphic",
    "find_isomorphisms",
    "serialize",
    "deserialize",
    "to_dot",
    "format_fraction",
    "parse_fraction",
]


class UnknownVertex(KeyError):
    pass


class MalformedDocument(ValueError):
    pass


class Kind(enum.Enum):
    EXCEPTIONAL = "exceptional"
    CIRCLE = "circle"
    BOUNDARY = "boundary"


@dataclass(frozen=True)
class CurveVertex:
    id: str
    self_int: Fraction
    coeff: Fraction = Fraction(0)
    kind: Kind = Kind.EXCEPTIONAL
    label: str | None = None
    nodes: int = 0

    def __post_init__(self):
        object.__setattr__(self, "self_int", as_rational(self.self_int))
        object.__setattr__(self, "coeff", as_rational(self.coeff))
        if not isinstance(self.kind, Kind):
            object.__setattr__(self, "kind", Kind(self.kind))
        if self.kind is Kind.CIRCLE and self.coeff != 0:
            raise ValueError(f"circle {self.id!r} must have coefficient 0, got {self.coeff}")
        if self.nodes < 0:
            raise ValueError(f"negative node count on {self.id!r}")

    def signature(self) -> tuple:
        """Attributes an isomorphism has to preserve (the label is not one)."""
        return (self.self_int, self.coeff, self.kind.value, self.nodes)


def _edge_key(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


class DualGraph:
    """Immutable labeled multigraph; edits return new graphs.

    ``edges`` may be a mapping ``{(a, b): mult}`` or an iterable of
    ``(a, b, mult)`` triples; repeated pairs add up.
    """

    __slots__ = ("vertices", "edges", "_adj")

    def __init__(self, vertices: Iterable[CurveVertex] = (), edges: Iterable = ()):
        vmap: dict[str, CurveVertex] = {}
        for v in vertices:
            if v.id in vmap:
                raise ValueError(f"duplicate vertex id {v.id!r}")
            vmap[v.id] = v
        emap: dict[tuple[str, str], int] = {}
        triples = ((a, b, m) for (a, b), m in edges.items()) if isinstance(edges, Mapping) else edges
        for a, b, mult in triples:
            if a == b:
                raise ValueError(f"self-loop on {a!r}; use the nodes count instead")
            for x in (a, b):
                if x not in vmap:
                    raise UnknownVertex(x)
            if mult < 0:
                raise ValueError(f"negative multiplicity on edge {a}-{b}")
            if mult:
                key = _edge_key(a, b)
                emap[key] = emap.get(key, 0) + mult
        adj: dict[str, dict[str, int]] = {v: {} for v in vmap}
        for (a, b), m in emap.items():
            adj[a][b] = m
            adj[b][a] = m
        object.__setattr__(self, "vertices", MappingProxyType(vmap))
        object.__setattr__(self, "edges", MappingProxyType(emap))
        object.__setattr__(
            self, "_adj", MappingProxyType({v: MappingProxyType(n) for v, n in adj.items()})
        )

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self) -> Iterator[CurveVertex]:
        return iter(self.vertices.values())

    def __contains__(self, vid) -> bool:
        return vid in self.vertices

    def __getitem__(self, vid: str) -> CurveVertex:
        try:
            return self.vertices[vid]
        except KeyError:
            raise UnknownVertex(vid) from None

    def __setattr__(self, name, value):
        raise AttributeError("DualGraph is immutable")

    def __repr__(self) -> str:
        return f"DualGraph(<{len(self.vertices)} vertices, {len(self.edges)} edges>)"

    def __eq__(self, other) -> bool:
        if not isinstance(other, DualGraph):
            return NotImplemented
        return dict(self.vertices) == dict(other.vertices) and dict(self.edges) == dict(other.edges)

    __hash__ = None  # type: ignore[assignment]

    def neighbors(self, vid: str) -> Mapping[str, int]:
        if vid not in self._adj:
            raise UnknownVertex(vid)
        return self._adj[vid]

    def mult(self, a: str, b: str) -> int:
        return self._adj.get(a, {}).get(b, 0)

    def degree(self, vid: str) -> int:
        return sum(self.neighbors(vid).values())

    def by_label(self, label) -> CurveVertex:
        label = str(label)
        for v in self.vertices.values():
            if v.label == label:
                return v
        raise UnknownVertex(f"label {label}")

    def of_kind(self, kind: Kind) -> list[str]:
        return [v.id for v in self.vertices.values() if v.kind is kind]

    def edge_list(self) -> list[tuple[str, str, int]]:
        return [(a, b, m) for (a, b), m in self.edges.items()]

    def fresh_id(self, prefix: str = "b") -> str:
        k = 1
        while f"{prefix}{k}" in self.vertices:
            k += 1
        return f"{prefix}{k}"

    # functional edits ------------------------------------------------------

    def replace_vertices(self, *updated: CurveVertex) -> DualGraph:
        vmap = dict(self.vertices)
        for v in updated:
            if v.id not in vmap:
                raise UnknownVertex(v.id)
            vmap[v.id] = v
        return DualGraph(vmap.values(), self.edges)

    def update_vertex(self, vid: str, **changes) -> DualGraph:
        return self.replace_vertices(replace(self[vid], **changes))

    def subgraph(self, ids: Iterable[str]) -> DualGraph:
        keep = set(ids)
        for vid in keep:
            self[vid]
        return DualGraph(
            (v for v in self.vertices.values() if v.id in keep),
            {e: m for e, m in self.edges.items() if e[0] in keep and e[1] in keep},
        )

    def relabel_ids(self, mapping: Mapping[str, str]) -> DualGraph:
        """Rename vertex ids (labels untouched); unmapped ids are kept."""
        ren = lambda x: mapping.get(x, x)  # noqa: E731
        return DualGraph(
            (replace(v, id=ren(v.id)) for v in self.vertices.values()),
            [(ren(a), ren(b), m) for (a, b), m in self.edges.items()],
        )

    def components(self, ids: Iterable[str] | None = None) -> list[list[str]]:
        """Connected components of the subgraph induced on ``ids``."""
        pool = set(self.vertices) if ids is None else set(ids)
        seen: set[str] = set()
        out = []
        for start in self.vertices:
            if start not in pool or start in seen:
                continue
            comp = [start]
            seen.add(start)
            stack = [start]
            while stack:
                u = stack.pop()
                for w in self._adj[u]:
                    if w in pool and w not in seen:
                        seen.add(w)
                        comp.append(w)
                        stack.append(w)
            out.append(comp)
        return out

    def is_connected(self) -> bool:
        return len(self.components()) <= 1


def intersection_matrix(g: DualGraph, subset: Sequence[str]) -> SymMatrix:
    """Intersection matrix of the curves ``subset`` in the given order."""
    ids = list(subset)
    if len(set(ids)) != len(ids):
        raise ValueError("subset contains repeated ids")
    for vid in ids:
        g[vid]
    rows = []
    for a in ids:
        adj = g.neighbors(a)
        rows.append([g[a].self_int if a == b else adj.get(b, 0) for b in ids])
    return SymMatrix(rows)


# isomorphism ---------------------------------------------------------------


def _refined_colors(g: DualGraph) -> dict[str, int]:
    """Colour refinement on vertex signatures and weighted neighbourhoods."""
    sig = {v.id: v.signature() for v in g}
    palette = {s: i for i, s in enumerate(sorted(set(sig.values()), key=repr))}
    colors = {vid: palette[s] for vid, s in sig.items()}
    while True:
        keys = {
            vid: (colors[vid], tuple(sorted((colors[w], m) for w, m in g.neighbors(vid).items())))
            for vid in colors
        }
        palette = {k: i for i, k in enumerate(sorted(set(keys.values())))}
        new = {vid: palette[k] for vid, k in keys.items()}
        if len(palette) == len(set(colors.values())):
            return new
        colors = new


def _joint_colors(g1: DualGraph, g2: DualGraph) -> tuple[dict, dict] | None:
    """Refine both graphs with a shared palette so colours are comparable."""
    tag1 = {v.id: ("L", v.id) for v in g1}
    tag2 = {v.id: ("R", v.id) for v in g2}
    union = DualGraph(
        [replace(v, id=repr(tag1[v.id])) for v in g1] + [replace(v, id=repr(tag2[v.id])) for v in g2],
        [(repr(tag1[a]), repr(tag1[b]), m) for (a, b), m in g1.edges.items()]
        + [(repr(tag2[a]), repr(tag2[b]), m) for (a, b), m in g2.edges.items()],
    )
    colors = _refined_colors(union)
    c1 = {vid: colors[repr(t)] for vid, t in tag1.items()}
    c2 = {vid: colors[repr(t)] for vid, t in tag2.items()}
    if Counter(c1.values()) != Counter(c2.values()):
        return None
    return c1, c2


def find_isomorphisms(g1: DualGraph, g2: DualGraph, limit: int | None = None) -> Iterator[dict[str, str]]:
    """Yield vertex bijections ``g1 -> g2`` preserving attributes and multiplicities.

    Backtracking over colour classes from joint colour refinement. Labels are
    ignored.
    """
    if len(g1) != len(g2) or len(g1.edges) != len(g2.edges):
        return
    joint = _joint_colors(g1, g2)
    if joint is None:
        return
    c1, c2 = joint
    by_color: dict[int, list[str]] = {}
    for vid, c in c2.items():
        by_color.setdefault(c, []).append(vid)

    # most constrained first, then breadth-first so each new vertex has a mapped neighbour
    order: list[str] = []
    placed: set[str] = set()
    remaining = sorted(g1.vertices, key=lambda v: (len(by_color[c1[v]]), v))
    while remaining:
        start = remaining[0]
        queue = [start]
        placed.add(start)
        while queue:
            u = queue.pop(0)
            order.append(u)
            for w in sorted(g1.neighbors(u), key=lambda v: (len(by_color[c1[v]]), v)):
                if w not in placed:
                    placed.add(w)
                    queue.append(w)
        remaining = [v for v in remaining if v not in placed]

    mapping: dict[str, str] = {}
    used: set[str] = set()
    found = 0

    def consistent(u: str, x: str) -> bool:
        nu = g1.neighbors(u)
        nx = g2.neighbors(x)
        for w, m in nu.items():
            if w in mapping and nx.get(mapping[w], 0) != m:
                return False
        # x may not touch mapped vertices that u does not touch
        return sum(1 for w in nu if w in mapping) == sum(1 for y in nx if y in used)

    def search(i: int):
        nonlocal found
        if i == len(order):
            found += 1
            yield dict(mapping)
            return
        u = order[i]
        for x in by_color[c1[u]]:
            if x in used or not consistent(u, x):
                continue
            mapping[u] = x
            used.add(x)
            yield from search(i + 1)
            del mapping[u]
            used.discard(x)
            if limit is not None and found >= limit:
                return

    yield from search(0)


def is_isomorphic(g1: DualGraph, g2: DualGraph) -> bool:
    return next(find_isomorphisms(g1, g2, limit=1), None) is not None


# serialization ---------------------------------------------------------------

_FRACTION_RE = re.compile(r"^-?(0|[1-9][0-9]*)(/[1-9][0-9]*)?$")


def format_fraction(x: Fraction) -> str:
    return str(Fraction(x))


def parse_fraction(text: str) -> Fraction:
    """Parse a reduced ``"p/q"`` or integer string; anything else is malformed."""
    if not isinstance(text, str) or not _FRACTION_RE.match(text):
        raise MalformedDocument(f"invalid fraction string {text!r}")
    value = Fraction(text)
    if str(value) != text:
        raise MalformedDocument(f"fraction {text!r} is not in lowest terms")
    return value


def serialize(g: DualGraph) -> dict:
    """JSON-compatible document; vertex and edge order follow the graph."""
    return {
        "vertices": [
            {
                "id": v.id,
                "self_int": format_fraction(v.self_int),
                "coeff": format_fraction(v.coeff),
                "kind": v.kind.value,
                "label": v.label,
                "nodes": v.nodes,
            }
            for v in g
        ],
        "edges": [{"a": a, "b": b, "mult": m} for (a, b), m in g.edges.items()],
    }


def deserialize(doc: Mapping) -> DualGraph:
    try:
        raw_vertices = doc["vertices"]
        raw_edges = doc["edges"]
    except (KeyError, TypeError) as exc:
        raise MalformedDocument(f"missing top-level field: {exc}") from None
    vertices = []
    for item in raw_vertices:
        try:
            vid, si, co, kind, label, nodes = (
                item[k] for k in ("id", "self_int", "coeff", "kind", "label", "nodes")
            )
        except (KeyError, TypeError) as exc:
            raise MalformedDocument(f"vertex missing field {exc}") from None
        if not isinstance(vid, str) or not (label is None or isinstance(label, str)):
            raise MalformedDocument(f"bad id or label in {item!r}")
        if not isinstance(nodes, int) or isinstance(nodes, bool) or nodes < 0:
            raise MalformedDocument(f"bad nodes value in {item!r}")
        try:
            kind = Kind(kind)
            vertices.append(CurveVertex(vid, parse_fraction(si), parse_fraction(co), kind, label, nodes))
        except ValueError as exc:
            raise MalformedDocument(str(exc)) from None
    ids = {v.id for v in vertices}
    edges = []
    for item in raw_edges:
        try:
            a, b, m = item["a"], item["b"], item["mult"]
        except (KeyError, TypeError) as exc:
            raise MalformedDocument(f"edge missing field {exc}") from None
        if a not in ids or b not in ids:
            raise MalformedDocument(f"edge {a!r}-{b!r} references an unknown vertex")
        if not isinstance(m, int) or isinstance(m, bool) or m < 1:
            raise MalformedDocument(f"bad multiplicity in {item!r}")
        edges.append((a, b, m))
    try:
        return DualGraph(vertices, edges)
    except ValueError as exc:
        raise MalformedDocument(str(exc)) from None


# DOT ---------------------------------------------------------------------------

_DOT_STYLE = {
    Kind.CIRCLE: 'shape=circle, style=""',
    Kind.BOUNDARY: "shape=box",
    Kind.EXCEPTIONAL: "shape=circle, style=filled, fillcolor=black, fontcolor=white",
}


def _dot_id(vid: str) -> str:
    return '"' + vid.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: DualGraph, name: str = "G") -> str:
    """Render in the drawing conventions of the figures.

    Hollow circles are discrepancy-zero curves, boxes the boundary, filled
    discs the other exceptional curves. Each node shows ``self_int`` over
    ``coeff`` (and the figure label when present).
    """
    lines = [f"graph {_dot_id(name)} {{", "  node [fontsize=10];"]
    for v in g:
        text = f"{format_fraction(v.self_int)}\\n{format_fraction(v.coeff)}"
        if v.label is not None:
            text = f"{v.label}\\n" + text
        if v.nodes:
            text += f"\\nnodes={v.nodes}"
        lines.append(f'  {_dot_id(v.id)} [{_DOT_STYLE[v.kind]}, label="{text}"];')
    for (a, b), m in g.edges.items():
        for _ in range(m):
            lines.append(f"  {_dot_id(a)} -- {_dot_id(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
