"""The two model pairs on P(1,2,3), their local pieces, and the golden graphs.

The golden graphs are transcribed by hand from the two 15-circle figures.
:func:`maximal_extraction` recomputes them from the minimal resolution, so
the transcription and the blow-up algorithm check each other.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache

from .dual_graph import CurveVertex, DualGraph, Kind, find_isomorphisms, is_isomorphic
from .log_pair import (
    LogPair,
    contract_all_minus_one,
    crepancy_residuals,
    extract_zero_discrepancy,
    pushforward_self_intersection,
    solve_coefficients,
)

__all__ = [
    "ModelCase",
    "GoldenMismatch",
    "BOUNDARY_COEFF",
    "LOCAL_MODELS",
    "local_model",
    "minimal_resolution_graph",
    "golden_graph",
    "maximal_extraction",
    "validate_golden",
    "ValidationReport",
    "label_involution",
    "SEGMENTS",
]

BOUNDARY_COEFF = Fraction(6, 7)


class ModelCase(enum.Enum):
    A26 = "a26"
    I22 = "i22"


class GoldenMismatch(AssertionError):
    pass


# -- geometry of the models -------------------------------------------------
#
# For each boundary curve: self-intersection on P(1,2,3), the quotient
# singularities it passes through, and its node count. "A1" is the Z2(1,1)
# point, "A2" the Z3(1,2) point (the curve meets one end of the A2 chain).

@dataclass(frozen=True)
class _CurveData:
    self_int: Fraction
    through: tuple[str, ...]
    nodes: int = 0


@dataclass(frozen=True)
class _ModelData:
    curves: dict[str, _CurveData]
    meeting: int  # C1.C2, all points transversal and smooth


_MODELS = {
    ModelCase.A26: _ModelData(
        {
            "C1": _CurveData(Fraction(1, 6), ("A1", "A2")),
            "C2": _CurveData(Fraction(6), (), nodes=1),
        },
        meeting=1,
    ),
    ModelCase.I22: _ModelData(
        {
            "C1": _CurveData(Fraction(3, 2), ("A1",)),
            "C2": _CurveData(Fraction(8, 3), ("A2",)),
        },
        meeting=2,
    ),
}


def _resolve(curves: dict[str, _CurveData], meeting: dict[tuple[str, str], int], relative: bool) -> LogPair:
    """Minimal resolution of the quotient points on the given boundary curves.

    Boundary self-intersections are pulled back to the resolution exactly:
    ``C_Y^2 = C_X^2 - (C_X^2 - push(C_Y))``, i.e. we subtract whatever the
    pushforward adds back.
    """
    vertices = [
        CurveVertex(name, Fraction(0), BOUNDARY_COEFF, Kind.BOUNDARY, name, data.nodes)
        for name, data in curves.items()
    ]
    edges = [(a, b, m) for (a, b), m in meeting.items()]
    exceptional = []
    for name, data in curves.items():
        for point in data.through:
            if point == "A1":
                vertices.append(CurveVertex("a1", -2))
                edges.append(("a1", name, 1))
                exceptional.append("a1")
            elif point == "A2":
                vertices += [CurveVertex("a2_1", -2), CurveVertex("a2_2", -2)]
                edges += [("a2_1", "a2_2", 1), ("a2_2", name, 1)]
                exceptional += ["a2_1", "a2_2"]
            else:
                raise ValueError(point)
    g = DualGraph(vertices, edges)
    fixed = []
    for name, data in curves.items():
        shift = pushforward_self_intersection(g, exceptional, name)
        fixed.append(replace(g[name], self_int=data.self_int - shift))
    return solve_coefficients(LogPair.of(g.replace_vertices(*fixed), relative=relative))


# Local models: boundary self-intersections are offsets from C^2 downstairs.
LOCAL_MODELS = ("z2", "z3", "nc-red", "nc-irr")


def local_model(name: str) -> LogPair:
    """Minimal resolution of one of the four local pairs.

    ``z2``: (C^2, 6/7 {x=0}) / Z2(1,1); ``z3``: the same over Z3(1,2);
    ``nc-red``: two transversal boundary branches; ``nc-irr``: one boundary
    curve with an ordinary double point.
    """
    zero = Fraction(0)
    if name == "z2":
        return _resolve({"C": _CurveData(zero, ("A1",))}, {}, relative=True)
    if name == "z3":
        return _resolve({"C": _CurveData(zero, ("A2",))}, {}, relative=True)
    if name == "nc-red":
        return _resolve({"C1": _CurveData(zero, ()), "C2": _CurveData(zero, ())}, {("C1", "C2"): 1}, relative=True)
    if name == "nc-irr":
        return _resolve({"C": _CurveData(zero, (), nodes=1)}, {}, relative=True)
    raise ValueError(f"unknown local model {name!r}; expected one of {LOCAL_MODELS}")


@lru_cache(maxsize=None)
def minimal_resolution_graph(case: ModelCase) -> LogPair:
    data = _MODELS[ModelCase(case)]
    return _resolve(data.curves, {("C1", "C2"): data.meeting}, relative=False)


# -- golden transcriptions ----------------------------------------------------
#
# Each line is a path through the figure. Tokens: C1/C2 (boundary, -14),
# tN (circle N, self-int -1, coefficient 0), s:d (exceptional curve with
# self-intersection s and coefficient d).

_CROSS = "-2:1/7 -2:2/7 -3:3/7 t{0} -4:4/7 -2:2/7 t{1} -7:5/7 t{2} -2:2/7 -4:4/7 t{3} -3:3/7 -2:2/7 -2:1/7"
_Z2_CHAIN = "-2:1/7 -2:2/7 -3:3/7"
_Z3_CHAIN = "-2:1/7 -2:2/7 -3:3/7 t{0} -4:4/7 -2:2/7"

_GOLDEN_PATHS = {
    ModelCase.A26: [
        f"C1 t1 {_Z2_CHAIN}",
        f"C1 t2 {_Z3_CHAIN.format(3)}",
        f"C1 t4 {_CROSS.format(5, 6, 7, 8)} t9 C2",
        f"C2 t10 {_CROSS.format(11, 12, 13, 14)} t15 C2",
    ],
    ModelCase.I22: [
        f"C1 t1 {_Z2_CHAIN}",
        f"C2 t2 {_Z3_CHAIN.format(3)}",
        f"C1 t4 {_CROSS.format(5, 6, 7, 8)} t9 C2",
        f"C1 t10 {_CROSS.format(11, 12, 13, 14)} t15 C2",
    ],
}

# Which circles sit on which piece of the configuration.
SEGMENTS = {
    ModelCase.A26: {"T1": (1, 2, 3), "T2": (4, 5, 6, 7, 8, 9), "T3": (10, 11, 12, 13, 14, 15)},
    ModelCase.I22: {"T1": (1, 2, 3), "T2": (4, 5, 6, 7, 8, 9), "T3": (10, 11, 12, 13, 14, 15)},
}


def _parse_golden(paths: list[str]) -> DualGraph:
    vertices: dict[str, CurveVertex] = {}
    edges: list[tuple[str, str, int]] = []
    counter = 0
    for path in paths:
        prev = None
        for tok in path.split():
            if tok in ("C1", "C2"):
                vid = tok
                vertices.setdefault(vid, CurveVertex(vid, -14, BOUNDARY_COEFF, Kind.BOUNDARY, tok))
            elif tok.startswith("t"):
                vid = tok
                if vid in vertices:
                    raise ValueError(f"circle {tok} transcribed twice")
                vertices[vid] = CurveVertex(vid, -1, 0, Kind.CIRCLE, tok[1:])
            else:
                s, d = tok.split(":")
                counter += 1
                vid = f"e{counter}"
                vertices[vid] = CurveVertex(vid, int(s), Fraction(d), Kind.EXCEPTIONAL)
            if prev is not None:
                edges.append((prev, vid, 1))
            prev = vid
    return DualGraph(vertices.values(), edges)


@lru_cache(maxsize=None)
def golden_graph(case: ModelCase) -> LogPair:
    return LogPair.of(_parse_golden(_GOLDEN_PATHS[ModelCase(case)]))


def label_involution(case: ModelCase) -> dict[int, int]:
    """The symmetry of the circle labels induced by a graph automorphism."""
    case = ModelCase(case)
    sigma = {k: k for k in range(1, 16)}
    if case is ModelCase.A26:
        sigma.update({10: 15, 15: 10, 11: 14, 14: 11, 12: 13, 13: 12})
    else:
        for k in range(4, 10):
            sigma[k], sigma[k + 6] = k + 6, k
    return sigma


def _label_key(label: str | None) -> tuple:
    if label is None:
        return (2, "")
    return (0, int(label)) if label.isdigit() else (1, label)


@lru_cache(maxsize=None)
def maximal_extraction(case: ModelCase) -> LogPair:
    """Extract every discrepancy-zero curve and attach the figure labels."""
    case = ModelCase(case)
    computed = extract_zero_discrepancy(minimal_resolution_graph(case))
    golden = golden_graph(case).graph
    best = None
    for iso in find_isomorphisms(computed.graph, golden):
        key = tuple(_label_key(golden[iso[vid]].label) for vid in sorted(computed.graph.vertices))
        if best is None or key < best[0]:
            best = (key, iso)
    if best is None:
        raise GoldenMismatch(f"extraction of {case.value} is not isomorphic to its golden graph")
    iso = best[1]
    labeled = [replace(v, label=golden[iso[v.id]].label) for v in computed.graph]
    return computed.with_graph(computed.graph.replace_vertices(*labeled))


# -- validation ----------------------------------------------------------------


@dataclass
class ValidationReport:
    case: ModelCase
    checks: list[tuple[str, bool, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(passed for _, passed, _ in self.checks)

    def failed(self) -> list[str]:
        return [name for name, passed, _ in self.checks if not passed]

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append((name, bool(passed), detail))

    def __str__(self) -> str:
        lines = [f"golden graph {self.case.value}:"]
        for name, passed, detail in self.checks:
            lines.append(f"  [{'PASS' if passed else 'FAIL'}] {name}" + (f": {detail}" if detail else ""))
        return "\n".join(lines)


def validate_golden(case: ModelCase, pair: LogPair | None = None) -> ValidationReport:
    """Consistency checks on a golden graph (the embedded one by default)."""
    case = ModelCase(case)
    pair = golden_graph(case) if pair is None else pair
    g = pair.graph
    report = ValidationReport(case)

    bad = {vid: r for vid, r in crepancy_residuals(pair).items() if r != 0}
    report.add("crepancy", not bad, ", ".join(f"{vid} residual {r}" for vid, r in sorted(bad.items())))

    circles = [v for v in g if v.kind is Kind.CIRCLE]
    wrong = [v.id for v in circles if (v.self_int, v.coeff) != (-1, 0)]
    labels = sorted(int(v.label) for v in circles if v.label and v.label.isdigit())
    report.add(
        "circles",
        not wrong and labels == list(range(1, 16)),
        f"{len(circles)} circles, labels {labels}" + (f", wrong weights on {wrong}" if wrong else ""),
    )

    boundary = {b: g[b].self_int for b in pair.boundary_ids}
    report.add(
        "boundary -14",
        all(s == -14 for s in boundary.values()) and len(boundary) == 2,
        ", ".join(f"{b}^2 = {s}" for b, s in boundary.items()),
    )

    down = contract_all_minus_one(pair)
    report.add(
        "blow-down",
        is_isomorphic(down.graph, minimal_resolution_graph(case).graph),
        f"{len(down.graph)} vertices after contracting (-1)-curves",
    )

    nonint = [v.id for v in g if (7 * v.coeff).denominator != 1]
    report.add("index 7", not nonint, ", ".join(nonint))
    return report
