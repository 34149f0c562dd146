"""Subsets of the fifteen discrepancy-zero circles and their classification.

A subset ``T`` of circle labels keeps those circles and contracts everything
else on the maximal extraction, boundary curves included. The surface exists
iff that contracted set is negative definite. The two classification
theorems are encoded as explicit decision tables and compared with this
brute-force verdict over all 2**15 subsets.
"""
from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .dual_graph import Kind, intersection_matrix
from .exact_linalg import SymMatrix, is_negative_definite, negative_definite_sparse
from .log_pair import pushforward_intersections
from .models import ModelCase, golden_graph, label_involution

__all__ = [
    "SubsetT",
    "CatalogRecord",
    "is_valid_surface",
    "full_matrix_verdict",
    "two_stage_verdict",
    "rho_and_rank",
    "theorem_predicate_A26",
    "theorem_predicate_I22",
    "explain_A26",
    "explain_I22",
    "DEFAULT_READINGS",
    "ALTERNATIVE_READINGS",
    "apply_sigma",
    "canonical_mask",
    "enumerate_catalog",
    "catalog_summary",
    "verify_theorem",
    "VerificationReport",
    "ALL_MASKS",
]

ALL_LABELS = tuple(range(1, 16))
ALL_MASKS = range(1 << 15)


@dataclass(frozen=True, order=True)
class SubsetT:
    """A set of circle labels stored as a bitmask (bit ``k-1`` is label ``k``)."""

    mask: int

    def __post_init__(self):
        if not 0 <= self.mask < 1 << 15:
            raise ValueError(f"mask {self.mask} out of range")

    @classmethod
    def of(cls, labels: Iterable[int]) -> SubsetT:
        mask = 0
        for k in labels:
            if not 1 <= k <= 15:
                raise ValueError(f"circle label {k} not in 1..15")
            mask |= 1 << (k - 1)
        return cls(mask)

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(k for k in ALL_LABELS if self.mask >> (k - 1) & 1)

    def part(self, i: int) -> tuple[int, ...]:
        lo, hi = {1: (1, 3), 2: (4, 9), 3: (10, 15)}[i]
        return tuple(k for k in self.members if lo <= k <= hi)

    @property
    def T1(self) -> tuple[int, ...]:
        return self.part(1)

    @property
    def T2(self) -> tuple[int, ...]:
        return self.part(2)

    @property
    def T3(self) -> tuple[int, ...]:
        return self.part(3)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __contains__(self, k: int) -> bool:
        return bool(self.mask >> (k - 1) & 1) if 1 <= k <= 15 else False

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.members)) + "}"


def _min(part: tuple[int, ...]) -> int | None:
    return part[0] if part else None


def _max(part: tuple[int, ...]) -> int | None:
    return part[-1] if part else None


def apply_sigma(case: ModelCase, t: SubsetT) -> SubsetT:
    sigma = label_involution(case)
    return SubsetT.of(sigma[k] for k in t.members)


def canonical_mask(case: ModelCase, t: SubsetT) -> int:
    return min(t.mask, apply_sigma(case, t).mask)


# -- the brute-force oracle ----------------------------------------------------


@dataclass(frozen=True)
class _Context:
    ids: tuple[str, ...]
    circle_of: dict[int, str]
    rows: dict[str, dict[str, int]]
    order: tuple[str, ...]
    nonboundary: tuple[str, ...]


def _elimination_order(rows: dict[str, dict[str, int]], last: tuple[str, ...]) -> list[str]:
    """Greedy minimum-degree order over non-boundary vertices, boundary last."""
    adj = {v: {w for w in nb if w != v} for v, nb in rows.items()}
    order = []
    pool = set(adj) - set(last)
    while pool:
        v = min(pool, key=lambda x: (len(adj[x]), x))
        nb = adj.pop(v)
        for a in nb:
            adj[a].discard(v)
            adj[a] |= nb - {a}
        pool.discard(v)
        order.append(v)
    return order + list(last)


@lru_cache(maxsize=None)
def _context(case: ModelCase) -> _Context:
    pair = golden_graph(case)
    g = pair.graph
    rows = {}
    for v in g:
        assert v.self_int.denominator == 1
        row = {v.id: int(v.self_int)}
        row.update(g.neighbors(v.id))
        rows[v.id] = row
    circle_of = {int(v.label): v.id for v in g if v.kind is Kind.CIRCLE}
    return _Context(
        ids=tuple(g.vertices),
        circle_of=circle_of,
        rows=rows,
        order=tuple(_elimination_order(rows, tuple(pair.boundary_ids))),
        nonboundary=tuple(pair.unknowns()),
    )


def _contracted(ctx: _Context, t: SubsetT) -> set[str]:
    kept = {ctx.circle_of[k] for k in t.members}
    return set(ctx.ids) - kept


def full_matrix_verdict(case: ModelCase, t: SubsetT) -> bool:
    """Negative definiteness of the whole contracted configuration."""
    ctx = _context(ModelCase(case))
    keep = _contracted(ctx, t)
    rows = {v: {w: x for w, x in ctx.rows[v].items() if w in keep} for v in keep}
    return negative_definite_sparse(rows, [v for v in ctx.order if v in keep])


def dense_full_matrix_verdict(case: ModelCase, t: SubsetT) -> bool:
    """Same verdict via a dense intersection matrix and leading minors (slow)."""
    ctx = _context(ModelCase(case))
    keep = _contracted(ctx, t)
    g = golden_graph(case).graph
    return is_negative_definite(intersection_matrix(g, [v for v in ctx.ids if v in keep]))


@lru_cache(maxsize=None)
def _component_correction(case: ModelCase, comp: frozenset[str]) -> tuple[Fraction, Fraction, Fraction]:
    """``w_i^T M^{-1} w_j`` for one contracted component and (C1, C2)."""
    g = golden_graph(case).graph
    ids = sorted(comp)
    if not is_negative_definite(intersection_matrix(g, ids)):
        raise AssertionError(f"non-boundary component {ids} is not contractible")
    push = pushforward_intersections(g, ids, ["C1", "C2"])
    return (
        g["C1"].self_int - push[0][0],
        g.mult("C1", "C2") - push[0][1],
        g["C2"].self_int - push[1][1],
    )


def _boundary_after_contraction(case: ModelCase, t: SubsetT) -> tuple[Fraction, Fraction, Fraction]:
    """(C1^2, C1.C2, C2^2) once everything non-boundary outside ``t`` is contracted."""
    ctx = _context(case)
    g = golden_graph(case).graph
    keep = _contracted(ctx, t) - {"C1", "C2"}
    c11, c12, c22 = g["C1"].self_int, Fraction(g.mult("C1", "C2")), g["C2"].self_int
    for comp in g.components(keep):
        r11, r12, r22 = _component_correction(case, frozenset(comp))
        c11 -= r11
        c12 -= r12
        c22 -= r22
    return c11, c12, c22


def two_stage_verdict(case: ModelCase, t: SubsetT) -> tuple[bool, str | None, Fraction, Fraction, Fraction]:
    """Contract the non-boundary part first, then test the 2x2 boundary block."""
    case = ModelCase(case)
    c11, c12, c22 = _boundary_after_contraction(case, t)
    if c11 >= 0:
        reason = "C1NotNegative"
    elif c22 >= 0:
        reason = "C2NotNegative"
    elif not is_negative_definite(SymMatrix([[c11, c12], [c12, c22]])):
        reason = "PairNotNegativeDefinite"
    else:
        reason = None
    return reason is None, reason, c11, c12, c22


def rho_and_rank(t: SubsetT) -> tuple[int, int]:
    """Picard rank of S and rank of the K3-cover exceptional lattice."""
    return len(t) - 1, 17 - len(t)


@dataclass(frozen=True)
class CatalogRecord:
    case: ModelCase
    t: SubsetT
    valid: bool
    reason: str | None
    c1_sq: Fraction
    c2_sq: Fraction
    c12: Fraction
    rho: int | None
    rank_delta: int | None

    def to_json(self) -> dict:
        return {
            "t": list(self.t.members),
            "valid": self.valid,
            "reason": self.reason,
            "c1_sq": str(self.c1_sq),
            "c2_sq": str(self.c2_sq),
            "rho": self.rho,
            "rank_delta": self.rank_delta,
        }


def is_valid_surface(case: ModelCase, t: SubsetT) -> CatalogRecord:
    case = ModelCase(case)
    valid = full_matrix_verdict(case, t)
    ok2, reason, c11, c12, c22 = two_stage_verdict(case, t)
    if ok2 != valid:
        raise AssertionError(f"criteria disagree on {case.value} {t}")
    rho, rank = rho_and_rank(t) if valid else (None, None)
    return CatalogRecord(case, t, valid, reason, c11, c22, c12, rho, rank)


# -- the classification theorems -------------------------------------------------
#
# Each reading key names a clause whose printed form needs an erratum; the
# first candidate in ALTERNATIVE_READINGS is the default.

ALTERNATIVE_READINGS = {
    # A26 cond (8) is printed with the undefined symbol "T_4 = 4".
    "a26_cond8": ("T3_size_4", "absent_means_invalid", "absent_means_arbitrary"),
    # A26 cond (1), second sentence; "weakened" drops it (fault injection only).
    "a26_cond1": ("as_printed", "weakened"),
    # I22 cond (3), third alternative: "4 in T2 cap {8,9} != empty".
    "i22_cond3": ("4_in_T2_and_meets_89", "4_in_T2_or_meets_89", "literal_never"),
    # I22 cond (4), T1 = {1,3}: "T2 cap {8,9}" with the relation missing.
    "i22_cond4": ("meets_89", "misses_89"),
    # I22 condition Upsilon_2, first alternative: "(max T2 = 4, T_3 = 15)".
    "i22_upsilon2": ("max_T3_is_15", "min_T3_is_15", "literal_never"),
}

DEFAULT_READINGS = {k: v[0] for k, v in ALTERNATIVE_READINGS.items()}


def _readings(overrides: dict | None) -> dict:
    if not overrides:
        return DEFAULT_READINGS
    r = dict(DEFAULT_READINGS)
    unknown = set(overrides) - set(r)
    if unknown:
        raise KeyError(f"unknown readings {sorted(unknown)}")
    for key, value in overrides.items():
        if value not in ALTERNATIVE_READINGS[key]:
            raise ValueError(f"reading {key}={value!r}; expected one of {ALTERNATIVE_READINGS[key]}")
    r.update(overrides)
    return r


_SIGMA_A26 = label_involution(ModelCase.A26)


def explain_A26(t: SubsetT, readings: dict | None = None) -> tuple[bool, str]:
    """Evaluate the A26 theorem; returns (verdict, clause that decided it)."""
    r = _readings(readings)
    T1, T2 = t.T1, t.T2
    # T3 up to the loop reversal: take the representative with the smaller bitmask
    T3 = min(t.T3, tuple(sorted(_SIGMA_A26[k] for k in t.T3)), key=lambda p: sum(1 << k for k in p))
    S3 = set(T3)
    n2, n3 = len(T2), len(T3)

    if not (len(T1) + n2 >= 1 and n3 >= 1):
        return False, "(1) T1+T2>=1 and T3>=1"
    if r["a26_cond1"] == "as_printed" and not T1 and T2 == (9,):
        return False, "(1) T1=0 => T2!={9}"
    max2 = _max(T2)
    if n2 == 0 and n3 == 1:
        return 10 in S3, "(2)"
    if n2 >= 1 and n3 == 1:
        if max2 <= 6:
            return 10 in S3, "(3) max T2<=6"
        if max2 == 7:
            return bool({10, 11} & S3), "(3) max T2=7"
        return True, "(3) max T2 in {8,9}"
    if n2 == 0 and n3 == 2:
        return 10 in S3 or (T3 == (11, 14) and T1 != (3,)), "(4)"
    if n2 >= 1 and n3 == 2:
        ok = (
            10 in S3
            or T3 == (11, 14)
            or (T3 == (11, 13) and max2 >= 5)
            or (T3 == (11, 12) and bool({7, 8, 9} & set(T2)))
            or (T3 == (12, 13) and bool({8, 9} & set(T2)))
        )
        return ok, "(5)"
    if n2 == 0 and n3 == 3:
        return 10 in S3 or (T3 == (11, 12, 14) and T1 != (3,)), "(6)"
    if n2 >= 1 and n3 == 3:
        return 10 in S3 or T3 == (11, 12, 14) or (T3 == (11, 12, 13) and max2 >= 5), "(7)"
    if n2 == 0 and n3 == 4:
        mode = r["a26_cond8"]
        if mode == "T3_size_4":
            return 10 in S3 or (T3 == (11, 12, 13, 14) and T1 != (3,)), "(8)"
        return mode == "absent_means_arbitrary", f"(8) unreadable, {mode}"
    return True, "(9)"


def _upsilon1(T2, T3) -> bool:
    m2, m3 = _min(T2), _min(T3)
    return m2 <= 5 or (m2 == 6 and m3 <= 14) or (7 <= m2 <= 8 and m3 <= 12) or (m2 == 9 and m3 <= 11)


def _upsilon2(T2, T3, mode: str) -> bool:
    M2, M3 = _max(T2), _max(T3)
    if M2 == 4:
        if mode == "max_T3_is_15":
            first = M3 == 15
        elif mode == "min_T3_is_15":
            first = _min(T3) == 15
        else:
            first = False
        return first
    return (5 <= M2 <= 7 and M3 >= 14) or (M2 == 8 and M3 >= 11) or M2 == 9


def _upsilon3(T2, T3) -> bool:
    M2, M3 = _max(T2), _max(T3)
    return (M2 == 4 and M3 >= 14) or (5 <= M2 <= 6 and M3 >= 13) or (M2 == 7 and M3 >= 11) or M2 >= 8


def explain_I22(t: SubsetT, readings: dict | None = None) -> tuple[bool, str]:
    """Evaluate the I22 theorem; returns (verdict, clause that decided it)."""
    r = _readings(readings)
    if not t.T2 and t.T3:
        t = apply_sigma(ModelCase.I22, t)
    T1, T2, T3 = t.T1, t.T2, t.T3
    S1, S2 = set(T1), set(T2)
    if not T2 and not T3:
        return False, "(1) T2+T3>=1"
    if not T3:
        if not T1:
            return _min(T2) <= 5 and 9 in S2, "(2)"
        if len(T1) == 1:
            if T1 == (1,):
                return 9 in S2, "(3) T1={1}"
            if T1 == (2,):
                return _min(T2) <= 5, "(3) T1={2}"
            mode = r["i22_cond3"]
            if mode == "4_in_T2_and_meets_89":
                third = 4 in S2 and bool(S2 & {8, 9})
            elif mode == "4_in_T2_or_meets_89":
                third = 4 in S2 or bool(S2 & {8, 9})
            else:
                third = False
            return third or {5, 9} <= S2, "(3) T1={3}"
        if len(T1) == 2:
            if T1 == (1, 2):
                return True, "(4) T1={1,2}"
            if T1 == (1, 3):
                meets = bool(S2 & {8, 9})
                return meets if r["i22_cond4"] == "meets_89" else not meets, "(4) T1={1,3}"
            return _min(T2) <= 5, "(4) T1={2,3}"
        return True, "(5)"
    mode2 = r["i22_upsilon2"]
    if not S1:
        return _upsilon1(T2, T3) and _upsilon2(T2, T3, mode2), "(6) Y1 and Y2"
    if T1 == (1,):
        return _upsilon2(T2, T3, mode2), "(7) Y2"
    if {1, 2} <= S1:
        return True, "(10)"
    if 2 in S1:
        return _upsilon1(T2, T3), "(8) Y1"
    if T1 == (3,):
        return _upsilon1(T2, T3) and _upsilon3(T2, T3), "(9) Y1 and Y3"
    return _upsilon3(T2, T3), "(11) Y3"


def theorem_predicate_A26(t: SubsetT, readings: dict | None = None) -> bool:
    return explain_A26(t, readings)[0]


def theorem_predicate_I22(t: SubsetT, readings: dict | None = None) -> bool:
    return explain_I22(t, readings)[0]


_EXPLAIN = {ModelCase.A26: explain_A26, ModelCase.I22: explain_I22}
_CASE_READINGS = {
    ModelCase.A26: ("a26_cond8",),
    ModelCase.I22: ("i22_cond3", "i22_cond4", "i22_upsilon2"),
}


# -- drivers ---------------------------------------------------------------------


def enumerate_catalog(case: ModelCase) -> list[CatalogRecord]:
    """Every subset, ordered by bitmask."""
    case = ModelCase(case)
    return [is_valid_surface(case, SubsetT(mask)) for mask in ALL_MASKS]


def iter_valid_masks(case: ModelCase) -> Iterator[int]:
    case = ModelCase(case)
    for mask in ALL_MASKS:
        if full_matrix_verdict(case, SubsetT(mask)):
            yield mask


def catalog_summary(case: ModelCase, records: list[CatalogRecord]) -> dict:
    valid = [r.t for r in records if r.valid]
    return {
        "valid_raw": len(valid),
        "valid_mod_symmetry": len({canonical_mask(case, t) for t in valid}),
    }


@dataclass
class VerificationReport:
    case: ModelCase
    readings: dict
    mismatches: list[dict] = field(default_factory=list)
    oracle_only: int = 0
    theorem_only: int = 0
    valid_raw: int = 0
    reading_trials: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {
            "case": self.case.value,
            "readings": self.readings,
            "valid_raw": self.valid_raw,
            "mismatch_count": len(self.mismatches),
            "oracle_valid_theorem_invalid": self.oracle_only,
            "oracle_invalid_theorem_valid": self.theorem_only,
            "mismatches": self.mismatches,
            "reading_trials": self.reading_trials,
        }

    def __str__(self) -> str:
        lines = [
            f"case {self.case.value}: {self.valid_raw} valid subsets, {len(self.mismatches)} mismatches "
            f"(oracle-only {self.oracle_only}, theorem-only {self.theorem_only})"
        ]
        for m in self.mismatches:
            lines.append(f"  T={m['record']['t']} oracle={m['oracle']} theorem={m['theorem']} clause {m['clause']}")
        for key, trials in self.reading_trials.items():
            parts = ", ".join(f"{name}: {n}" for name, n in trials.items())
            lines.append(f"  reading {key} -> mismatches per candidate: {parts}")
        return "\n".join(lines)


def _compare(case: ModelCase, valid: list[bool], readings: dict) -> list[int]:
    explain = _EXPLAIN[case]
    return [mask for mask in ALL_MASKS if explain(SubsetT(mask), readings)[0] != valid[mask]]


def verify_theorem(case: ModelCase, readings: dict | None = None, records: list[CatalogRecord] | None = None) -> VerificationReport:
    """Compare the theorem's decision table with brute force on all subsets."""
    case = ModelCase(case)
    readings = _readings(readings)
    if records is None:
        valid = [full_matrix_verdict(case, SubsetT(mask)) for mask in ALL_MASKS]
    else:
        valid = [r.valid for r in records]
    report = VerificationReport(case, dict(readings), valid_raw=sum(valid))
    explain = _EXPLAIN[case]
    for mask in _compare(case, valid, readings):
        t = SubsetT(mask)
        verdict, clause = explain(t, readings)
        record = records[mask] if records is not None else is_valid_surface(case, t)
        report.mismatches.append(
            {"record": record.to_json(), "oracle": valid[mask], "theorem": verdict, "clause": clause}
        )
        if valid[mask]:
            report.oracle_only += 1
        else:
            report.theorem_only += 1
    for key in _CASE_READINGS[case]:
        report.reading_trials[key] = {
            cand: len(_compare(case, valid, {**readings, key: cand})) for cand in ALTERNATIVE_READINGS[key]
        }
    return report
