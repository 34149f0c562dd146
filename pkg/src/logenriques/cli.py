"""Command-line front end.

    logenriques extract --model z2
    logenriques catalog --case a26 --format csv --out a26.csv
    logenriques verify --case both --report-out report.json
    logenriques check-subset --case a26 --t 8,12
    logenriques export --case i22 --what golden --format dot --out i22.dot

Exit status: 0 on success, 1 when ``verify`` finds mismatches, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .dual_graph import DualGraph, Kind, format_fraction, serialize, to_dot
from .enumeration import (
    SubsetT,
    catalog_summary,
    enumerate_catalog,
    is_valid_surface,
    verify_theorem,
)
from .log_pair import LogPair, extract_zero_discrepancy
from .models import (
    LOCAL_MODELS,
    ModelCase,
    golden_graph,
    local_model,
    maximal_extraction,
    minimal_resolution_graph,
)

__all__ = ["main", "parse_subset", "ParseError", "format_chains"]


class ParseError(ValueError):
    pass


def parse_subset(text: str) -> SubsetT:
    """``"8,12"`` -> {8, 12}. Duplicates collapse; a blank string is the empty set."""
    if not text.strip():
        return SubsetT(0)
    labels = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            raise ParseError(f"empty item in {text!r}")
        try:
            k = int(item)
        except ValueError:
            raise ParseError(f"not an integer: {item!r}") from None
        if not 1 <= k <= 15:
            raise ParseError(f"label {k} is not in 1..15")
        labels.append(k)
    return SubsetT.of(labels)


def _token(g: DualGraph, vid: str) -> str:
    v = g[vid]
    if v.kind is Kind.BOUNDARY:
        return f"{v.label or v.id}̄"
    text = f"({format_fraction(v.self_int)},{format_fraction(v.coeff)})"
    if v.kind is Kind.CIRCLE and v.label:
        text += f"#{v.label}"
    return text


def _attachments(g: DualGraph, vid: str, boundary: set[str]) -> list[str]:
    return sorted(w for w, m in g.neighbors(vid).items() if w in boundary for _ in range(m))


def format_chains(g: DualGraph) -> list[str]:
    """One line per chain of non-boundary curves, framed by the boundary curves it meets.

    Removing the boundary leaves disjoint chains in every configuration here.
    A chain is read from a free end when it has one.
    """
    boundary = set(g.of_kind(Kind.BOUNDARY))
    lines = []
    for comp in g.components([v.id for v in g if v.id not in boundary]):
        cset = set(comp)
        ends = [v for v in comp if sum(1 for w in g.neighbors(v) if w in cset) <= 1] or comp
        start = min(ends, key=lambda v: (_attachments(g, v, boundary), v))
        path = [start]
        while True:
            nxt = [w for w in g.neighbors(path[-1]) if w in cset and w not in path]
            if not nxt:
                break
            path.append(nxt[0])
        if len(path) == 1:
            atts = _attachments(g, start, boundary)
            head, tail = atts[:1] if len(atts) > 1 else [], atts[-1:]
        else:
            head, tail = _attachments(g, path[0], boundary)[:1], _attachments(g, path[-1], boundary)[:1]
        lines.append("-".join(_token(g, v) for v in head + path + tail))
    return lines


def _extract(args) -> int:
    out = sys.stdout
    if args.model in LOCAL_MODELS:
        start = local_model(args.model)
        pair = extract_zero_discrepancy(start)
    else:
        start = minimal_resolution_graph(ModelCase(args.model))
        pair = maximal_extraction(ModelCase(args.model))
    g = pair.graph
    for line in format_chains(g):
        out.write(line + "\n")
    for b in pair.boundary_ids:
        name = g[b].label or b
        if pair.relative:
            out.write(f"Δ{name}² = {format_fraction(g[b].self_int)}\n")
        else:
            before = start.graph[b].self_int
            out.write(
                f"{name}² = {format_fraction(g[b].self_int)} "
                f"(minimal resolution {format_fraction(before)})\n"
            )
    if args.dot_out:
        Path(args.dot_out).write_text(to_dot(g, args.model))
    return 0


def _catalog(args) -> int:
    case = ModelCase(args.case)
    records = enumerate_catalog(case)
    summary = catalog_summary(case, records)
    if args.format == "json":
        doc = {"case": case.value, "summary": summary, "records": [r.to_json() for r in records]}
        text = json.dumps(doc, separators=(",", ":")) + "\n"
    else:
        buf = io.StringIO()
        buf.write(f"# case={case.value} valid_raw={summary['valid_raw']} valid_mod_symmetry={summary['valid_mod_symmetry']}\n")
        writer = csv.writer(buf, delimiter=";", lineterminator="\n")
        writer.writerow(["t", "valid", "reason", "c1_sq", "c2_sq", "rho", "rank_delta"])
        for r in records:
            row = r.to_json()
            writer.writerow(
                [
                    ",".join(map(str, row["t"])),
                    "true" if row["valid"] else "false",
                    row["reason"] or "",
                    row["c1_sq"],
                    row["c2_sq"],
                    "" if row["rho"] is None else row["rho"],
                    "" if row["rank_delta"] is None else row["rank_delta"],
                ]
            )
        text = buf.getvalue()
    Path(args.out).write_text(text)
    print(f"{case.value}: {len(records)} records, valid_raw={summary['valid_raw']}, "
          f"valid_mod_symmetry={summary['valid_mod_symmetry']} -> {args.out}")
    return 0


def _verify(args) -> int:
    cases = list(ModelCase) if args.case == "both" else [ModelCase(args.case)]
    reports = [verify_theorem(case) for case in cases]
    for rep in reports:
        print(rep)
    if args.report_out:
        doc = {"reports": [rep.to_json() for rep in reports]}
        Path(args.report_out).write_text(json.dumps(doc, indent=1) + "\n")
    return 0 if all(rep.ok for rep in reports) else 1


def _check_subset(args) -> int:
    case = ModelCase(args.case)
    record = is_valid_surface(case, args.t)
    doc = {"case": case.value, **record.to_json()}
    print(json.dumps(doc))
    return 0


def _export(args) -> int:
    case = ModelCase(args.case)
    pair: LogPair = minimal_resolution_graph(case) if args.what == "minimal" else golden_graph(case)
    if args.format == "json":
        text = json.dumps(serialize(pair.graph), indent=1) + "\n"
    else:
        text = to_dot(pair.graph, f"{case.value}_{args.what}")
    Path(args.out).write_text(text)
    return 0


def _subset_arg(text: str) -> SubsetT:
    try:
        return parse_subset(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="logenriques", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    cases = [c.value for c in ModelCase]

    p = sub.add_parser("extract", help="extract all discrepancy-zero curves of a model")
    p.add_argument("--model", required=True, choices=list(LOCAL_MODELS) + cases)
    p.add_argument("--dot-out")
    p.set_defaults(func=_extract)

    p = sub.add_parser("catalog", help="classify all 2^15 subsets")
    p.add_argument("--case", required=True, choices=cases)
    p.add_argument("--format", default="json", choices=["json", "csv"])
    p.add_argument("--out", required=True)
    p.set_defaults(func=_catalog)

    p = sub.add_parser("verify", help="compare the classification theorem with brute force")
    p.add_argument("--case", required=True, choices=cases + ["both"])
    p.add_argument("--report-out")
    p.set_defaults(func=_verify)

    p = sub.add_parser("check-subset", help="classify one subset")
    p.add_argument("--case", required=True, choices=cases)
    p.add_argument("--t", required=True, type=_subset_arg, help="comma-separated circle labels")
    p.set_defaults(func=_check_subset)

    p = sub.add_parser("export", help="write a model graph as JSON or DOT")
    p.add_argument("--case", required=True, choices=cases)
    p.add_argument("--what", required=True, choices=["minimal", "golden"])
    p.add_argument("--format", default="json", choices=["json", "dot"])
    p.add_argument("--out", required=True)
    p.set_defaults(func=_export)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
