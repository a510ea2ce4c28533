"""Command-line interface: lookup building, binning, comparison, serving."""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from decimal import Decimal
from pathlib import Path

from .core import BinCounts, BinScheme
from .engine import NoSemanticMatchError, compute_bins, result_to_dict
from .ingest import EmptyColumnError, ParseError, parse_csv
from .legibility import LegibilityConfig
from .pipeline import (
    build_lookup,
    load_concepts,
    table_from_json,
    table_to_json,
    SemanticLookupTable,
)

HIST_WIDTH = 60

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NOT_NUMERIC = 3

LOOKUP_ENV = "BINSMITH_LOOKUP"


def ascii_histogram(scheme: BinScheme, counts: BinCounts, width: int = HIST_WIDTH) -> str:
    """Fixed-width ASCII histogram: one row per bin, label, bar, count."""
    label_w = max(len(l) for l in scheme.labels)
    max_count = max(counts.counts) if counts.counts else 0
    count_w = len(str(max_count))
    lines = []
    for label, count in zip(scheme.labels, counts.counts):
        bar = "#" * (count * width // max_count) if max_count else ""
        lines.append(f"{label:<{label_w}} |{bar:<{width}}| {count:>{count_w}}")
    if counts.below:
        lines.append(f"below range: {counts.below}")
    if counts.above:
        lines.append(f"above range: {counts.above}")
    return "\n".join(lines)


def _add_legibility_flags(parser: argparse.ArgumentParser):
    base = LegibilityConfig()
    parser.add_argument("--max-bins-color", type=int, default=base.max_bins_color)
    parser.add_argument("--max-bins-histogram", type=int, default=base.max_bins_histogram)
    parser.add_argument("--nice-multipliers", default=",".join(str(m) for m in base.nice_multipliers),
                        help="comma-separated nice width multipliers")
    parser.add_argument("--tail-fraction", default=str(base.tail_fraction))
    parser.add_argument("--tail-min-run", type=int, default=base.tail_min_run)


def _legibility_from_args(args) -> LegibilityConfig:
    return LegibilityConfig(
        max_bins_color=args.max_bins_color,
        max_bins_histogram=args.max_bins_histogram,
        nice_multipliers=tuple(Decimal(m) for m in args.nice_multipliers.split(",")),
        tail_fraction=Decimal(args.tail_fraction),
        tail_min_run=args.tail_min_run,
    )


def _load_lookup(path: str | None) -> SemanticLookupTable | None:
    path = path or os.environ.get(LOOKUP_ENV)
    if not path:
        return None
    return table_from_json(Path(path).read_text("utf-8"))


def _load_column(args):
    """Parse the CSV and pull the requested column, exiting on bad input."""
    try:
        data = Path(args.data).read_bytes()
        table = parse_csv(data, delimiter=args.delimiter)
    except (OSError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)
    try:
        column = table.column(args.field)
    except KeyError:
        print(f"error: no field {args.field!r} in {args.data} "
              f"(have: {', '.join(table.names)})", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)
    if not column.is_numeric:
        print(f"error: field {args.field!r} is not numeric", file=sys.stderr)
        raise SystemExit(EXIT_NOT_NUMERIC)
    return column


def cmd_build_lookup(args) -> int:
    try:
        concepts = load_concepts(Path(args.concepts).read_text("utf-8"))
        field_text = Path(args.fields).read_text("utf-8")
        survey_text = Path(args.surveys).read_text("utf-8")
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"error: cannot read inputs: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            table, alignments, model = build_lookup(
                concepts,
                field_text,
                survey_text,
                k=args.k,
                iterations=args.iters,
                seed=args.seed,
                threshold=args.threshold,
                top_fields=args.top_fields,
                provenance_extra={
                    "concepts_file": Path(args.concepts).name,
                    "fields_file": Path(args.fields).name,
                    "surveys_file": Path(args.surveys).name,
                },
            )
    except (ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    Path(args.out).write_text(table_to_json(table), "utf-8")
    aligned = {a.topic: a for a in alignments}
    for t in range(model.K):
        if t in aligned:
            a = aligned[t]
            print(f"topic {t} -> {a.concept_id} score={a.score:.4f}")
        else:
            print(f"topic {t} -> (unaligned)")
    if not any(c.bin_options for c in table.concepts):
        print("warning: no bin options harvested from surveys", file=sys.stderr)
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_bin(args) -> int:
    column = _load_column(args)
    lookup = _load_lookup(args.lookup)
    cfg = _legibility_from_args(args)
    try:
        result = compute_bins(args.field, list(column.values), table=lookup,
                              purpose=args.purpose, cfg=cfg, forced_mode=args.mode)
    except (NoSemanticMatchError, EmptyColumnError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.format == "json":
        print(json.dumps(result_to_dict(result), indent=2, ensure_ascii=False))
    else:
        print(ascii_histogram(result.scheme, result.counts))
    return EXIT_OK


def cmd_compare(args) -> int:
    column = _load_column(args)
    lookup = _load_lookup(args.lookup)
    cfg = _legibility_from_args(args)
    values = list(column.values)
    try:
        dflt = compute_bins(args.field, values, table=None, purpose=args.purpose,
                            cfg=cfg, forced_mode="default")
        semantic = None
        if lookup is not None:
            try:
                semantic = compute_bins(args.field, values, table=lookup,
                                        purpose=args.purpose, cfg=cfg,
                                        forced_mode="semantic")
            except NoSemanticMatchError:
                semantic = None
    except (EmptyColumnError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.format == "json":
        payload = {
            "semantic": result_to_dict(semantic) if semantic else None,
            "default": result_to_dict(dflt),
        }
        print(json.dumps(payload, indent=2, ensure_ascii=False))
        return EXIT_OK
    print("semantic")
    if semantic is not None:
        print(ascii_histogram(semantic.scheme, semantic.counts))
    else:
        print(f"(no semantic match for {args.field!r}; showing default bins)")
        print(ascii_histogram(dflt.scheme, dflt.counts))
    print()
    print("default")
    print(ascii_histogram(dflt.scheme, dflt.counts))
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    lookup = _load_lookup(args.lookup)
    ui_dir = args.ui if args.ui and Path(args.ui).is_dir() else None
    app = create_app(lookup=lookup, ui_dir=ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="binsmith",
                                     description="Human-centered binning for quantitative data")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-lookup", help="train the semantic lookup table from corpora")
    p.add_argument("--concepts", required=True, help="concept seed JSON")
    p.add_argument("--fields", required=True, help="field-name corpus (one per line)")
    p.add_argument("--surveys", required=True, help="survey corpus (JSON lines)")
    p.add_argument("--k", type=int, default=None, help="topic count (default: number of concepts)")
    p.add_argument("--iters", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", type=float, default=0.06)
    p.add_argument("--top-fields", type=int, default=100)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build_lookup)

    p = sub.add_parser("bin", help="bin one field of a CSV file")
    p.add_argument("--data", required=True)
    p.add_argument("--field", required=True)
    p.add_argument("--lookup", default=None, help=f"lookup table JSON (default: ${LOOKUP_ENV})")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--purpose", choices=["histogram", "color_ramp"], default="histogram")
    p.add_argument("--format", choices=["json", "ascii"], default="json")
    p.add_argument("--mode", choices=["semantic", "default"], default=None)
    _add_legibility_flags(p)
    p.set_defaults(func=cmd_bin)

    p = sub.add_parser("compare", help="semantic vs default bins side by side")
    p.add_argument("--data", required=True)
    p.add_argument("--field", required=True)
    p.add_argument("--lookup", default=None)
    p.add_argument("--delimiter", default=",")
    p.add_argument("--purpose", choices=["histogram", "color_ramp"], default="histogram")
    p.add_argument("--format", choices=["text", "json"], default="text")
    _add_legibility_flags(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("serve", help="run the HTTP API and refinement UI")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8077)
    p.add_argument("--lookup", default=None)
    p.add_argument("--ui", default="frontend/dist", help="static UI directory to serve")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
