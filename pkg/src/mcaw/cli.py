"""Command-line driver: ingestion -> dataset -> MCA -> inference -> reports.

Exit codes: 0 ok, 1 usage error, 2 data error (parse/validation/spec),
3 degenerate or empty analysis.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

import yaml

from . import inference, mca, report
from .dataset import (DEFAULT_AGE_BREAKS, filter_rows, frequency_table,
                      from_raw, rate_by_group)
from .errors import (DatasetError, DegenerateError, DictionaryError,
                     EmptyDatasetError, McawError, ParseError, SpecError)
from .ingest import (SynthSpec, generate_synthetic, load_dictionary_file,
                     parse_csv, validate, write_csv)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_DEGENERATE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_pipeline_flags(p: argparse.ArgumentParser, need_active=True):
    p.add_argument("--csv", required=True, help="input CSV path")
    p.add_argument("--dict", required=True, dest="dictionary",
                   help="data dictionary (YAML) path")
    if need_active:
        p.add_argument("--active", required=True,
                       help="comma-separated active variables")
    p.add_argument("--age-breaks", default=None,
                   help="comma-separated ascending breaks for integer columns")
    p.add_argument("--filter", action="append", default=[], metavar="VAR=lab1|lab2",
                   help="keep only rows whose VAR is among the labels")
    p.add_argument("--missing", choices=["drop-row", "missing-level"],
                   default="drop-row")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mcaw", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse + validate, write summary")
    _add_pipeline_flags(p, need_active=False)
    p.add_argument("--active", default=None)
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("analyze", help="fit MCA and write the report bundle")
    _add_pipeline_flags(p)
    p.add_argument("--dims", type=int, default=None)
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--group", default=None,
                   help="grouping variable for ellipses (default: first active)")
    p.add_argument("--correction", choices=["none", "benzecri", "greenacre"],
                   default="none")
    p.add_argument("--svg", action="store_true",
                   help="also write a category factor map as SVG")
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("rates", help="rate table for one variable")
    _add_pipeline_flags(p)
    p.add_argument("--var", required=True)
    p.add_argument("--decimals", type=int, default=2)
    _add_format_flags(p)

    p = sub.add_parser("dimdesc", help="dimension description")
    _add_pipeline_flags(p)
    p.add_argument("--axis", type=int, default=1)
    p.add_argument("--p-threshold", type=float, default=1.0)
    _add_format_flags(p)

    p = sub.add_parser("ellipses", help="group confidence ellipses")
    _add_pipeline_flags(p)
    p.add_argument("--group", required=True)
    p.add_argument("--axes", default="1,2")
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--kind", choices=["mean", "observation"], default="mean")
    _add_format_flags(p)

    p = sub.add_parser("synth", help="generate a synthetic registry CSV")
    p.add_argument("--spec", required=True, help="SynthSpec YAML/JSON file")
    p.add_argument("--seed", type=int, default=None, help="override spec seed")
    p.add_argument("--out", required=True, help="output CSV path")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=None)
    return parser


def _add_format_flags(p):
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json",
                     default="json")
    fmt.add_argument("--csv-out", dest="fmt", action="store_const", const="csv")


def _parse_filters(clauses: Sequence[str]) -> list[tuple[str, set]]:
    out = []
    for clause in clauses:
        if "=" not in clause:
            raise SpecError(f"bad --filter clause {clause!r}, expected VAR=lab1|lab2")
        var, labels = clause.split("=", 1)
        out.append((var, set(labels.split("|"))))
    return out


def _build_dataset(args):
    dictionary = load_dictionary_file(args.dictionary)
    raw = parse_csv(args.csv, dictionary)
    for var, keep in _parse_filters(args.filter):
        raw = filter_rows(raw, var, keep)
    active = args.active.split(",") if args.active else None
    if active is None:
        active = [c.name for c in dictionary.columns if c.kind == "categorical"]
    if args.age_breaks:
        breaks = [float(b) for b in args.age_breaks.split(",")]
    else:
        breaks = list(DEFAULT_AGE_BREAKS)
    ds = from_raw(raw, active, age_breaks=breaks, missing_policy=args.missing)
    return raw, ds


def _write(path: Path, doc) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(report.canonical_json(doc) + "\n", encoding="utf-8")


def _emit(args, doc) -> None:
    if getattr(args, "fmt", "json") == "csv" and "rows" in doc:
        sys.stdout.write(report.table_csv(doc))
    else:
        sys.stdout.write(report.canonical_json(doc) + "\n")


def cmd_ingest(args) -> int:
    dictionary = load_dictionary_file(args.dictionary)
    raw = parse_csv(args.csv, dictionary)
    issues = validate(raw)
    out = Path(args.out)
    _write(out / "validation.json", {
        "n_rows": raw.n_rows,
        "issues": [
            {"row": i.row, "column": i.column, "message": i.message}
            for i in issues
        ],
    })
    raw2, ds = _build_dataset(args)
    _write(out / "summary.json", report.dataset_summary(ds))
    return EXIT_OK


def cmd_analyze(args) -> int:
    _, ds = _build_dataset(args)
    model = mca.fit_mca(ds, n_dims=args.dims)
    out = Path(args.out)
    _write(out / "model.json", report.model_report(model, correction=args.correction))

    dims = [a for a in (1, 2) if a <= model.n_dims]
    dimdesc = {
        f"dim{a}": report.dimdesc_report(
            inference.describe_dimension(model, ds, a))
        for a in dims
    }
    _write(out / "dimdesc.json", dimdesc)

    rates = {v.name: report.rate_report(rate_by_group(ds, v.name))
             for v in ds.variables}
    _write(out / "rates.json", rates)

    group = args.group or ds.variables[0].name
    if model.n_dims >= 2:
        ellipses, warnings = inference.group_ellipse(
            model, ds, group, axes=(1, 2), level=args.level)
        _write(out / "ellipses.json", report.ellipse_report(ellipses, warnings))

    if args.svg:
        labels, coords = mca.coordinates(model, "categories",
                                         dims=list(range(1, min(2, model.n_dims) + 1)))
        points = [{"x": float(c[0]),
                   "y": float(c[1]) if coords.shape[1] > 1 else 0.0,
                   "label": lab}
                  for lab, c in zip(labels, coords)]
        y_caption = (report.axis_caption(model, 2)
                     if model.n_dims >= 2 else "Dim 2")
        svg = report.render_svg(points,
                                x_caption=report.axis_caption(model, 1),
                                y_caption=y_caption)
        (out / "categories.svg").write_text(svg, encoding="utf-8")
    return EXIT_OK


def cmd_rates(args) -> int:
    _, ds = _build_dataset(args)
    _emit(args, report.rate_report(rate_by_group(ds, args.var, args.decimals)))
    return EXIT_OK


def cmd_dimdesc(args) -> int:
    _, ds = _build_dataset(args)
    model = mca.fit_mca(ds)
    desc = inference.describe_dimension(model, ds, args.axis, args.p_threshold)
    _emit(args, report.dimdesc_report(desc))
    return EXIT_OK


def cmd_ellipses(args) -> int:
    _, ds = _build_dataset(args)
    model = mca.fit_mca(ds)
    ax = tuple(int(a) for a in args.axes.split(","))
    ellipses, warnings = inference.group_ellipse(
        model, ds, args.group, axes=ax, level=args.level, kind=args.kind)
    _emit(args, report.ellipse_report(ellipses, warnings))
    return EXIT_OK


def cmd_synth(args) -> int:
    with open(args.spec, "r", encoding="utf-8") as fh:
        doc = yaml.safe_load(fh)
    joint = None
    if "joint" in doc and doc["joint"] is not None:
        jcols = tuple(doc["joint"]["columns"])
        cells = {tuple(k.split("|")): v for k, v in doc["joint"]["cells"].items()}
        joint = (jcols, cells)
    spec = SynthSpec(
        n_rows=doc["n_rows"],
        columns={name: dict(dist) for name, dist in doc["columns"].items()},
        seed=args.seed if args.seed is not None else doc.get("seed", 0),
        mode=doc.get("mode", "sampled"),
        joint=joint,
    )
    raw = generate_synthetic(spec)
    write_csv(raw, args.out)
    return EXIT_OK


def cmd_serve(args) -> int:
    import os

    import uvicorn

    from .service import create_app

    port = args.port or int(os.environ.get("MCAW_PORT", "8000"))
    uvicorn.run(create_app(), host="127.0.0.1", port=port)
    return EXIT_OK


_COMMANDS = {
    "ingest": cmd_ingest,
    "analyze": cmd_analyze,
    "rates": cmd_rates,
    "dimdesc": cmd_dimdesc,
    "ellipses": cmd_ellipses,
    "synth": cmd_synth,
    "serve": cmd_serve,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except (EmptyDatasetError, DegenerateError) as exc:
        print(report.canonical_json({"error": str(exc)}), file=sys.stderr)
        return EXIT_DEGENERATE
    except (ParseError, DictionaryError, SpecError, DatasetError,
            FileNotFoundError, KeyError, json.JSONDecodeError,
            yaml.YAMLError, McawError) as exc:
        print(report.canonical_json({"error": str(exc)}), file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    raise SystemExit(main())
