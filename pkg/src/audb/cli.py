"""Command-line surface: run queries, verify bounds against possible worlds,
import TI/x-DB inputs, report metrics and extract selected-guess worlds.

Exit codes: 0 success/PASS, 1 check FAIL, 2 usage or parse/type errors.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Dict

from . import codec, fuzz
from .errors import AudbError
from .oracle import check_bounds, eval_det_query, tightness_metrics
from .plan import eval_au, infer_schema
from .relation import AURelation, sg_world
from .sexpr import parse_query

TABLE_SUFFIX = ".audb"


def _load_db(db_dir: str) -> Dict[str, AURelation]:
    catalog = {}
    for path in sorted(Path(db_dir).glob(f"*{TABLE_SUFFIX}")):
        catalog[path.stem] = codec.enc_read(str(path))
    if not catalog:
        raise AudbError(f"no {TABLE_SUFFIX} files found in {db_dir}")
    return catalog


def _read_query(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_query(fh.read())


def _cmd_run(args) -> int:
    catalog = _load_db(args.db)
    plan = _read_query(args.query)
    infer_schema(plan, {n: r.schema for n, r in catalog.items()})
    result = eval_au(plan, catalog, optimize=args.optimize, compress_size=args.compress_size)
    text = codec.enc_dumps(result)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_check(args) -> int:
    if args.fuzz:
        seed = int(os.environ.get("AUDB_SEED", "0"))
        failures, messages = fuzz.run_suite(seed, args.fuzz)
        for msg in messages:
            print(f"FAIL {msg}")
        if failures:
            print(f"FAIL {failures}/{args.fuzz} randomized checks failed (seed {seed})")
            return 1
        print(f"PASS {args.fuzz} randomized checks (seed {seed})")
        return 0

    if not (args.db and args.worlds and args.query):
        raise AudbError("check needs --db, --worlds and --query (or --fuzz N)")
    catalog = _load_db(args.db)
    plan = _read_query(args.query)
    infer_schema(plan, {n: r.schema for n, r in catalog.items()})
    _, idb = codec.worlds_read(args.worlds)
    au_result = eval_au(plan, catalog, optimize=args.optimize, compress_size=args.compress_size)
    world_results = [eval_det_query(plan, world) for world in idb.worlds]
    ok, reason = check_bounds(au_result, world_results, idb.selected)
    if ok:
        print("PASS")
        return 0
    print(f"FAIL {reason}")
    return 1


def _cmd_import(args) -> int:
    with open(args.infile, "r", encoding="utf-8") as fh:
        text = fh.read()
    if args.format == "tidb":
        schema, rows = codec.tidb_loads(text)
        rel = codec.import_tidb(rows, schema)
    else:
        schema, xtuples = codec.xdb_loads(text)
        rel = codec.import_xdb(xtuples, schema)
    codec.enc_write(rel, args.out)
    return 0


def _cmd_metrics(args) -> int:
    from . import report  # matplotlib stays off the fast paths

    rel = codec.enc_read(args.infile)
    metrics = tightness_metrics(rel)
    text = report.metrics_table(metrics)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)
    if args.plot:
        report.plot_metrics(metrics, args.plot, title=Path(args.infile).name)
    return 0


def _cmd_sgw(args) -> int:
    rel = codec.enc_read(args.infile)
    sys.stdout.write(codec.det_dumps(sg_world(rel)))
    return 0


def _cmd_report(args) -> int:
    from . import report

    sizes = [int(s) for s in args.sizes.split(",")]
    sweep = report.compression_sweep(args.seed, sizes)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    table = report.sweep_table(sweep)
    (out_dir / "compression_sweep.tsv").write_text(table, encoding="utf-8")
    report.plot_sweep(sweep, str(out_dir / "compression_sweep.png"))
    sys.stdout.write(table)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="audb", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="evaluate a query and write the encoded result")
    run.add_argument("--db", required=True, help="directory of <table>.audb files")
    run.add_argument("--query", required=True, help="query file (s-expression)")
    run.add_argument("--optimize", action="store_true")
    run.add_argument("--compress-size", type=int, default=None)
    run.add_argument("--out", default=None)
    run.set_defaults(func=_cmd_run)

    check = sub.add_parser("check", help="verify bounds against explicit worlds")
    check.add_argument("--db")
    check.add_argument("--worlds")
    check.add_argument("--query")
    check.add_argument("--optimize", action="store_true")
    check.add_argument("--compress-size", type=int, default=None)
    check.add_argument("--fuzz", type=int, default=0, metavar="N",
                       help="run N randomized end-to-end checks (seed from AUDB_SEED)")
    check.set_defaults(func=_cmd_check)

    imp = sub.add_parser("import", help="translate TI-DB or x-DB inputs")
    imp.add_argument("--format", choices=("tidb", "xdb"), required=True)
    imp.add_argument("--in", dest="infile", required=True)
    imp.add_argument("--out", required=True)
    imp.set_defaults(func=_cmd_import)

    met = sub.add_parser("metrics", help="tightness metrics of an encoded relation")
    met.add_argument("--in", dest="infile", required=True)
    met.add_argument("--plot", default=None, help="render a figure to this file")
    met.add_argument("--report", default=None, help="also write the table to this file")
    met.set_defaults(func=_cmd_metrics)

    sgw = sub.add_parser("sgw", help="print the selected-guess world")
    sgw.add_argument("--in", dest="infile", required=True)
    sgw.set_defaults(func=_cmd_sgw)

    rep = sub.add_parser("report", help="compression sweep: delimited output plus figures")
    rep.add_argument("--out-dir", required=True)
    rep.add_argument("--sizes", default="1,4,16,64")
    rep.add_argument("--seed", type=int, default=7)
    rep.set_defaults(func=_cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except AudbError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
