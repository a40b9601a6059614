"""Command line entry point ``selab``.

Subcommands: ``run`` (the checker suites), ``script``, ``omega`` and
``catalog``.  Arguments starting with a dash and no subcommand mean ``run``.
Exit codes: 0 ok, 1 a check failed, 2 usage or input error, 3 a capacity
skip under ``--strict``.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from selab import omega
from selab.catalog import default_catalog, load_catalog, save_catalog
from selab.errors import InputError, SelabError, ValidationError
from selab.suite import DEFAULT_MAX_ORDER, SUITES, run_suite
from selab.theorems import DEFAULT_SEED

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3

log = logging.getLogger("selab")


class _UsageError(Exception):
    pass


def _max_order(flag: int | None) -> int:
    if flag is not None:
        return flag
    env = os.environ.get("SELAB_MAX_ORDER")
    if env is None:
        return DEFAULT_MAX_ORDER
    try:
        return int(env)
    except ValueError:
        raise _UsageError(f"SELAB_MAX_ORDER must be an integer, got {env!r}") from None


def _emit(lines: list[str], out) -> None:
    for line in lines:
        print(line, file=out)


def cmd_run(args, out) -> int:
    max_order = _max_order(args.max_order)
    catalog = load_catalog(args.catalog) if args.catalog else None
    code, reports = run_suite(args.suite, max_order, args.seed, args.verify, catalog, args.strict)
    records = [r.to_record() for r in reports]
    if args.jsonl:
        _emit([json.dumps(rec, sort_keys=True) for rec in records], out)
    else:
        _emit([r.line() for r in reports], out)
        counts = {v: sum(r.verdict == v for r in reports) for v in ("holds", "fails", "skipped-capacity")}
        print(f"{len(reports)} reports: " + ", ".join(f"{n} {v}" for v, n in counts.items()), file=out)
    if args.json:
        doc = {
            "suite": args.suite,
            "max_order": max_order,
            "seed": args.seed,
            "verify": args.verify,
            "exit_code": code,
            "reports": records,
        }
        Path(args.json).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    if args.text:
        Path(args.text).write_text("".join(r.line() + "\n" for r in reports))
    return code


def cmd_script(args, out) -> int:
    from selab.script import parse_script, print_script, run_script

    text = sys.stdin.read() if args.file == "-" else Path(args.file).read_text(encoding="utf-8")
    script = parse_script(text)
    if args.print:
        out.write(print_script(script))
        return EXIT_OK
    result = run_script(script)
    _emit(result.outputs, out)
    return EXIT_OK if result.ok else EXIT_FAIL


def cmd_omega(args, out) -> int:
    if not args.descriptors:
        report = omega.verify_witness(max_i=args.max_i)
        print(report.line(), file=out)
        return EXIT_OK if report.ok else EXIT_FAIL
    total = omega.const()
    for text in args.descriptors:
        d = omega.parse_descriptor(text)
        print(f"omega({omega.format_descriptor(d)}) = {omega.format_element(omega.omega_eval(d))}", file=out)
        total = omega.seq_add(total, d)
    if len(args.descriptors) > 1:
        print(f"omega(sum) = {omega.format_element(omega.omega_eval(total))}  [sum = {omega.format_descriptor(total)}]", file=out)
    return EXIT_OK


def cmd_catalog(args, out) -> int:
    catalog = load_catalog(args.load) if args.load else default_catalog(_max_order(args.max_order))
    for e in catalog:
        print(f"{e.label:16s} {e.order:4d}  {e.spec}", file=out)
    print(f"{len(catalog)} groups", file=out)
    if args.save:
        save_catalog(catalog, args.save)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="selab", description="Finite-group workbench for split extensions and their cores.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a checker suite over the catalog")
    run.add_argument("--suite", choices=SUITES, default="all")
    run.add_argument("--max-order", type=int, default=None, help=f"order cap (env SELAB_MAX_ORDER, default {DEFAULT_MAX_ORDER})")
    run.add_argument("--seed", type=int, default=DEFAULT_SEED)
    run.add_argument("--verify", action="store_true", help="also run the terminality, adjunction and fibrewise scans")
    run.add_argument("--json", metavar="PATH", help="write a JSON report")
    run.add_argument("--text", metavar="PATH", help="write a text report")
    fmt = run.add_mutually_exclusive_group()
    fmt.add_argument("--jsonl", action="store_true", help="one JSON record per report on stdout")
    fmt.add_argument("--plain", dest="jsonl", action="store_false", help="text lines on stdout (default)")
    run.add_argument("--strict", action="store_true", help="exit 3 when a check was skipped for capacity")
    run.add_argument("--catalog", metavar="MANIFEST", help="use this manifest instead of the built-in catalog")
    run.set_defaults(func=cmd_run)

    scr = sub.add_parser("script", help="run a workbench script ('-' reads stdin)")
    scr.add_argument("file")
    scr.add_argument("--print", action="store_true", help="print the canonical form instead of running")
    scr.set_defaults(func=cmd_script)

    om = sub.add_parser("omega", help="evaluate omega on sequence descriptors, or check the witness")
    om.add_argument("descriptors", nargs="*", help="e.g. 'const{;1}' 'sdelta{;0}' 'prefix[{0;1}]+const{;0}'")
    om.add_argument("--max-i", type=int, default=64)
    om.set_defaults(func=cmd_omega)

    cat = sub.add_parser("catalog", help="list, load or save the group catalog")
    cat.add_argument("--max-order", type=int, default=None)
    cat.add_argument("--load", metavar="MANIFEST")
    cat.add_argument("--save", metavar="MANIFEST")
    cat.set_defaults(func=cmd_catalog)
    return parser


def main(argv: list[str] | None = None, out=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = sys.stdout if out is None else out
    if argv and argv[0].startswith("-") and argv[0] not in ("-h", "--help", "-v", "--verbose"):
        argv.insert(0, "run")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.func(args, out)
    except _UsageError as exc:
        print(f"selab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        print(f"selab: invalid group: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InputError, OSError) as exc:
        print(f"selab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SelabError as exc:
        print(f"selab: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
