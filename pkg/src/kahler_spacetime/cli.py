"""Command-line front end.

    kahler-spacetime audit de_sitter --points 5 --json out.json
    kahler-spacetime audit my_metric.json --tol 1e-10
    kahler-spacetime catalog list [--json PATH|-]

Exit codes: 0 all checks pass, 1 some audit check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys

from .audit import DEFAULT_POINTS, format_report, run_audit
from .catalog import BUILTIN_NAMES, builtin, entry_to_dict, resolve
from .errors import InputError
from .geometry import DEFAULT_SEED
from .kahler import DEFAULT_TOL

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _dump(obj, target):
    text = json.dumps(obj, indent=2, allow_nan=False) + "\n"
    if target == "-":
        sys.stdout.write(text)
    else:
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_audit(args) -> int:
    if args.points < 1:
        print("error: --points must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    if not args.tol > 0:
        print("error: --tol must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        entry = resolve(args.metric)
    except InputError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = run_audit(entry, points=args.points, seed=args.seed, tol=args.tol)
    # keep stdout clean when the JSON report goes there
    print(format_report(report), file=sys.stderr if args.json == "-" else sys.stdout)
    if args.json:
        try:
            _dump(report, args.json)
        except OSError as exc:
            print(f"error: cannot write {args.json}: {exc}", file=sys.stderr)
            return EXIT_INPUT
    return EXIT_OK if report["passed"] else EXIT_FAIL


def _expected_summary(expected):
    parts = []
    for key, value in expected.items():
        if isinstance(value, bool):
            parts.append(key if value else f"not {key}")
        elif value is not None:
            parts.append(f"{key}={value:g}")
    return ", ".join(parts)


def cmd_catalog_list(args) -> int:
    entries = [builtin(name) for name in BUILTIN_NAMES]
    if args.json:
        _dump([entry_to_dict(e) for e in entries], args.json)
        if args.json == "-":
            return EXIT_OK
    width = max(len(e.name) for e in entries)
    for e in entries:
        print(f"{e.name:<{width}}  {e.description}  [{_expected_summary(e.expected)}]")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kahler-spacetime",
        description="Numerical audits of Kähler space-time identities on 4-dimensional metrics.")
    sub = parser.add_subparsers(dest="command", required=True)

    audit = sub.add_parser("audit", help="audit a builtin metric or a metric JSON file")
    audit.add_argument("metric", help="builtin name (e.g. de_sitter, sphere4(a=2)) or path to a metric file")
    audit.add_argument("--points", type=int, default=DEFAULT_POINTS, help="number of sample points (default 5)")
    audit.add_argument("--seed", type=int, default=DEFAULT_SEED, help="sampling seed (default 42)")
    audit.add_argument("--tol", type=float, default=DEFAULT_TOL, help="residual tolerance (default 1e-8)")
    audit.add_argument("--json", metavar="PATH", help="also write the JSON report here ('-' for stdout)")
    audit.set_defaults(func=cmd_audit)

    catalog = sub.add_parser("catalog", help="inspect the builtin catalog")
    catalog_sub = catalog.add_subparsers(dest="catalog_command", required=True)
    listing = catalog_sub.add_parser("list", help="list builtin metrics")
    listing.add_argument("--json", metavar="PATH", help="write the entries as a JSON array ('-' for stdout)")
    listing.set_defaults(func=cmd_catalog_list)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
