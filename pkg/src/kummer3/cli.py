"""Command-line interface: ``kummer3 <verb> ...``.

Exit codes: 0 success, 1 invalid input or usage error, 2 ingest or
consistency violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from functools import lru_cache
from pathlib import Path

from . import __version__
from .arith import MAX_LIMIT, normalize_radicand
from .census import TABLE_IDS, CSV_COLUMNS, CensusConfig, _csv_record, census_document, emit_tables, run_census
from .conductor import conductor_of, enumerate_companions, multiplicity, parse_conductor
from .eisenstein import cubic_symbol_rational, split_prime
from .errors import IngestError, Kummer3Error
from .pftype import check_class_record, possible_types, read_ingest, resolve_type
from .rank import bwb_bounds, classify_item, ramification_profile

EXIT_OK, EXIT_INVALID, EXIT_VIOLATION = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")

    def exit(self, status=0, message=None):
        # --help and --version end up here
        if message:
            sys.stderr.write(message)
        raise SystemExit(status)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)


def classify_record(d: int) -> dict:
    """The classification record printed by ``classify``."""
    rad = normalize_radicand(d)
    c = conductor_of(rad)
    prof = ramification_profile(c)
    item = classify_item(c)
    cons = possible_types(c, prof)
    res = resolve_type(c, item, cons)
    return {
        "d": rad.d,
        "d1": rad.d1,
        "d2": rad.d2,
        "species": rad.species.value,
        "f": c.f,
        "m": multiplicity(c),
        "t": prof.t,
        "s": prof.s,
        "qstar": prof.qstar,
        "rank": prof.ambiguous_rank,
        "item": item.code,
        "bwb": bwb_bounds(c).as_dict(),
        "possible_types": [t.value for t in cons.sorted_types()],
        "resolved_type": res.resolved.value if res.resolved else None,
        "method": res.method.value,
        "conjectural": res.conjectural,
    }


def _pretty(record: dict) -> str:
    width = max(len(k) for k in record)
    lines = []
    for key, value in record.items():
        if isinstance(value, dict):
            value = ", ".join(f"{k}={v}" for k, v in value.items())
        elif isinstance(value, list):
            value = ", ".join(str(v) for v in value) or "-"
        lines.append(f"{key.ljust(width)}  {value}")
    return "\n".join(lines)


def _emit(args, payload: dict) -> None:
    print(_pretty(payload) if getattr(args, "pretty", False) else _dump(payload))


def cmd_classify(args) -> int:
    _emit(args, classify_record(args.d))
    return EXIT_OK


def cmd_multiplet(args) -> int:
    _emit(args, enumerate_companions(parse_conductor(args.f)).as_dict())
    return EXIT_OK


def cmd_symbol(args) -> int:
    sym = cubic_symbol_rational(args.c, args.p)
    _emit(args, {"c": args.c, "p": args.p, "exponent": sym.exponent, "trivial": sym.trivial})
    return EXIT_OK


def cmd_split(args) -> int:
    sp = split_prime(args.p)
    _emit(args, {
        "p": sp.p,
        "pi1": {"a": sp.pi1.a, "b": sp.pi1.b, "text": str(sp.pi1)},
        "pi2": {"a": sp.pi2.a, "b": sp.pi2.b, "text": str(sp.pi2)},
    })
    return EXIT_OK


def _jobs(args) -> int:
    if args.jobs is not None:
        return args.jobs
    env = os.environ.get("KUMMER3_JOBS")
    if env is None or env == "":
        return 1
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"KUMMER3_JOBS must be an integer, got {env!r}") from None


def _tables(args) -> tuple[str, ...]:
    if args.tables is None:
        return TABLE_IDS
    ids = tuple(t.strip() for t in args.tables.split(",") if t.strip())
    if not ids:
        raise UsageError("--tables needs at least one table id")
    return ids


def cmd_census(args) -> int:
    cfg = CensusConfig(
        max_d=args.max, jobs=_jobs(args), tables=_tables(args), ingest_path=args.ingest
    )
    tables = run_census(cfg)
    if args.out is not None:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for name, data in emit_tables(tables, args.format, cfg.tables).items():
            (out / name).write_bytes(data)
    elif args.format == "json":
        sys.stdout.write(emit_tables(tables, "json", cfg.tables)["census.json"].decode())
    else:
        # single stream: the table id becomes a leading column
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(("table",) + CSV_COLUMNS)
        for table in census_document(tables, cfg.tables)["tables"]:
            for row in table["rows"]:
                writer.writerow([table["table_id"]] + _csv_record(row))
        sys.stdout.write(buf.getvalue())
    for d, msg in tables.violations:
        print(f"d={d}: {msg}", file=sys.stderr)
    for d, why in tables.ingest_skipped:
        print(f"d={d}: skipped ({why})", file=sys.stderr)
    return EXIT_VIOLATION if tables.violations else EXIT_OK


def cmd_check_ingest(args) -> int:
    records = read_ingest(args.file)
    violations = []
    for rec in records:
        try:
            rad = normalize_radicand(rec.d)
        except Kummer3Error as exc:
            violations.append((rec.d, str(exc)))
            continue
        if rad.d != rec.d:
            violations.append((rec.d, f"radicand is not normalized (use {rad.d})"))
            continue
        c = conductor_of(rad)
        item = classify_item(c)
        cons = possible_types(c, ramification_profile(c))
        res = resolve_type(c, item, cons, rec)
        violations.extend((rec.d, msg) for msg in check_class_record(rec, item, res, cons))
    for d, msg in violations:
        print(f"d={d}: {msg}", file=sys.stderr)
    print(_dump({"records": len(records), "violations": len(violations)}))
    return EXIT_VIOLATION if violations else EXIT_OK


@lru_cache(maxsize=1)
def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kummer3", description="Pure cubic fields and their normal closures.")
    parser.add_argument("--version", action="version", version=f"kummer3 {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def fmt(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--json", action="store_true", help="JSON output (default)")
        g.add_argument("--pretty", action="store_true", help="aligned human-readable output")

    p = sub.add_parser("classify", help="classify the field Q(cbrt(d))")
    p.add_argument("d", type=int)
    fmt(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("multiplet", help="list all radicands sharing conductor f")
    p.add_argument("f", type=int)
    fmt(p)
    p.set_defaults(func=cmd_multiplet)

    p = sub.add_parser("symbol", help="cubic residue symbol of c at a prime above p")
    p.add_argument("c", type=int)
    p.add_argument("p", type=int)
    fmt(p)
    p.set_defaults(func=cmd_symbol)

    p = sub.add_parser("split", help="primary prime factors of p = 1 mod 3 in Z[w]")
    p.add_argument("p", type=int)
    fmt(p)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser(
        "census",
        help="statistics over 2 <= d < N",
        description=(
            "Enumerate all normalized radicands 2 <= d < N. The sieve uses about "
            f"2 bytes per integer; N is capped at {MAX_LIMIT}."
        ),
    )
    p.add_argument("--max", type=int, required=True, metavar="N")
    p.add_argument("--jobs", type=int, metavar="K", help="worker processes (env KUMMER3_JOBS)")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("--out", metavar="DIR", help="write one file per table into DIR")
    p.add_argument("--ingest", metavar="FILE", help="class data CSV d,pf_type,w,h_L,ck3[,h_k]")
    p.add_argument("--tables", metavar="LIST", help=f"comma-separated subset of {','.join(TABLE_IDS)}")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("check-ingest", help="validate a class data CSV against the structure rules")
    p.add_argument("file")
    p.set_defaults(func=cmd_check_ingest)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        for name in ("d", "f", "c", "p", "file"):
            # argparse can leave a positional as [] when given "-- --"
            if isinstance(getattr(args, name, None), list):
                raise UsageError(f"kummer3 {args.verb}: error: missing argument {name}")
        return args.func(args)
    except SystemExit as exc:
        # --help / --version
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INVALID
    except IngestError as exc:
        print(f"kummer3: ingest error: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (Kummer3Error, OSError, OverflowError) as exc:
        print(f"kummer3: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
