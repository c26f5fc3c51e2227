"""Census of all pure cubic fields with normalized radicand d < max_d.

The sweep is split into contiguous d-ranges; each range produces a partial
CensusTables and the partials are merged by addition, so the result does
not depend on the number of workers or on the order of the ranges.
"""

from __future__ import annotations

import csv
import io
import json
import multiprocessing as mp
from array import array
from collections import Counter
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

from .arith import MAX_LIMIT, Radicand, SpfTable, normalize_radicand, sieve_spf
from .conductor import conductor_of, multiplicity
from .eisenstein import is_cubic_residue
from .errors import ConfigurationError
from .pftype import (
    ClassDataRecord,
    Method,
    check_class_record,
    possible_types,
    read_ingest,
    resolve_type,
    symbol_parameters,
)
from .rank import (
    HONDA,
    ISMAILI1,
    ISMAILI2,
    RANK2,
    classify_item,
    matches_rank_one_form,
    matches_rank_zero_form,
    ramification_profile,
)

TABLE_IDS = ("species", "honda", "ismaili1", "ismaili2", "typesplit")
PARADIGM_CAP = 8
SAMPLE_MODULUS = 100  # every d = 0 mod 100 is re-derived through the full library path


@dataclass(frozen=True)
class CensusConfig:
    max_d: int
    jobs: int = 1
    tables: tuple[str, ...] = TABLE_IDS
    ingest_path: str | Path | None = None

    def __post_init__(self):
        if not isinstance(self.max_d, int) or not 2 <= self.max_d <= MAX_LIMIT:
            raise ConfigurationError(f"max_d must lie in [2, {MAX_LIMIT}], got {self.max_d!r}")
        if not isinstance(self.jobs, int) or self.jobs < 1:
            raise ConfigurationError(f"jobs must be >= 1, got {self.jobs!r}")
        unknown = [t for t in self.tables if t not in TABLE_IDS]
        if unknown:
            raise ConfigurationError(f"unknown tables: {', '.join(unknown)}")


@dataclass
class CensusTables:
    """Commutative counters; ``merge`` is associative and order independent."""

    max_d: int
    total_fields: int = 0
    species_counts: Counter = field(default_factory=Counter)
    item_counts: Counter = field(default_factory=Counter)
    variant_counts: Counter = field(default_factory=Counter)
    # (item code, resolved type value or None) -> count
    type_counts: Counter = field(default_factory=Counter)
    conjectural_fields: int = 0
    # row key -> smallest radicands
    paradigms: dict = field(default_factory=dict)
    # multiplet item code -> conductor f -> resolved types of its fields present
    multiplets: dict = field(default_factory=dict)
    multiplicity_of: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    ingest_skipped: list = field(default_factory=list)

    def _paradigm(self, key, d: int) -> None:
        lst = self.paradigms.setdefault(key, [])
        if len(lst) < PARADIGM_CAP:
            lst.append(d)

    def merge(self, other: CensusTables) -> CensusTables:
        self.total_fields += other.total_fields
        self.species_counts.update(other.species_counts)
        self.item_counts.update(other.item_counts)
        self.variant_counts.update(other.variant_counts)
        self.type_counts.update(other.type_counts)
        self.conjectural_fields += other.conjectural_fields
        for key, ds in other.paradigms.items():
            self.paradigms[key] = sorted(set(self.paradigms.get(key, ())) | set(ds))[:PARADIGM_CAP]
        for code, fs in other.multiplets.items():
            mine = self.multiplets.setdefault(code, {})
            for f, types in fs.items():
                mine.setdefault(f, []).extend(types)
        self.multiplicity_of.update(other.multiplicity_of)
        self.violations.extend(other.violations)
        self.ingest_skipped.extend(other.ingest_skipped)
        return self

    def finalize(self) -> CensusTables:
        for code, fs in self.multiplets.items():
            for f in fs:
                fs[f].sort(key=lambda x: "" if x is None else x)
        self.violations.sort()
        self.ingest_skipped.sort()
        return self

    def doublet_accounting(self) -> dict[str, tuple[int, int]]:
        """item code -> (complete multiplets, fields of incomplete multiplets)."""
        out = {}
        for code, fs in self.multiplets.items():
            m = self.multiplicity_of[code]
            complete = sum(1 for types in fs.values() if len(types) == m)
            partial = sum(len(types) for types in fs.values() if len(types) < m)
            out[code] = (complete, partial)
        return out

    def homogeneity(self, code: str) -> tuple[Counter, Counter]:
        """Type patterns of complete multiplets, and types of the incomplete ones."""
        m = self.multiplicity_of.get(code, 0)
        complete, partial = Counter(), Counter()
        for types in self.multiplets.get(code, {}).values():
            if len(types) == m:
                complete[tuple(types)] += 1
            else:
                partial.update(types)
        return complete, partial


@dataclass(frozen=True)
class _ShapeInfo:
    code: str
    family: str
    number: int
    variant: str
    forced: str | None
    m: int
    symbol: bool


_shared_table: SpfTable | None = None
_shared_records: dict[int, ClassDataRecord] = {}


def _shape_info(rad: Radicand) -> _ShapeInfo:
    c = conductor_of(rad)
    item = classify_item(c)
    cons = possible_types(c, ramification_profile(c))
    forced = next(iter(cons.possible)).value if len(cons.possible) == 1 else None
    m = multiplicity(c)
    return _ShapeInfo(
        item.code, item.family, item.number, item.variant, forced, m,
        symbol_parameters(c, item) is not None,
    )


def _full_path(d: int, table: SpfTable, record: ClassDataRecord | None):
    rad = normalize_radicand(d, table)
    c = conductor_of(rad)
    item = classify_item(c)
    cons = possible_types(c, ramification_profile(c))
    res = resolve_type(c, item, cons, record)
    return rad, c, item, cons, res


def _check_sample(d, table, code, resolved) -> None:
    rad, c, item, _, res = _full_path(d, table, None)
    if item.code != code:
        raise AssertionError(f"d={d}: fast path item {code}, library {item.code}")
    if res.method in (Method.FORCED, Method.SYMBOL) and res.resolved.value != resolved:
        raise AssertionError(f"d={d}: fast path type {resolved}, library {res.resolved}")
    rank = ramification_profile(c).ambiguous_rank
    if (rank == 1) != matches_rank_one_form(rad) or (rank == 0) != matches_rank_zero_form(rad):
        raise AssertionError(f"d={d}: rank {rank} disagrees with the radicand pattern")


def census_range(lo: int, hi: int, max_d: int, table: SpfTable, records=None) -> CensusTables:
    """Partial census over lo <= d < hi."""
    records = records or {}
    out = CensusTables(max_d)
    spf = array("H", table.raw[: hi].tobytes()) if hi <= table.limit + 1 else None
    if spf is None:
        raise ConfigurationError("sieve does not cover the requested range")
    shapes: dict = {}
    species_counts = out.species_counts
    item_counts = out.item_counts
    type_counts = out.type_counts
    for d in range(max(lo, 2), hi):
        m = d
        d1 = d2 = 1
        e3 = 0
        codes = []
        ok = True
        while m > 1:
            p = spf[m] or m
            k = 0
            while m % p == 0:
                m //= p
                k += 1
            if k >= 3:
                ok = False
                break
            if k == 1:
                d1 *= p
            else:
                d2 *= p
            if p == 3:
                e3 = k
            elif p % 3 == 1:
                codes.append("p1" if p % 9 == 1 else "p47")
            else:
                codes.append("q8" if p % 9 == 8 else "q25")
        if not ok or d1 <= d2:
            continue
        if e3:
            sp, e = "1a", 2
        elif d % 9 in (1, 8):
            sp, e = "2", 0
        else:
            sp, e = "1b", 1
        codes.sort()
        key = (e, tuple(codes))
        info = shapes.get(key)
        if info is None:
            info = shapes[key] = _shape_info(normalize_radicand(d, table))
        out.total_fields += 1
        species_counts[sp] += 1
        out._paradigm(("species", sp), d)
        code = info.code
        item_counts[code] += 1
        out._paradigm((code, ""), d)
        if info.variant:
            out.variant_counts[(code, info.variant)] += 1
            out._paradigm((code, "variant:" + info.variant), d)
        resolved = info.forced
        rec = records.get(d)
        if resolved is None and info.symbol:
            # Ismaili1 items 2-4: c = 3, or the inert prime for item 4
            mm = d // 3**e3
            ps = [q for q in _prime_support(mm, spf) if q % 3 == 1]
            p1 = ps[0]
            c = 3 if info.number in (2, 3) else next(q for q in _prime_support(mm, spf) if q % 3 == 2)
            if is_cubic_residue(c, p1):
                resolved = "beta"
                out.conjectural_fields += 1
            else:
                resolved = "alpha"
        if rec is not None:
            _, cfull, item, cons, res = _full_path(d, table, rec)
            for msg in check_class_record(rec, item, res, cons):
                out.violations.append((d, msg))
            if resolved is None:
                resolved = rec.pf_type.value
        type_counts[(code, resolved)] += 1
        if resolved is not None:
            out._paradigm((code, "type:" + resolved), d)
        if info.m >= 2 and info.family != RANK2:
            f = 3**e
            for q in _prime_support(d, spf):
                if q != 3:
                    f *= q
            out.multiplets.setdefault(code, {}).setdefault(f, []).append(resolved)
            out.multiplicity_of[code] = info.m
        if d % SAMPLE_MODULUS == 0:
            _check_sample(d, table, code, resolved)
    return out


def _prime_support(n: int, spf) -> list[int]:
    out = []
    while n > 1:
        p = spf[n] or n
        out.append(p)
        while n % p == 0:
            n //= p
    return out


def _worker(args):
    lo, hi, max_d = args
    return census_range(lo, hi, max_d, _shared_table, _shared_records)


def _chunks(max_d: int, parts: int) -> list[tuple[int, int]]:
    step = max(1, -(-(max_d - 2) // parts))
    return [(lo, min(lo + step, max_d)) for lo in range(2, max_d, step)]


def run_census(cfg: CensusConfig, table: SpfTable | None = None) -> CensusTables:
    global _shared_table, _shared_records
    if table is None or table.limit < cfg.max_d:
        table = sieve_spf(max(cfg.max_d, 2))
    records: dict[int, ClassDataRecord] = {}
    skipped = []
    if cfg.ingest_path is not None:
        for rec in read_ingest(cfg.ingest_path):
            if rec.d >= cfg.max_d or rec.d < 2:
                skipped.append((rec.d, "outside census range"))
                continue
            try:
                rad = normalize_radicand(rec.d, table)
            except Exception:
                skipped.append((rec.d, "not a field radicand"))
                continue
            if rad.d != rec.d:
                skipped.append((rec.d, f"not normalized (use {rad.d})"))
                continue
            records[rec.d] = rec
    result = CensusTables(cfg.max_d)
    if cfg.max_d > 2:
        if cfg.jobs == 1:
            result.merge(census_range(2, cfg.max_d, cfg.max_d, table, records))
        else:
            _shared_table, _shared_records = table, records
            try:
                ctx = mp.get_context("fork")
                with ctx.Pool(cfg.jobs) as pool:
                    for part in pool.imap_unordered(_worker, [
                        (lo, hi, cfg.max_d) for lo, hi in _chunks(cfg.max_d, cfg.jobs * 4)
                    ]):
                        result.merge(part)
            finally:
                _shared_table, _shared_records = None, {}
    result.ingest_skipped.extend(skipped)
    return result.finalize()


# -- emission ---------------------------------------------------------------

SHAPES = {
    "Honda(1)": "9",
    "Honda(2)": "q≡8(9)",
    "Honda(3)": "3q, q≡2,5(9)",
    "Honda(4)": "9q, q≡2,5(9)",
    "Honda(5)": "q1q2, qj≡2,5(9)",
    "Ismaili1(1)": "p1≡1(9)",
    "Ismaili1(2)": "3p1, p1≡4,7(9)",
    "Ismaili1(3)": "9p1, p1≡4,7(9)",
    "Ismaili1(4)": "p1q1, p1≡4,7(9), q1≡2,5(9)",
    "Ismaili2(1)": "9q1, q1≡8(9)",
    "Ismaili2(2)": "q1q2, q1,q2≡8(9)",
    "Ismaili2(3)": "3q1q2, q1,q2≡2,5(9)",
    "Ismaili2(4)": "3q1q2, q1≡2,5(9), q2≡8(9)",
    "Ismaili2(5)": "9q1q2, q1≡2,5(9), q2≡2(3)",
    "Ismaili2(6)": "q1q2q3, q1,q2,q3≡2,5(9)",
    "Ismaili2(7)": "q1q2q3, q1,q2≡2,5(9), q3≡8(9)",
}
VARIANT_SHAPES = {
    ("Ismaili2(5)", "a"): "9q1q2, q1≡2,5(9), q2≡2,5(9)",
    ("Ismaili2(5)", "b"): "9q1q2, q1≡2,5(9), q2≡8(9)",
}
_FAMILY_OF_TABLE = {"honda": HONDA, "ismaili1": ISMAILI1, "ismaili2": ISMAILI2}
_ITEM_COUNT = {HONDA: 5, ISMAILI1: 4, ISMAILI2: 7}
CSV_COLUMNS = (
    "item", "conductor_shape", "type", "count", "percent", "paradigms",
    "percent_base", "complete", "pseudo",
)


def percent(count: int, base: int) -> str:
    """Two-decimal percentage, rounded half up."""
    if base == 0:
        return "0.00"
    q = Decimal(100 * count) / Decimal(base)
    return str(q.quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def _row(item, shape, type_, count, base, base_name, paradigms=(), doublets=None) -> dict:
    return {
        "item": item,
        "shape": shape,
        "type": type_,
        "count": count,
        "percent": percent(count, base),
        "percent_base": base_name,
        "paradigms": list(paradigms),
        "doublets": doublets,
    }


def _pattern(types) -> str:
    return "(" + ",".join(t or "?" for t in types) + ")"


def _item_rows(tables: CensusTables, family: str) -> list[dict]:
    codes = [f"{family}({i})" for i in range(1, _ITEM_COUNT[family] + 1)]
    total = sum(tables.item_counts[c] for c in codes)
    accounting = tables.doublet_accounting()
    rows = []
    for code in codes:
        count = tables.item_counts[code]
        if not count:
            continue
        types = {t: n for (c, t), n in tables.type_counts.items() if c == code and n}
        m = tables.multiplicity_of.get(code, 1)
        type_label = ""
        if len(types) == 1 and None not in types:
            (only,) = types
            type_label = only if m == 1 else _pattern([only] * m)
        doublets = None
        if code in accounting:
            complete, pseudo = accounting[code]
            doublets = {"complete": complete, "pseudo": pseudo}
        rows.append(_row(
            code, SHAPES[code], type_label, count, total, "table",
            tables.paradigms.get((code, ""), ()), doublets,
        ))
        for (c, variant), n in sorted(tables.variant_counts.items()):
            if c == code:
                rows.append(_row(
                    code, VARIANT_SHAPES[(code, variant)], "", n, count, "item",
                    tables.paradigms.get((code, "variant:" + variant), ()),
                ))
        if not type_label:
            for t in ("alpha", "beta", "gamma", None):
                n = types.get(t, 0)
                if n:
                    rows.append(_row(
                        code, "", t or "unresolved", n, count, "item",
                        tables.paradigms.get((code, "type:" + t), ()) if t else (),
                    ))
    if total:
        rows.append(_row("total", "", "", total, tables.total_fields, "census"))
    return rows


def _species_rows(tables: CensusTables) -> list[dict]:
    rows = []
    for sp in ("1a", "1b", "2"):
        n = tables.species_counts[sp]
        if n:
            rows.append(_row(sp, "", "", n, tables.total_fields, "census",
                             tables.paradigms.get(("species", sp), ())))
    return rows


def _typesplit_rows(tables: CensusTables) -> list[dict]:
    rows = []
    for code in sorted(tables.multiplets, key=_code_order):
        complete, partial = tables.homogeneity(code)
        n_complete = sum(complete.values())
        for pattern, n in sorted(complete.items(), key=lambda kv: _pattern(kv[0])):
            rows.append(_row(code, SHAPES.get(code, ""), _pattern(pattern), n, n_complete, "complete"))
        n_partial = sum(partial.values())
        for t, n in sorted(partial.items(), key=lambda kv: kv[0] or "~"):
            rows.append(_row(code, SHAPES.get(code, ""), "incomplete:" + (t or "unresolved"),
                             n, n_partial, "incomplete"))
    return rows


def _code_order(code: str):
    family, _, rest = code.partition("(")
    order = {HONDA: 0, ISMAILI1: 1, ISMAILI2: 2}.get(family, 3)
    return order, int(rest[:-1]) if rest else 0


def build_tables(tables: CensusTables, table_ids=TABLE_IDS) -> list[dict]:
    out = []
    for tid in table_ids:
        if tid == "species":
            rows = _species_rows(tables)
        elif tid == "typesplit":
            rows = _typesplit_rows(tables)
        else:
            rows = _item_rows(tables, _FAMILY_OF_TABLE[tid])
        out.append({"table_id": tid, "rows": rows})
    return out


def census_document(tables: CensusTables, table_ids=TABLE_IDS) -> dict:
    from . import __version__

    return {
        "meta": {
            "max_d": tables.max_d,
            "version": __version__,
            "conjectural_rules_used": tables.conjectural_fields > 0,
        },
        "totals": {
            "fields": tables.total_fields,
            "by_species": {sp: tables.species_counts[sp] for sp in ("1a", "1b", "2")},
        },
        "tables": build_tables(tables, table_ids),
        "violations": [{"d": d, "message": msg} for d, msg in tables.violations],
        "ingest_skipped": [{"d": d, "reason": why} for d, why in tables.ingest_skipped],
    }


def _csv_record(row: dict) -> list:
    doublets = row["doublets"] or {}
    return [
        row["item"], row["shape"], row["type"], row["count"], row["percent"],
        " ".join(str(d) for d in row["paradigms"]), row["percent_base"],
        doublets.get("complete", ""), doublets.get("pseudo", ""),
    ]


def emit_tables(tables: CensusTables, fmt: str = "json", table_ids=TABLE_IDS) -> dict[str, bytes]:
    """Serialize the census; returns file name -> UTF-8 payload.

    JSON yields one document; CSV yields one RFC-4180 file per table.
    """
    doc = census_document(tables, table_ids)
    if fmt == "json":
        return {"census.json": (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode()}
    if fmt != "csv":
        raise ConfigurationError(f"unknown format {fmt!r}")
    files = {}
    for table in doc["tables"]:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(CSV_COLUMNS)
        for row in table["rows"]:
            writer.writerow(_csv_record(row))
        files[f"{table['table_id']}.csv"] = buf.getvalue().encode()
    return files


CENSUS_SCHEMA = {
    "type": "object",
    "required": ["meta", "totals", "tables"],
    "properties": {
        "meta": {
            "type": "object",
            "required": ["max_d", "version", "conjectural_rules_used"],
            "properties": {
                "max_d": {"type": "integer", "minimum": 2},
                "version": {"type": "string"},
                "conjectural_rules_used": {"type": "boolean"},
            },
        },
        "totals": {
            "type": "object",
            "required": ["fields", "by_species"],
            "properties": {
                "fields": {"type": "integer", "minimum": 0},
                "by_species": {
                    "type": "object",
                    "required": ["1a", "1b", "2"],
                    "additionalProperties": {"type": "integer", "minimum": 0},
                },
            },
        },
        "tables": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["table_id", "rows"],
                "properties": {
                    "table_id": {"enum": list(TABLE_IDS)},
                    "rows": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["item", "shape", "type", "count", "percent", "paradigms", "doublets"],
                            "properties": {
                                "item": {"type": "string"},
                                "shape": {"type": "string"},
                                "type": {"type": "string"},
                                "count": {"type": "integer", "minimum": 0},
                                "percent": {"type": "string", "pattern": r"^\d+\.\d\d$"},
                                "paradigms": {
                                    "type": "array",
                                    "items": {"type": "integer"},
                                    "maxItems": PARADIGM_CAP,
                                },
                                "doublets": {
                                    "oneOf": [
                                        {"type": "null"},
                                        {
                                            "type": "object",
                                            "required": ["complete", "pseudo"],
                                            "properties": {
                                                "complete": {"type": "integer"},
                                                "pseudo": {"type": "integer"},
                                            },
                                        },
                                    ]
                                },
                            },
                        },
                    },
                },
            },
        },
    },
}
