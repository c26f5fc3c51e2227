"""Principal factorization types alpha, beta, gamma.

Each type is a triple (U, A, R): the unit norm index exponent and the
dimensions of absolute and relative principal factors, with A + R = U + 1.
Which types are admissible for a conductor follows from the estimates
1 <= A + R <= t, 1 <= A <= t - s, 0 <= R <= s, plus the rule that w can
only be the norm of a unit (U = 0) when every prime of f is 3 or = +-1 mod 9.
"""

from __future__ import annotations

import csv
import enum
import re
from dataclasses import dataclass
from pathlib import Path

from .conductor import Conductor
from .eisenstein import cubic_symbol_rational
from .errors import IngestError
from .rank import HONDA, ISMAILI1, ISMAILI2, RANK2, RamificationProfile, TheoremItem


class PFType(str, enum.Enum):
    ALPHA = "alpha"
    BETA = "beta"
    GAMMA = "gamma"


# type -> (U, A, R)
PF_TABLE = {
    PFType.ALPHA: (1, 1, 1),
    PFType.BETA: (1, 2, 0),
    PFType.GAMMA: (0, 1, 0),
}

UNIT_INDEX_Q = {PFType.ALPHA: 1, PFType.BETA: 3, PFType.GAMMA: 3}


@dataclass(frozen=True)
class PFConstraints:
    s: int
    t: int
    gamma_allowed: bool
    possible: frozenset[PFType]

    def sorted_types(self) -> list[PFType]:
        return [x for x in PFType if x in self.possible]


def possible_types(c: Conductor, prof: RamificationProfile) -> PFConstraints:
    t, s = prof.t, prof.s
    gamma_allowed = all(pc.plus_minus_one for pc in c.primes)
    possible = set()
    for pf, (u, a, r) in PF_TABLE.items():
        if not (1 <= a + r <= t and 1 <= a <= t - s and 0 <= r <= s):
            continue
        if u == 0 and not gamma_allowed:
            continue
        possible.add(pf)
    if not possible:
        raise AssertionError(f"no admissible principal factorization type for f={c.f}")
    return PFConstraints(s, t, gamma_allowed, frozenset(possible))


class Method(str, enum.Enum):
    FORCED = "forced"
    SYMBOL = "symbol"
    INGESTED = "ingested"
    UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class PFResolution:
    resolved: PFType | None
    method: Method
    conjectural: bool = False


def symbol_parameters(c: Conductor, item: TheoremItem) -> tuple[int, int] | None:
    """(c, p1) for the cubic residue criterion of Ismaili1 items 2-4, else None."""
    if item.family != ISMAILI1 or item.number not in (2, 3, 4):
        return None
    p1 = c.split_primes[0].prime
    if item.number == 4:
        return c.inert_primes[0].prime, p1
    return 3, p1


def resolve_type(
    c: Conductor,
    item: TheoremItem,
    constraints: PFConstraints,
    record: ClassDataRecord | None = None,
) -> PFResolution:
    if len(constraints.possible) == 1:
        (only,) = constraints.possible
        return PFResolution(only, Method.FORCED)
    params = symbol_parameters(c, item)
    if params is not None:
        if cubic_symbol_rational(*params).trivial:
            return PFResolution(PFType.BETA, Method.SYMBOL, conjectural=True)
        return PFResolution(PFType.ALPHA, Method.SYMBOL)
    if record is not None:
        return PFResolution(record.pf_type, Method.INGESTED)
    return PFResolution(None, Method.UNRESOLVED)


# -- class data -----------------------------------------------------------

_CK3_RE = re.compile(r"^\(\s*(\d+(?:\s*,\s*\d+)*)?\s*\)$")


def parse_ck3(text: str) -> tuple[int, ...]:
    """Parse '(9,3)' into descending orders (9, 3); '()' and '1' mean trivial.

    Cyclic factors of order 1 are dropped; each order must be a power of 3.
    """
    text = text.strip()
    if text == "1":
        return ()
    m = _CK3_RE.match(text)
    if not m:
        raise IngestError(f"malformed abelian type {text!r}")
    orders = [int(x) for x in m.group(1).split(",")] if m.group(1) else []
    for x in orders:
        if x < 1:
            raise IngestError(f"{x} in {text!r} is not a power of 3")
        y = x
        while y % 3 == 0:
            y //= 3
        if y != 1:
            raise IngestError(f"{x} in {text!r} is not a power of 3")
    return tuple(sorted((x for x in orders if x > 1), reverse=True))


def format_ck3(orders: tuple[int, ...]) -> str:
    return "(" + ",".join(str(x) for x in orders) + ")"


@dataclass(frozen=True)
class ClassDataRecord:
    d: int
    pf_type: PFType
    w: int
    h_L: int
    ck3: str
    h_k: int | None = None

    @property
    def unit_index(self) -> int:
        return UNIT_INDEX_Q[self.pf_type]

    def ck3_orders(self) -> tuple[int, ...]:
        return parse_ck3(self.ck3)


def _parse_type(text: str) -> PFType:
    try:
        return PFType(text.strip().lower())
    except ValueError:
        raise IngestError(f"unknown principal factorization type {text!r}") from None


def _parse_int(text: str, name: str) -> int:
    try:
        return int(text)
    except (TypeError, ValueError):
        raise IngestError(f"{name} must be an integer, got {text!r}") from None


def record_from_row(row: dict) -> ClassDataRecord:
    h_k = row.get("h_k")
    rec = ClassDataRecord(
        d=_parse_int(row.get("d"), "d"),
        pf_type=_parse_type(row.get("pf_type") or ""),
        w=_parse_int(row.get("w"), "w"),
        h_L=_parse_int(row.get("h_L"), "h_L"),
        ck3=(row.get("ck3") or "").strip(),
        h_k=_parse_int(h_k, "h_k") if h_k not in (None, "") else None,
    )
    rec.ck3_orders()
    return rec


REQUIRED_COLUMNS = ("d", "pf_type", "w", "h_L", "ck3")


def read_ingest(path: str | Path) -> list[ClassDataRecord]:
    """Read a UTF-8 CSV with header d,pf_type,w,h_L,ck3[,h_k]."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in REQUIRED_COLUMNS if c not in header]
        if missing:
            raise IngestError(f"{path}: missing columns {', '.join(missing)}")
        records = []
        for lineno, row in enumerate(reader, start=2):
            try:
                records.append(record_from_row(row))
            except IngestError as exc:
                raise IngestError(f"{path}:{lineno}: {exc}") from None
    return records


# Expected 3-class group shapes per (item, type):
# (orders of C_{L,3} and C_{k,3} as functions of w, minimal w, maximal w)
@dataclass(frozen=True)
class _Shape:
    ck3: str  # 'cyclic' -> (3^w); 'hetero' -> (3^w, 3^(w-1)); 'homo' -> (3^w, 3^w); 'trivial'
    w_min: int
    w_max: int | None = None

    def expected(self, w: int) -> tuple[int, ...]:
        if self.ck3 == "trivial":
            return ()
        if self.ck3 == "cyclic":
            return (3**w,)
        if self.ck3 == "hetero":
            return tuple(x for x in (3**w, 3 ** (w - 1)) if x > 1)
        return (3**w, 3**w)


_A, _B, _G = PFType.ALPHA, PFType.BETA, PFType.GAMMA
STRUCTURE_TABLE: dict[tuple[str, int, PFType], _Shape] = {
    (ISMAILI1, 1, _A): _Shape("hetero", 1),
    (ISMAILI1, 1, _G): _Shape("homo", 2),
    **{(ISMAILI1, i, _A): _Shape("cyclic", 1, 1) for i in (2, 3, 4)},
    **{(ISMAILI1, i, _B): _Shape("homo", 1, 1) for i in (2, 3, 4)},
    (ISMAILI2, 1, _B): _Shape("homo", 1),
    (ISMAILI2, 1, _G): _Shape("homo", 1),
    (ISMAILI2, 2, _B): _Shape("homo", 1),
    (ISMAILI2, 2, _G): _Shape("homo", 2),
    (ISMAILI2, 3, _B): _Shape("homo", 1, 1),
    (ISMAILI2, 4, _B): _Shape("homo", 1),
    (ISMAILI2, 5, _B): _Shape("homo", 1),
    (ISMAILI2, 6, _B): _Shape("homo", 1, 1),
    (ISMAILI2, 7, _B): _Shape("homo", 1),
    **{(HONDA, i, t): _Shape("trivial", 0, 0) for i in range(1, 6) for t in PFType},
}


def _v3(n: int) -> int:
    k = 0
    while n % 3 == 0:
        n //= 3
        k += 1
    return k


def check_class_record(
    rec: ClassDataRecord,
    item: TheoremItem,
    res: PFResolution,
    constraints: PFConstraints | None = None,
) -> list[str]:
    """Return a list of human-readable violations (empty when consistent)."""
    out = []
    try:
        orders = rec.ck3_orders()
    except IngestError as exc:
        return [str(exc)]
    if rec.h_L < 1:
        out.append(f"h_L={rec.h_L} is not positive")
    elif _v3(rec.h_L) != rec.w:
        out.append(f"3-part of h_L={rec.h_L} is not 3^{rec.w}")
    if rec.w < 0 or (rec.w == 0 and item.family != HONDA):
        out.append(f"w={rec.w} is not positive")
    if constraints is not None and rec.pf_type not in constraints.possible:
        allowed = ",".join(t.value for t in constraints.sorted_types())
        out.append(f"type {rec.pf_type.value} not admissible (possible: {allowed})")
    if res.method in (Method.FORCED, Method.SYMBOL) and res.resolved is not rec.pf_type:
        if res.conjectural:
            out.append(
                f"type {rec.pf_type.value} contradicts conjectural symbol prediction "
                f"{res.resolved.value} (potential counterexample)"
            )
        else:
            out.append(f"type {rec.pf_type.value} contradicts {res.method.value} {res.resolved.value}")
    shape = STRUCTURE_TABLE.get((item.family, item.number, rec.pf_type))
    if shape is not None and rec.w >= 0:
        if rec.w < shape.w_min or (shape.w_max is not None and rec.w > shape.w_max):
            bound = f"= {shape.w_min}" if shape.w_max == shape.w_min else f">= {shape.w_min}"
            out.append(f"{item.code} type {rec.pf_type.value} requires w {bound}, got {rec.w}")
        elif orders != shape.expected(rec.w):
            out.append(
                f"{item.code} type {rec.pf_type.value} with w={rec.w} requires "
                f"C_k3={format_ck3(shape.expected(rec.w))}, got {rec.ck3}"
            )
    if rec.h_k is not None and 3 * rec.h_k != rec.unit_index * rec.h_L**2:
        out.append(f"h_k={rec.h_k} violates h_k = (Q/3) h_L^2 with Q={rec.unit_index}")
    return out


class GenusScenario(str, enum.Enum):
    I = "I"  # noqa: E741
    II = "II"
    III = "III"
    NA = "NA"


def genus_scenario(
    item: TheoremItem, rec: ClassDataRecord | None, split_count: int = 0
) -> GenusScenario:
    """Location of the relative 3-genus field when C_{k,3} = (3,3) is known."""
    if rec is None:
        return GenusScenario.NA
    try:
        bicyclic = rec.ck3_orders() == (3, 3)
    except IngestError:
        return GenusScenario.NA
    if not bicyclic:
        return GenusScenario.NA
    if item.family == ISMAILI1 and item.number in (2, 3, 4):
        return GenusScenario.I if rec.pf_type is PFType.BETA else GenusScenario.NA
    if item.family == ISMAILI2:
        return GenusScenario.II
    if item.family == RANK2 and split_count == 1:
        return GenusScenario.III
    return GenusScenario.NA

