"""Ambiguous 3-class rank, BWB bounds for rank(C_{L,3}), and item labels.

The rank of the ambiguous class group of k/Q(w) is t - 2 + q*, where t
counts the primes of Q(w) ramified in k and q* is 1 exactly when w is a
relative norm from k.  Reducing q* to congruences: every primary prime
above a rational l != 3 is 1 mod (1-w)^3 iff l = +-1 mod 9.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import PrimeKind, Radicand, classify_prime, species_of
from .conductor import Conductor


@dataclass(frozen=True)
class RamificationProfile:
    t: int
    s: int
    qstar: int

    @property
    def ambiguous_rank(self) -> int:
        return self.t - 2 + self.qstar


def ramification_profile(c: Conductor) -> RamificationProfile:
    s = len(c.split_primes)
    t = 2 * s + len(c.inert_primes) + (1 if c.e else 0)
    qstar = 1 if all(pc.plus_minus_one for pc in c.primes) else 0
    return RamificationProfile(t, s, qstar)


@dataclass(frozen=True)
class BwbProfile:
    t: int
    s: int
    v: int

    @property
    def eps(self) -> int:
        return min(1, self.v)

    @property
    def delta(self) -> int:
        return self.t - 1 - self.eps

    @property
    def lower(self) -> int:
        return max(self.s, self.delta)

    @property
    def upper(self) -> int:
        return self.s + self.delta

    @property
    def exact_r(self) -> int | None:
        return self.lower if self.lower == self.upper else None

    def as_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "exact_r": self.exact_r}


def bwb_bounds(c: Conductor) -> BwbProfile:
    t = c.n + (1 if c.e else 0)
    s = len(c.split_primes)
    return BwbProfile(t, s, c.v)


HONDA = "Honda"
ISMAILI1 = "Ismaili1"
ISMAILI2 = "Ismaili2"
RANK2 = "RankTwoOrMore"
OTHER = "Other"


@dataclass(frozen=True, order=True)
class TheoremItem:
    """Item label of the rank-0/rank-1 classification.

    ``variant`` refines Ismaili2(5) by the second prime: 'a' for q2 = 2,5
    mod 9 and 'b' for q2 = 8 mod 9.
    """

    family: str
    number: int = 0
    rank: int = 0
    variant: str = ""

    @property
    def code(self) -> str:
        if self.family in (RANK2, OTHER):
            return self.family
        return f"{self.family}({self.number})"

    @property
    def rank_claim(self) -> int | str:
        return "≥2" if self.family == RANK2 else self.rank

    def __str__(self) -> str:
        return self.code


# (e, sorted residue codes) -> (family, item number)
_ITEMS = {
    (2, ()): (HONDA, 1),
    (0, ("q8",)): (HONDA, 2),
    (1, ("q25",)): (HONDA, 3),
    (2, ("q25",)): (HONDA, 4),
    (0, ("q25", "q25")): (HONDA, 5),
    (0, ("p1",)): (ISMAILI1, 1),
    (1, ("p47",)): (ISMAILI1, 2),
    (2, ("p47",)): (ISMAILI1, 3),
    (0, ("p47", "q25")): (ISMAILI1, 4),
    (2, ("q8",)): (ISMAILI2, 1),
    (0, ("q8", "q8")): (ISMAILI2, 2),
    (1, ("q25", "q25")): (ISMAILI2, 3),
    (1, ("q25", "q8")): (ISMAILI2, 4),
    (2, ("q25", "q25")): (ISMAILI2, 5),
    (2, ("q25", "q8")): (ISMAILI2, 5),
    (0, ("q25", "q25", "q25")): (ISMAILI2, 6),
    (0, ("q25", "q25", "q8")): (ISMAILI2, 7),
}
_VARIANTS = {(2, ("q25", "q25")): "a", (2, ("q25", "q8")): "b"}


def classify_item(c: Conductor) -> TheoremItem:
    rank = ramification_profile(c).ambiguous_rank
    if rank >= 2:
        return TheoremItem(RANK2, 0, rank)
    shape = c.shape
    hit = _ITEMS.get(shape)
    if hit is None:
        return TheoremItem(OTHER, 0, rank)
    family, number = hit
    return TheoremItem(family, number, rank, _VARIANTS.get(shape, ""))


def parse_item(code: str) -> TheoremItem:
    """Inverse of ``TheoremItem.code`` (rank taken from the family)."""
    if code == RANK2:
        return TheoremItem(RANK2, 0, 2)
    family, _, rest = code.partition("(")
    if family not in (HONDA, ISMAILI1, ISMAILI2) or not rest.endswith(")"):
        raise ValueError(f"unknown item code {code!r}")
    return TheoremItem(family, int(rest[:-1]), 0 if family == HONDA else 1)


# Independent pattern matchers working on the factorization of d itself.


def _residues(rad: Radicand):
    e = 0
    ps, qs = [], []
    for p, k in rad.factors:
        if p == 3:
            e = k
        elif classify_prime(p).kind is PrimeKind.SPLIT:
            ps.append(p % 9)
        else:
            qs.append(p % 9)
    return e, ps, qs


def matches_rank_one_form(rad: Radicand) -> bool:
    """True iff d has one of the nine rank-one shapes of the main theorem."""
    e, ps, qs = _residues(rad)
    pm1 = rad.d % 9 in (1, 8)
    if len(ps) == 1 and not qs:
        return e == 0 or ps[0] in (4, 7)
    if len(ps) == 1 and len(qs) == 1:
        return e == 0 and pm1 and ps[0] in (4, 7) and qs[0] in (2, 5)
    if ps:
        return False
    if len(qs) == 1:
        return e > 0 and qs[0] == 8
    if len(qs) == 2:
        if e == 0 and qs == [8, 8]:
            return True
        some_not8 = any(q != 8 for q in qs)
        return some_not8 and (e > 0 or not pm1)
    if len(qs) == 3 and e == 0 and pm1:
        n25 = sum(1 for q in qs if q in (2, 5))
        return n25 == 3 or (n25 == 2 and 8 in qs)
    return False


def matches_rank_zero_form(rad: Radicand) -> bool:
    """True iff d has one of Honda's shapes (3 does not divide h_L)."""
    e, ps, qs = _residues(rad)
    if ps:
        return False
    if not qs:
        return e > 0
    if len(qs) == 1:
        return e > 0 and qs[0] in (2, 5) or e == 0
    if len(qs) == 2:
        return e == 0 and all(q in (2, 5) for q in qs) and species_of(rad.d).value == "2"
    return False
