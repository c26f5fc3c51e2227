"""Conductors of Q(w, cbrt(d)) / Q(w), their multiplicity and multiplets."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .arith import (
    PrimeClass,
    PrimeKind,
    Radicand,
    Species,
    SpfTable,
    classify_prime,
    factorize,
    radicand_from_factors,
)
from .errors import InvalidInput, NoFieldExists

_SPECIES_EXPONENT = {Species.S1A: 2, Species.S1B: 1, Species.S2: 0}


@dataclass(frozen=True)
class Conductor:
    """f = 3**e * l1 * ... * ln with distinct primes li != 3."""

    f: int
    e: int
    primes: tuple[PrimeClass, ...]

    @property
    def n(self) -> int:
        return len(self.primes)

    @property
    def u(self) -> int:
        return sum(1 for c in self.primes if c.plus_minus_one)

    @property
    def v(self) -> int:
        return self.n - self.u

    @property
    def split_primes(self) -> tuple[PrimeClass, ...]:
        return tuple(c for c in self.primes if c.kind is PrimeKind.SPLIT)

    @property
    def inert_primes(self) -> tuple[PrimeClass, ...]:
        return tuple(c for c in self.primes if c.kind is PrimeKind.INERT)

    @property
    def shape(self) -> tuple[int, tuple[str, ...]]:
        """(e, sorted residue codes): all that the classification depends on."""
        return self.e, tuple(sorted(c.code for c in self.primes))

    def __str__(self) -> str:
        return str(self.f)


def conductor_of(rad: Radicand) -> Conductor:
    e = _SPECIES_EXPONENT[rad.species]
    primes = tuple(classify_prime(p) for p, _ in rad.factors if p != 3)
    f = 3**e
    for c in primes:
        f *= c.prime
    return Conductor(f, e, primes)


def parse_conductor(f: int, table: SpfTable | None = None) -> Conductor:
    """Validate an integer as a conductor shape 3^e * squarefree (e <= 2)."""
    if not isinstance(f, int) or isinstance(f, bool) or f < 2:
        raise InvalidInput(f"conductor must be an integer >= 2, got {f!r}")
    e = 0
    primes = []
    for p, k in factorize(f, table):
        if p == 3:
            e = k
        elif k != 1:
            raise InvalidInput(f"{f} is not essentially square-free")
        else:
            primes.append(classify_prime(p))
    if e > 2:
        raise InvalidInput(f"3-adic exponent of {f} exceeds 2")
    if e <= 1 and not primes:
        raise InvalidInput(f"{f} has no prime divisor other than 3")
    return Conductor(f, e, tuple(primes))


def _x(k: int) -> int:
    # X_k = (2^k - (-1)^k) / 3 for k >= 0; always an integer
    return (2**k - (-1) ** k) // 3


def multiplicity(c: Conductor) -> int:
    """Number of pure cubic fields sharing the conductor c.

    Species 1a: 2^n.  Species 1b: 2^u X_v.  Species 2: 2^u X_{v-1}, where
    the v = 0 case uses X_{-1} = 1/2, i.e. 2^(u-1).
    """
    if c.e == 2:
        m = 2**c.n
    elif c.n == 0:
        raise InvalidInput(f"conductor {c.f} with e={c.e} needs a prime divisor other than 3")
    elif c.e == 1:
        m = 2**c.u * _x(c.v)
    elif c.v == 0:
        m = 2 ** (c.u - 1)
    else:
        m = 2**c.u * _x(c.v - 1)
    if m == 0:
        raise NoFieldExists(f"no pure cubic field has conductor {c.f}")
    return m


@dataclass(frozen=True)
class Multiplet:
    conductor: Conductor
    m: int
    companions: tuple[Radicand, ...]

    def as_dict(self) -> dict:
        return {
            "f": self.conductor.f,
            "m": self.m,
            "companions": [r.d for r in self.companions],
        }


def companion_radicands(c: Conductor) -> list[Radicand]:
    """All normalized radicands whose conductor is c, ascending.

    Brute force over the exponent vectors; independent of the closed form.
    """
    ells = [pc.prime for pc in c.primes]
    three_exps = (1, 2) if c.e == 2 else (0,)
    seen: dict[int, Radicand] = {}
    for e0 in three_exps:
        for exps in product((1, 2), repeat=len(ells)):
            factors = list(zip(ells, exps))
            if e0:
                factors.append((3, e0))
            try:
                rad = radicand_from_factors(factors)
            except InvalidInput:
                continue
            if conductor_of(rad).f == c.f:
                seen[rad.d] = rad
    return [seen[d] for d in sorted(seen)]


def enumerate_companions(c: Conductor) -> Multiplet:
    m = multiplicity(c)
    companions = companion_radicands(c)
    if len(companions) != m:
        raise AssertionError(
            f"conductor {c.f}: {len(companions)} companions but multiplicity {m}"
        )
    return Multiplet(c, m, tuple(companions))
