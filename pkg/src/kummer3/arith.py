"""Exact integer arithmetic: sieving, factorization, radicand normalization.

Everything here works on plain Python ints.  The smallest-prime-factor
table is a numpy array so that a census up to 10**8 stays within a few
hundred megabytes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import gcd, isqrt, prod

import numpy as np

from .errors import ConfigurationError, InvalidInput, NotAField

MAX_LIMIT = 10**8
MAX_INT = 2**64 - 1

# deterministic for every n < 3.3e24, which covers the 64-bit range
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


class SpfTable:
    """Smallest prime factor lookup for 2 <= n <= limit.

    Composite entries store their least prime factor (always <= sqrt(limit),
    so uint16 suffices below 2**32); primes store 0.  ``table[n]`` hides the
    encoding and always returns the least prime dividing n.
    """

    def __init__(self, limit: int, raw: np.ndarray):
        self.limit = limit
        self.raw = raw

    def __getitem__(self, n: int) -> int:
        if n < 2 or n > self.limit:
            raise IndexError(n)
        p = int(self.raw[n])
        return p if p else n

    def __len__(self) -> int:
        return self.limit + 1

    def is_prime(self, n: int) -> bool:
        return 2 <= n <= self.limit and self.raw[n] == 0


def sieve_spf(limit: int) -> SpfTable:
    """Build the smallest-prime-factor table up to ``limit`` inclusive."""
    if not isinstance(limit, (int, np.integer)) or not 2 <= limit <= MAX_LIMIT:
        raise ConfigurationError(f"sieve limit must lie in [2, {MAX_LIMIT}], got {limit!r}")
    limit = int(limit)
    raw = np.zeros(limit + 1, dtype=np.uint16)
    for p in range(2, isqrt(limit) + 1):
        if raw[p]:
            continue
        block = raw[p * p :: p]
        block[block == 0] = p
    return SpfTable(limit, raw)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all 64-bit n."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    # n is odd, composite, and has no prime factor below 50
    for c in range(1, n):
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += 128
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"Pollard-Brent failed on {n}")


def _split_large(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r = isqrt(n)
    if r * r == n:
        _split_large(r, out)
        _split_large(r, out)
        return
    g = _pollard_brent(n)
    _split_large(g, out)
    _split_large(n // g, out)


@dataclass(frozen=True)
class Factorization:
    value: int
    factors: tuple[tuple[int, int], ...]

    def __iter__(self):
        return iter(self.factors)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


def factorize(n: int, table: SpfTable | None = None) -> Factorization:
    """Canonical prime factorization of a positive integer.

    Uses ``table`` when it covers n, otherwise trial division by small
    primes followed by Pollard-Brent.
    """
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise InvalidInput(f"expected an integer, got {n!r}")
    n = int(n)
    if n <= 0:
        raise InvalidInput(f"cannot factorize {n}")
    if n > MAX_INT:
        raise InvalidInput(f"{n} exceeds the 64-bit range")
    out: dict[int, int] = {}
    m = n
    if table is not None and m <= table.limit:
        raw = table.raw
        while m > 1:
            p = int(raw[m]) or m
            m //= p
            out[p] = out.get(p, 0) + 1
    else:
        for p in _SMALL_PRIMES:
            while m % p == 0:
                m //= p
                out[p] = out.get(p, 0) + 1
        p = 53
        # cheap trial division before falling back to rho
        while p < 1000 and p * p <= m:
            while m % p == 0:
                m //= p
                out[p] = out.get(p, 0) + 1
            p += 2
        if m > 1 and p * p > m:
            out[m] = out.get(m, 0) + 1
        else:
            _split_large(m, out)
    return Factorization(n, tuple(sorted(out.items())))


def multiply(factors) -> int:
    return prod(p**e for p, e in factors)


class Species(str, enum.Enum):
    S1A = "1a"
    S1B = "1b"
    S2 = "2"


def species_of(d: int) -> Species:
    """Dedekind species of a cube-free radicand."""
    if d % 3 == 0:
        return Species.S1A
    if d % 9 in (1, 8):
        return Species.S2
    return Species.S1B


@dataclass(frozen=True)
class Radicand:
    """A cube-free radicand ``d = d1 * d2**2``.

    ``factors`` is the factorization of d itself (exponents 1 or 2).
    """

    d: int
    d1: int
    d2: int
    species: Species
    factors: tuple[tuple[int, int], ...]

    @property
    def normalized(self) -> bool:
        return self.d1 > self.d2

    @property
    def co_radicand(self) -> Radicand:
        return radicand_from_factors([(p, 3 - e) for p, e in self.factors], normalize=False)

    def __str__(self) -> str:
        return str(self.d)


def radicand_from_factors(factors, normalize: bool = True) -> Radicand:
    """Build a Radicand from a prime/exponent list; exponents are reduced mod 3.

    With ``normalize`` the representative with d1 > d2 is returned.
    """
    kept = sorted((p, e % 3) for p, e in factors if e % 3)
    d1 = prod(p for p, e in kept if e == 1)
    d2 = prod(p for p, e in kept if e == 2)
    if d1 == 1 and d2 == 1:
        raise NotAField("perfect cube is not a field radicand")
    if normalize and d1 < d2:
        d1, d2 = d2, d1
        kept = [(p, 3 - e) for p, e in kept]
    d = d1 * d2 * d2
    return Radicand(d, d1, d2, species_of(d), tuple(kept))


def cube_free_part(n: int, table: SpfTable | None = None) -> int:
    f = factorize(n, table)
    return prod(p ** (e % 3) for p, e in f)


def normalize_radicand(n: int, table: SpfTable | None = None) -> Radicand:
    """Cube-free, normalized representative of the field Q(cbrt(n))."""
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n <= 1:
        raise InvalidInput(f"radicand must be an integer > 1, got {n!r}")
    return radicand_from_factors(factorize(n, table).factors)


class PrimeKind(str, enum.Enum):
    THREE = "three"
    SPLIT = "p"  # 1 mod 3
    INERT = "q"  # 2 mod 3


@dataclass(frozen=True, order=True)
class PrimeClass:
    prime: int
    kind: PrimeKind
    mod9: int

    @property
    def plus_minus_one(self) -> bool:
        """True for primes congruent to 1 or 8 mod 9."""
        return self.mod9 in (1, 8)

    @property
    def code(self) -> str:
        """Short residue label: 'p1', 'p47', 'q8', 'q25' or '3'."""
        if self.kind is PrimeKind.THREE:
            return "3"
        if self.kind is PrimeKind.SPLIT:
            return "p1" if self.mod9 == 1 else "p47"
        return "q8" if self.mod9 == 8 else "q25"


def classify_prime(ell: int) -> PrimeClass:
    if not is_prime(ell):
        raise InvalidInput(f"{ell} is not prime")
    if ell == 3:
        return PrimeClass(3, PrimeKind.THREE, 3)
    kind = PrimeKind.SPLIT if ell % 3 == 1 else PrimeKind.INERT
    return PrimeClass(ell, kind, ell % 9)
