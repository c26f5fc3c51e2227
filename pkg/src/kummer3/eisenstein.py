"""Arithmetic in the Eisenstein integers Z[w], w a primitive cube root of unity.

Elements are pairs (a, b) standing for a + b*w with w**2 = -1 - w.
"Primary" follows the convention x = 1 (mod 3 Z[w]), i.e. a = 1 and b = 0
mod 3, which singles out one element among the six associates of any x
whose norm is prime to 3.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

from .arith import factorize, is_prime
from .errors import InvalidInput


@dataclass(frozen=True)
class EisensteinInt:
    a: int
    b: int = 0

    def __add__(self, other):
        other = _coerce(other)
        return EisensteinInt(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return EisensteinInt(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        a, b, c, d = self.a, self.b, other.a, other.b
        # (a + bw)(c + dw) = ac + (ad + bc)w + bd w^2,  w^2 = -1 - w
        return EisensteinInt(a * c - b * d, a * d + b * c - b * d)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not in Z[w]")
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def norm(self) -> int:
        return self.a * self.a - self.a * self.b + self.b * self.b

    def conjugate(self) -> EisensteinInt:
        # w -> w^2 = -1 - w
        return EisensteinInt(self.a - self.b, -self.b)

    def divides(self, other) -> bool:
        return exact_quotient(_coerce(other), self) is not None

    def associates(self) -> list[EisensteinInt]:
        return [u * self for u in UNITS]

    def is_primary(self) -> bool:
        return self.a % 3 == 1 and self.b % 3 == 0

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}w"
        return f"{self.a}{self.b:+d}w"


def _coerce(x) -> EisensteinInt:
    if isinstance(x, EisensteinInt):
        return x
    if isinstance(x, int):
        return EisensteinInt(x, 0)
    raise TypeError(f"cannot use {type(x).__name__} as an Eisenstein integer")


ONE = EisensteinInt(1, 0)
ZETA = EisensteinInt(0, 1)
LAMBDA = EisensteinInt(1, -1)
LAMBDA_CUBED = LAMBDA**3
UNITS = (ONE, ZETA, ZETA * ZETA, -ONE, -ZETA, -(ZETA * ZETA))


def exact_quotient(x: EisensteinInt, y: EisensteinInt) -> EisensteinInt | None:
    """x / y when y divides x in Z[w], else None."""
    n = y.norm()
    if n == 0:
        raise ZeroDivisionError("division by zero in Z[w]")
    num = x * y.conjugate()
    if num.a % n or num.b % n:
        return None
    return EisensteinInt(num.a // n, num.b // n)


@dataclass(frozen=True)
class PrimarySplit:
    p: int
    pi1: EisensteinInt
    pi2: EisensteinInt


def primary_associate(x: EisensteinInt) -> EisensteinInt:
    if x.norm() % 3 == 0:
        raise InvalidInput(f"{x} has norm divisible by 3 and no primary associate")
    found = [y for y in x.associates() if y.is_primary()]
    assert len(found) == 1, found
    return found[0]


def split_prime(p: int) -> PrimarySplit:
    """Write p = pi1 * pi2 with conjugate primary primes; pi1 has b > 0."""
    if not is_prime(p) or p % 3 != 1:
        raise InvalidInput(f"{p} is not a prime congruent to 1 mod 3")
    bound = 2 * isqrt(p // 3 + 1) + 2
    for b in range(1, bound + 1):
        # a^2 - ab + b^2 = p  <=>  (2a - b)^2 = 4p - 3b^2
        disc = 4 * p - 3 * b * b
        if disc < 0:
            break
        r = isqrt(disc)
        if r * r != disc:
            continue
        for s in (r, -r):
            if (s + b) % 2 == 0:
                x = primary_associate(EisensteinInt((s + b) // 2, b))
                y = x.conjugate()
                pi1, pi2 = (x, y) if x.b > 0 else (y, x)
                return PrimarySplit(p, pi1, pi2)
    raise ArithmeticError(f"no representation found for {p}")  # unreachable for valid p


def lambda_cube_congruent_one(x: EisensteinInt) -> bool:
    """True iff x = 1 mod (1 - w)**3, tested by exact division."""
    if not x.is_primary():
        raise InvalidInput(f"{x} is not primary")
    return exact_quotient(x - ONE, LAMBDA_CUBED) is not None


@dataclass(frozen=True)
class CubicSymbol:
    exponent: int

    @property
    def trivial(self) -> bool:
        return self.exponent == 0


def least_primitive_root(p: int) -> int:
    if p == 2:
        return 1
    qs = factorize(p - 1).primes
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise ArithmeticError(f"no primitive root mod {p}")


def cubic_symbol_rational(c: int, p: int) -> CubicSymbol:
    """Cubic residue symbol of a rational integer c at a prime above p.

    The residue field is F_p, so c is a cube there iff c^((p-1)/3) = 1 mod p.
    The exponent k is fixed by c^((p-1)/3) = g^(k(p-1)/3) with g the least
    primitive root mod p.
    """
    if not is_prime(p) or p % 3 != 1:
        raise InvalidInput(f"{p} is not a prime congruent to 1 mod 3")
    if c % p == 0:
        raise InvalidInput(f"{p} divides {c}")
    k = (p - 1) // 3
    value = pow(c, k, p)
    if value == 1:
        return CubicSymbol(0)
    omega = pow(least_primitive_root(p), k, p)
    if value == omega:
        return CubicSymbol(1)
    assert value == omega * omega % p
    return CubicSymbol(2)


def is_cubic_residue(c: int, p: int) -> bool:
    """Fast triviality test used by the census; no primitive root needed."""
    return pow(c, (p - 1) // 3, p) == 1
