"""Exact arithmetic in Z/MZ and elementary integer number theory.

Everything here is deliberately small-scale: inputs stay far below 10**12,
so trial division is used throughout instead of a general factoring engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import ModulusMismatchError, NonUnitError, ZeroInputError

__all__ = [
    "ModInt",
    "QuadDisc",
    "inv_mod",
    "inv_int",
    "rational_residue",
    "rational_residue_int",
    "squarefree_part",
    "power_free_part",
    "fundamental_discriminant",
    "quad_in_cyclotomic",
    "factorize",
    "euler_phi",
    "is_prime",
    "prime_power",
    "is_perfect_square",
    "is_perfect_cube",
    "squarefree_class_of_fraction",
]


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of |n| by trial division; n must be nonzero."""
    if n == 0:
        raise ZeroInputError("cannot factor 0")
    n = abs(n)
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
        p = 3 if p == 2 else p + 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    p = 3
    while p * p <= n:
        if n % p == 0:
            return False
        p += 2
    return True


def prime_power(m: int) -> tuple[int, int] | None:
    """Return (p, e) with m = p**e, or None if m is not a prime power."""
    if m < 2:
        return None
    f = factorize(m)
    if len(f) != 1:
        return None
    ((p, e),) = f.items()
    return p, e


@lru_cache(maxsize=None)
def euler_phi(m: int) -> int:
    if m < 1:
        raise ZeroInputError("phi needs m >= 1")
    if m == 1:
        return 1
    out = 1
    for p, e in factorize(m).items():
        out *= p ** (e - 1) * (p - 1)
    return out


def inv_int(a: int, m: int) -> int:
    """Inverse of a mod m as a plain integer."""
    a %= m
    g = math.gcd(a, m)
    if g != 1:
        raise NonUnitError(f"{a} is not invertible mod {m}")
    return pow(a, -1, m)


@dataclass(frozen=True, order=True)
class ModInt:
    """Residue class a mod M, always stored reduced to [0, M)."""

    value: int
    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 2:
            raise ValueError("modulus must be >= 2")
        object.__setattr__(self, "value", self.value % self.modulus)

    def _coerce(self, other: "ModInt | int") -> "ModInt":
        if isinstance(other, int):
            return ModInt(other, self.modulus)
        if other.modulus != self.modulus:
            raise ModulusMismatchError(f"{self.modulus} != {other.modulus}")
        return other

    def __add__(self, other: "ModInt | int") -> "ModInt":
        o = self._coerce(other)
        return ModInt(self.value + o.value, self.modulus)

    def __sub__(self, other: "ModInt | int") -> "ModInt":
        o = self._coerce(other)
        return ModInt(self.value - o.value, self.modulus)

    def __mul__(self, other: "ModInt | int") -> "ModInt":
        o = self._coerce(other)
        return ModInt(self.value * o.value, self.modulus)

    def __neg__(self) -> "ModInt":
        return ModInt(-self.value, self.modulus)

    def inv(self) -> "ModInt":
        return ModInt(inv_int(self.value, self.modulus), self.modulus)

    def is_unit(self) -> bool:
        return math.gcd(self.value, self.modulus) == 1

    def __int__(self) -> int:
        return self.value


def inv_mod(a: ModInt) -> ModInt:
    """Multiplicative inverse; raises NonUnitError when gcd(a, M) != 1."""
    return a.inv()


def rational_residue_int(num: int, den: int, m: int) -> int:
    """num/den mod m as an integer.

    The denominator must be a unit mod m, except when it divides the
    numerator exactly (the fraction is secretly an integer).
    """
    if math.gcd(den, m) != 1:
        if num % den == 0:
            return (num // den) % m
        raise NonUnitError(f"{den} is not invertible mod {m}")
    return (num % m) * inv_int(den, m) % m


def rational_residue(num: int, den: int, m: int) -> ModInt:
    """Residue of the rational num/den at modulus m (den invertible)."""
    return ModInt(rational_residue_int(num, den, m), m)


def squarefree_part(n: int) -> int:
    """Signed squarefree d with n/d a positive perfect square."""
    if n == 0:
        raise ZeroInputError("squarefree part of 0 is undefined")
    d = 1
    for p, e in factorize(n).items():
        if e % 2:
            d *= p
    return d if n > 0 else -d


def power_free_part(n: int, k: int) -> int:
    """Divide out the maximal k-th-power divisor of n, keeping the sign."""
    if n == 0:
        raise ZeroInputError("power-free part of 0 is undefined")
    if k not in (4, 6):
        raise ValueError("k must be 4 or 6")
    m = 1
    for p, e in factorize(n).items():
        m *= p ** (e % k)
    return m if n > 0 else -m


def squarefree_class_of_fraction(q: Fraction) -> int:
    """Squarefree integer representing q modulo nonzero rational squares."""
    if q == 0:
        raise ZeroInputError("zero has no square class")
    return squarefree_part(q.numerator * q.denominator)


def fundamental_discriminant(d: int) -> int:
    """Fundamental discriminant of Q(sqrt(d)) for squarefree d (d=1 -> 1)."""
    if d == 0:
        raise ZeroInputError("no quadratic field over 0")
    if d != squarefree_part(d):
        raise ValueError(f"{d} is not squarefree")
    return d if d % 4 == 1 else 4 * d


@dataclass(frozen=True)
class QuadDisc:
    """Squarefree class d together with the discriminant of Q(sqrt(d))."""

    d: int
    fund_disc: int

    @classmethod
    def of(cls, n: int) -> "QuadDisc":
        d = squarefree_part(n)
        return cls(d, fundamental_discriminant(d))

    def __post_init__(self) -> None:
        if self.d != squarefree_part(self.d):
            raise ValueError(f"{self.d} is not squarefree")
        if self.fund_disc != fundamental_discriminant(self.d):
            raise ValueError("inconsistent fundamental discriminant")


def quad_in_cyclotomic(d: QuadDisc | int, m: int) -> bool:
    """Whether Q(sqrt(d)) lies in the m-th cyclotomic field.

    Containment holds exactly when the conductor |fund_disc| divides m.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    qd = d if isinstance(d, QuadDisc) else QuadDisc.of(d)
    return m % abs(qd.fund_disc) == 0


def is_perfect_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def is_perfect_cube(n: int) -> bool:
    a = abs(n)
    r = round(a ** (1 / 3))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c * c * c == a:
            return (c if n >= 0 else -c) ** 3 == n
    return False
