"""Cartan subgroups of GL(2, Z/MZ) attached to imaginary quadratic orders.

Two presentations are kept side by side and never silently interchanged:

* the (delta, phi) presentation  c(a, b) = [[a + b*phi, b], [delta*b, a]],
  whose parameters are derived from an order's discriminant, and
* the diagonal/antidiagonal presentations used for split and non-split
  Cartans at odd primes ([[a, 0], [0, b]] resp. [[a, delta*b], [b, a]]).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    BadDeltaError,
    BadTargetError,
    NonUnitDetError,
    UnsupportedInputError,
)
from .matgroups import FiniteMatGroup, Mat2, _encode_batch, _left_mul_batch, closure
from .residues import (
    ModInt,
    factorize,
    is_prime,
    prime_power,
    rational_residue_int,
    squarefree_part,
)

__all__ = [
    "CMOrder",
    "CartanParams",
    "order_from_disc",
    "params_for",
    "splitting_type",
    "cartan_matrix",
    "conj_matrix",
    "build_cartan",
    "build_normalizer",
    "split_cartan",
    "split_normalizer",
    "nonsplit_cartan",
    "nonsplit_normalizer",
    "expected_cartan_order",
    "kernel_matrices",
]


@dataclass(frozen=True, order=True)
class CMOrder:
    """Order of conductor f in the imaginary quadratic field of discriminant delta_K."""

    delta_K: int
    f: int = 1

    def __post_init__(self) -> None:
        if self.delta_K >= 0 or self.delta_K % 4 not in (0, 1):
            raise ValueError(f"{self.delta_K} is not a negative discriminant")
        d = self.delta_K
        if d % 4 == 0:
            q = d // 4
            if squarefree_part(q) != q or q % 4 == 1:
                raise ValueError(f"{d} is not fundamental")
        else:
            if squarefree_part(d) != d:
                raise ValueError(f"{d} is not fundamental")
        if self.f < 1:
            raise ValueError("conductor must be >= 1")

    @property
    def disc(self) -> int:
        return self.delta_K * self.f * self.f


def order_from_disc(disc: int) -> CMOrder:
    """Split a negative discriminant into (fundamental part, conductor)."""
    if disc >= 0:
        raise ValueError("discriminant must be negative")
    f = 1
    for p, e in factorize(disc).items():
        f *= p ** (e // 2)
    while f > 1:
        dk, rem = divmod(disc, f * f)
        if rem == 0 and dk % 4 in (0, 1):
            try:
                return CMOrder(dk, f)
            except ValueError:
                pass
        # shrink f by one prime factor and retry
        for p in factorize(f):
            f //= p
            break
    return CMOrder(disc, 1)


@dataclass(frozen=True)
class CartanParams:
    """(delta, phi) residues at a fixed modulus, plus the splitting flavor."""

    delta: ModInt
    phi: ModInt
    modulus: int
    flavor: str | None = None  # "ramified" | "split" | "inert" when modulus = p^n

    def __post_init__(self) -> None:
        if self.delta.modulus != self.modulus or self.phi.modulus != self.modulus:
            raise ValueError("delta/phi modulus disagrees with params modulus")


def splitting_type(order: CMOrder, p: int) -> str:
    """Behavior of p in the order: ramified, split, or inert."""
    if not is_prime(p):
        raise UnsupportedInputError(f"{p} is not prime")
    if (order.delta_K * order.f) % p == 0:
        return "ramified"
    if p == 2:
        return "split" if order.delta_K % 8 == 1 else "inert"
    return "split" if pow(order.delta_K % p, (p - 1) // 2, p) == 1 else "inert"


def params_for(order: CMOrder, modulus: int) -> CartanParams:
    """Derive (delta, phi) for the order at the given modulus.

    delta = disc/4 and phi = 0 when disc = 0 mod 4 or the modulus is odd;
    otherwise delta = ((delta_K - 1)/4) * f^2 and phi = f.
    """
    if modulus < 2:
        raise ValueError("modulus must be >= 2")
    disc = order.disc
    if disc % 4 == 0 or modulus % 2 == 1:
        delta = rational_residue_int(disc, 4, modulus)
        phi = 0
    else:
        delta = ((order.delta_K - 1) // 4) * order.f * order.f % modulus
        phi = order.f % modulus
    flavor = None
    pp = prime_power(modulus)
    if pp is not None:
        flavor = splitting_type(order, pp[0])
    return CartanParams(ModInt(delta, modulus), ModInt(phi, modulus), modulus, flavor)


def cartan_matrix(params: CartanParams, a: int | ModInt, b: int | ModInt) -> Mat2:
    """c(a, b) = [[a + b*phi, b], [delta*b, a]] with unit determinant."""
    m = params.modulus
    av = int(a) % m
    bv = int(b) % m
    d = params.delta.value
    ph = params.phi.value
    det = (av * av + av * bv * ph - d * bv * bv) % m
    if math.gcd(det, m) != 1:
        raise NonUnitDetError(f"det {det} not a unit mod {m} for (a, b)=({av}, {bv})")
    return Mat2.of(av + bv * ph, bv, d * bv, av, m)


def conj_matrix(params: CartanParams, eps: int = 1) -> Mat2:
    """The involution c_eps = [[-eps, 0], [phi, eps]]."""
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    return Mat2.of(-eps, 0, params.phi.value, eps, params.modulus)


def _cartan_codes(delta: int, phi: int, m: int) -> np.ndarray:
    a = np.arange(m, dtype=np.int64)
    A = np.repeat(a, m)
    B = np.tile(a, m)
    det = (A * A + A * B * phi - delta * B * B) % m
    mask = np.gcd(det, m) == 1
    A, B = A[mask], B[mask]
    return np.sort(
        _encode_batch((A + B * phi) % m, B, (delta * B) % m, A, m)
    )


@lru_cache(maxsize=None)
def _build_cartan_cached(delta: int, phi: int, m: int) -> FiniteMatGroup:
    return FiniteMatGroup(m, _cartan_codes(delta, phi, m))


def build_cartan(params: CartanParams) -> FiniteMatGroup:
    """All c(a, b) with unit determinant; abelian by construction."""
    return _build_cartan_cached(params.delta.value, params.phi.value, params.modulus)


@lru_cache(maxsize=None)
def _build_normalizer_cached(delta: int, phi: int, m: int) -> FiniteMatGroup:
    cartan = _build_cartan_cached(delta, phi, m)
    params = CartanParams(ModInt(delta, m), ModInt(phi, m), m)
    c1 = conj_matrix(params, 1)
    for g in cartan.generators:
        if c1 * g * c1.inv() not in cartan:
            # c1 always normalizes the Cartan; fall back to generic closure
            return closure(cartan.generators + (c1,), modulus=m)
    codes = np.union1d(cartan.codes, _left_mul_batch(c1, cartan.codes))
    return FiniteMatGroup(m, codes, cartan.generators + (c1,))


def build_normalizer(params: CartanParams) -> FiniteMatGroup:
    """The group generated by the Cartan and c_1; order found by enumeration.

    At modulus 2 the involution can fall inside the Cartan, collapsing the
    index-2 coset; the union below counts whatever actually happens.
    """
    return _build_normalizer_cached(params.delta.value, params.phi.value, params.modulus)


def _require_odd_prime_power(p: int, n: int) -> int:
    if not is_prime(p) or p == 2:
        raise UnsupportedInputError("diagonal presentations need an odd prime")
    if n < 1:
        raise UnsupportedInputError("n must be >= 1")
    return p**n


def split_cartan(p: int, n: int) -> FiniteMatGroup:
    """Diagonal matrices diag(a, b) with unit determinant, modulus p^n."""
    m = _require_odd_prime_power(p, n)
    a = np.arange(m, dtype=np.int64)
    units = a[np.gcd(a, m) == 1]
    A = np.repeat(units, units.size)
    B = np.tile(units, units.size)
    zero = np.zeros_like(A)
    return FiniteMatGroup(m, np.sort(_encode_batch(A, zero, zero, B, m)))


def split_normalizer(p: int, n: int) -> FiniteMatGroup:
    m = p**n
    cartan = split_cartan(p, n)
    gamma1 = Mat2.of(0, 1, 1, 0, m)
    codes = np.union1d(cartan.codes, _left_mul_batch(gamma1, cartan.codes))
    return FiniteMatGroup(m, codes, cartan.generators + (gamma1,))


def _check_nonsplit_delta(delta: int, p: int) -> None:
    d = delta % p
    if d == 0 or pow(d, (p - 1) // 2, p) == 1:
        raise BadDeltaError(f"delta={delta} is a square (or zero) mod {p}")


def nonsplit_cartan(p: int, n: int, delta: int) -> FiniteMatGroup:
    """Matrices [[a, delta*b], [b, a]] with unit determinant, delta non-square."""
    m = _require_odd_prime_power(p, n)
    _check_nonsplit_delta(delta, p)
    a = np.arange(m, dtype=np.int64)
    A = np.repeat(a, m)
    B = np.tile(a, m)
    det = (A * A - delta * B * B) % m
    mask = np.gcd(det, m) == 1
    A, B = A[mask], B[mask]
    return FiniteMatGroup(m, np.sort(_encode_batch(A, (delta * B) % m, B, A, m)))


def nonsplit_normalizer(p: int, n: int, delta: int) -> FiniteMatGroup:
    m = p**n
    cartan = nonsplit_cartan(p, n, delta)
    c1 = Mat2.of(1, 0, 0, -1, m)
    codes = np.union1d(cartan.codes, _left_mul_batch(c1, cartan.codes))
    return FiniteMatGroup(m, codes, cartan.generators + (c1,))


def expected_cartan_order(flavor: str, p: int, n: int) -> int:
    """Closed-form Cartan order; the enumeration oracle's counterpart."""
    if n < 1 or not is_prime(p):
        raise UnsupportedInputError("need prime p and n >= 1")
    if flavor == "ramified":
        return p ** (2 * n - 1) * (p - 1)
    if flavor == "split":
        return p ** (2 * (n - 1)) * (p - 1) ** 2
    if flavor == "inert":
        return p ** (2 * (n - 1)) * (p * p - 1)
    raise ValueError(f"unknown flavor {flavor!r}")


def kernel_matrices(params: CartanParams) -> list[Mat2]:
    """The p^2 matrices I + p^n * [[k1 + phi*k2, k2], [delta*k2, k1]].

    These form the kernel of reduction from modulus p^(n+1) to p^n on the
    normalizer; the caller's params must live at the top modulus p^(n+1).
    """
    pp = prime_power(params.modulus)
    if pp is None or pp[1] < 2:
        raise BadTargetError("modulus must be p^(n+1) with n >= 1")
    p, e = pp
    pn = p ** (e - 1)
    d = params.delta.value
    ph = params.phi.value
    m = params.modulus
    out = []
    for k1 in range(p):
        for k2 in range(p):
            out.append(
                Mat2.of(
                    1 + pn * (k1 + ph * k2),
                    pn * k2,
                    pn * d * k2 % m,
                    1 + pn * k1,
                    m,
                )
            )
    return out
