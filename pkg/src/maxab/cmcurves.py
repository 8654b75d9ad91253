"""The thirteen rational CM curve classes, twist extraction, and alpha.

Every CM elliptic curve over Q is a twist (quadratic, or quartic at
j = 1728, or sextic at j = 0) of a fixed representative curve; the twist
datum determines the quadratic invariant alpha whose square root shows up
in the maximal abelian subextension of division fields.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from math import isqrt

from .cartan import CMOrder
from .errors import NotCMError, SingularCurveError, UnknownOrderError
from .residues import (
    is_perfect_square,
    power_free_part,
    squarefree_class_of_fraction,
    squarefree_part,
)

__all__ = [
    "RationalCurve",
    "TwistData",
    "CM_TABLE",
    "j_invariant",
    "recognize_cm",
    "table_curve",
    "twist_factor",
    "alpha_of",
    "quadratic_twist",
    "table_as_json",
]

Rat = Fraction | int


@dataclass(frozen=True)
class RationalCurve:
    """Short Weierstrass curve y^2 = x^3 + A x + B over Q."""

    A: Fraction
    B: Fraction

    def __init__(self, A: Rat, B: Rat):
        object.__setattr__(self, "A", Fraction(A))
        object.__setattr__(self, "B", Fraction(B))
        if 4 * self.A**3 + 27 * self.B**2 == 0:
            raise SingularCurveError(f"4A^3 + 27B^2 = 0 for A={A}, B={B}")


@dataclass(frozen=True)
class TwistData:
    """Twist relation between a curve and its table representative.

    ``d`` is the reduced twist factor (squarefree, 4th- or 6th-power-free by
    kind); ``alpha`` the derived quadratic invariant; ``d_exact`` the exact
    rational twist in the quadratic case.
    """

    base_order: CMOrder
    kind: str  # "quadratic" | "quartic" | "sextic"
    d: int
    alpha: int
    d_exact: Fraction | None = None


# (j, delta_K, f, A, B) for the thirteen CM j-invariants over Q
_TABLE_ROWS: tuple[tuple[int, int, int, int, int], ...] = (
    (0, -3, 1, 0, 16),
    (54000, -3, 2, -15, 22),
    (-12288000, -3, 3, -480, 4048),
    (1728, -4, 1, 1, 0),
    (287496, -4, 2, -11, 14),
    (-3375, -7, 1, -1715, 33614),
    (16581375, -7, 2, -29155, 1915998),
    (8000, -8, 1, -4320, 96768),
    (-32768, -11, 1, -9504, 365904),
    (-884736, -19, 1, -608, 5776),
    (-884736000, -43, 1, -13760, 621264),
    (-147197952000, -67, 1, -117920, 15585808),
    (-262537412640768000, -163, 1, -34790720, 78984748304),
)

CM_TABLE: dict[int, tuple[CMOrder, RationalCurve]] = {
    j: (CMOrder(dk, f), RationalCurve(a, b)) for j, dk, f, a, b in _TABLE_ROWS
}


def j_invariant(curve: RationalCurve) -> Fraction:
    """Exact j = 1728 * 4A^3 / (4A^3 + 27B^2)."""
    a3 = 4 * curve.A**3
    return 1728 * a3 / (a3 + 27 * curve.B**2)


def recognize_cm(curve: RationalCurve) -> CMOrder:
    """The (delta_K, f) whose class-number-one j-invariant matches, exactly."""
    j = j_invariant(curve)
    if j.denominator == 1 and j.numerator in CM_TABLE:
        return CM_TABLE[j.numerator][0]
    raise NotCMError(f"j = {j} is not a CM j-invariant over Q")


def table_curve(order: CMOrder) -> RationalCurve:
    for base_order, curve in CM_TABLE.values():
        if base_order == order:
            return curve
    raise UnknownOrderError(f"no table curve for {order}")


def quadratic_twist(curve: RationalCurve, d: Rat) -> RationalCurve:
    """(A, B) -> (A d^2, B d^3)."""
    d = Fraction(d)
    if d == 0:
        raise ValueError("twist factor must be nonzero")
    return RationalCurve(curve.A * d * d, curve.B * d**3)


def _fourth_power_free(q: Fraction) -> int:
    # q modulo 4th powers of rationals, as an integer representative
    n = q.numerator * q.denominator**3
    return power_free_part(n, 4)


def _sixth_power_free(q: Fraction) -> int:
    n = q.numerator * q.denominator**5
    return power_free_part(n, 6)


def _quartic_alpha(d: int) -> int:
    # d = c*t^2 with squarefree t not in {1, 2} and c in {+-1, +-2} gives t
    for c in (1, -1, 2, -2):
        if d % c != 0:
            continue
        q = d // c
        if q <= 0 or not is_perfect_square(q):
            continue
        t = isqrt(q)
        if squarefree_part(t) == t and t not in (1, 2):
            return t
    return d


def twist_factor(curve: RationalCurve) -> TwistData:
    """Twist datum relating the curve to its table representative.

    Quadratic case: the exact rational twist is forced by the coefficient
    ratios, d = (B * A') / (B' * A); the stored d is its squarefree class.
    Sextic case (j = 0): d = B/16 reduced 6th-power-free.  Quartic case
    (j = 1728): d = A reduced 4th-power-free.
    """
    order = recognize_cm(curve)
    base = table_curve(order)
    if curve.A == 0:  # j = 0, sextic twist of y^2 = x^3 + 16
        raw = curve.B / base.B
        if raw.denominator == 1:
            d = power_free_part(raw.numerator, 6)
        else:
            d = _sixth_power_free(raw)
        return TwistData(order, "sextic", d, d)
    if curve.B == 0:  # j = 1728, quartic twist of y^2 = x^3 + x
        d = _fourth_power_free(curve.A)
        return TwistData(order, "quartic", d, _quartic_alpha(d))
    d_exact = (curve.B * base.A) / (base.B * curve.A)
    d = squarefree_class_of_fraction(d_exact)
    return TwistData(order, "quadratic", d, d, d_exact)


def alpha_of(curve: RationalCurve) -> int:
    """The quadratic invariant of the twist datum."""
    return twist_factor(curve).alpha


def table_as_json() -> list[dict]:
    """The shipped JSON resource, parsed."""
    text = resources.files("maxab").joinpath("data/cm_curves.json").read_text()
    return json.loads(text)
