"""Symbolic abelian fields and the maximal-abelian-subextension classifier.

An abelian field descriptor is a cyclotomic level m together with a set of
fundamental discriminants of adjoined square roots, kept canonical: no
adjoined quadratic lies inside Q(zeta_m), and representatives are minimized
modulo the quadratic subfields of Q(zeta_m) and each other.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .cartan import CMOrder
from .cmcurves import RationalCurve, TwistData, recognize_cm, twist_factor
from .errors import UnsupportedInputError
from .residues import (
    euler_phi,
    factorize,
    fundamental_discriminant,
    is_perfect_cube,
    is_perfect_square,
    is_prime,
    squarefree_part,
)

__all__ = [
    "AbelianFieldDesc",
    "ClassificationReport",
    "abelian_field",
    "canonicalize",
    "field_degree",
    "classify_max_abelian",
    "predicted_index",
    "field_contains",
    "report_to_dict",
    "report_from_dict",
    "field_to_text",
]


@dataclass(frozen=True)
class AbelianFieldDesc:
    """Q(zeta_m, sqrt(d) for d in quad_discs), discs fundamental and canonical."""

    cyclo_level: int
    quad_discs: frozenset[int]


def _class_mul(a: int, b: int) -> int:
    return squarefree_part(a * b)


def _span(classes: set[int]) -> set[int]:
    """Subgroup of Q^x / squares generated by the given squarefree classes."""
    out = {1}
    gens = [c for c in classes if c != 1]
    for r in range(1, len(gens) + 1):
        for combo in combinations(gens, r):
            x = 1
            for c in combo:
                x = _class_mul(x, c)
            out.add(x)
    return out


def cyclotomic_quadratic_classes(m: int) -> set[int]:
    """Squarefree classes d with Q(sqrt(d)) inside Q(zeta_m), as a group."""
    gens: set[int] = set()
    if m > 1:
        for p in factorize(m):
            if p == 2:
                continue
            gens.add(p if p % 4 == 1 else -p)
        if m % 4 == 0:
            gens.add(-1)
        if m % 8 == 0:
            gens.add(2)
    return _span(gens)


def _canonical_rep(cls: int, group: set[int]) -> int:
    reps = {_class_mul(cls, v) for v in group}
    return min(reps, key=lambda x: (abs(x), x < 0))


def canonicalize(cyclo_level: int, discs) -> AbelianFieldDesc:
    """Drop quadratics absorbed by Q(zeta_m); minimize the survivors.

    Each input (any nonzero integer, taken modulo squares) is replaced by the
    representative of smallest |value| in its coset modulo the group spanned
    by the cyclotomic quadratic subfields and the classes already kept; ties
    break positive.  Output discs are stored as fundamental discriminants.
    """
    if cyclo_level < 1:
        raise ValueError("cyclotomic level must be >= 1")
    group = cyclotomic_quadratic_classes(cyclo_level)
    kept: list[int] = []
    classes = sorted(
        {squarefree_part(d) for d in discs}, key=lambda x: (abs(x), x < 0)
    )
    for cls in classes:
        rep = _canonical_rep(cls, group)
        if rep == 1:
            continue
        kept.append(rep)
        group = _span(group | {rep})
    return AbelianFieldDesc(
        cyclo_level, frozenset(fundamental_discriminant(r) for r in kept)
    )


def abelian_field(cyclo_level: int, discs=()) -> AbelianFieldDesc:
    return canonicalize(cyclo_level, discs)


def field_degree(field: AbelianFieldDesc) -> int:
    """[field : Q] = phi(m) * 2^(number of adjoined quadratics)."""
    return euler_phi(field.cyclo_level) * 2 ** len(field.quad_discs)


def field_contains(big: AbelianFieldDesc, small: AbelianFieldDesc) -> bool:
    """Whether the small descriptor's field embeds in the big one's."""
    if big.cyclo_level % small.cyclo_level != 0:
        return False
    ambient = _span(
        cyclotomic_quadratic_classes(big.cyclo_level)
        | {squarefree_part(d) for d in big.quad_discs}
    )
    return all(squarefree_part(d) in ambient for d in small.quad_discs)


@dataclass(frozen=True)
class ClassificationReport:
    curve: RationalCurve
    order: CMOrder
    p: int
    n: int
    alpha: int | None
    field: AbelianFieldDesc
    degree: int
    predicted_index: int | None
    theorem_case: str


def _fraction_is_square(q: Fraction) -> bool:
    return (
        q > 0
        and is_perfect_square(q.numerator)
        and is_perfect_square(q.denominator)
    )


def classify_max_abelian(
    curve: RationalCurve, p: int, n: int
) -> ClassificationReport:
    """Maximal abelian extension of Q inside the p^n-division field.

    Dispatch on (p, disc, j): odd p away from the discriminant gives
    K(zeta_{p^n}); odd p over the discriminant gives Q(zeta_{p^n}, sqrt(alpha)),
    with the j = 0 sextic variant at p = 3; p = 2 splits by disc mod 8 with
    separate n = 1 base cases.
    """
    if not is_prime(p):
        raise UnsupportedInputError(f"p = {p} is not prime")
    if n < 1:
        raise UnsupportedInputError(f"n = {n} must be >= 1")
    order = recognize_cm(curve)
    disc = order.disc
    j_zero = curve.A == 0
    j_1728 = curve.B == 0
    twist: TwistData | None = None
    if not (p == 2 and disc % 2 != 0) and not (p % 2 == 1 and disc % p != 0):
        twist = twist_factor(curve)

    def report(case: str, field: AbelianFieldDesc, alpha: int | None):
        return ClassificationReport(
            curve=curve,
            order=order,
            p=p,
            n=n,
            alpha=alpha,
            field=field,
            degree=field_degree(field),
            predicted_index=predicted_index(curve, p, n),
            theorem_case=case,
        )

    if p % 2 == 1 and disc % p != 0:
        return report("Thm1.1", abelian_field(p**n, {order.delta_K}), None)

    if p % 2 == 1 and not j_zero and not j_1728:
        assert twist is not None
        return report("Thm1.2", abelian_field(p**n, {twist.alpha}), twist.alpha)

    if p == 3 and j_zero:
        assert twist is not None
        return report("Thm1.3", abelian_field(3**n, {twist.alpha}), twist.alpha)

    # p = 2 from here on
    if disc % 2 != 0:
        return report("Thm1.4a", abelian_field(2**n, {order.delta_K}), None)

    if disc in (-12, -28):
        if n == 1:
            d = 3 if disc == -12 else 7
            return report("Thm1.4bi", abelian_field(1, {d}), None)
        return report("Thm1.4bi", abelian_field(2 ** (n + 1), {order.delta_K}), None)

    if disc == -4:
        assert twist is not None
        if n == 1:
            s = curve.A
            if _fraction_is_square(s):
                field = abelian_field(1, {-1})
            elif _fraction_is_square(-s):
                field = abelian_field(1, ())
            else:
                neg_s = -s
                field = abelian_field(
                    1, {squarefree_part(neg_s.numerator * neg_s.denominator)}
                )
            return report("Thm1.4bii", field, twist.alpha)
        return report(
            "Thm1.4bii", abelian_field(2 ** (n + 1), {twist.alpha}), twist.alpha
        )

    if disc in (-8, -16):
        assert twist is not None
        if n == 1:
            return report("Thm1.4biii", abelian_field(1, {2}), twist.alpha)
        return report(
            "Thm1.4biii", abelian_field(2 ** (n + 1), {twist.alpha}), twist.alpha
        )

    raise UnsupportedInputError(f"unhandled discriminant {disc} at p = {p}")


# -- index prediction --------------------------------------------------------


def _is_square_class(a: int) -> bool:
    return a > 0 and is_perfect_square(a)


def predicted_index(curve: RationalCurve, p: int, n: int) -> int | None:
    """Index of the Galois image in the ambient Cartan normalizer, when the
    twist invariant decides it; None for configurations with no stated test.
    """
    order = recognize_cm(curve)
    disc = order.disc

    if p == 3 and curve.A == 0:
        alpha = twist_factor(curve).alpha
        if n == 1:
            if alpha in (1, -27):
                return 6
            if (_is_square_class(alpha) or _is_square_class(-3 * alpha)) and (
                alpha not in (1, 9, -3, -27)
            ):
                return 2
            if is_perfect_cube(alpha):
                return 3
            return 1
        if alpha in (1, -3, 9, -27, 81, -243):
            return 6
        if _is_square_class(alpha) or _is_square_class(-3 * alpha):
            return 2
        if (
            is_perfect_cube(alpha)
            or is_perfect_cube(81 * alpha)
            or is_perfect_cube(9 * alpha)
        ):
            return 3
        return 1

    if p == 2 and curve.B == 0:
        d = twist_factor(curve).d
        if d in (1, -1, 2, -2, 4, -4, 8, -8):
            return 4
        if _is_square_class(abs(d)) or (d % 2 == 0 and _is_square_class(abs(d) // 2)):
            return 2
        return 1

    if p == 2 and disc in (-8, -16):
        alpha = twist_factor(curve).alpha
        return 2 if alpha in (1, -1, 2, -2) else 1

    return None


# -- serialization -----------------------------------------------------------


def report_to_dict(report: ClassificationReport) -> dict:
    return {
        "curve": {"A": str(report.curve.A), "B": str(report.curve.B)},
        "order": {"deltaK": report.order.delta_K, "f": report.order.f},
        "p": report.p,
        "n": report.n,
        "alpha": report.alpha,
        "field": {
            "cycloLevel": report.field.cyclo_level,
            "quadDiscs": sorted(report.field.quad_discs),
        },
        "degree": report.degree,
        "predictedIndex": report.predicted_index,
        "theoremCase": report.theorem_case,
    }


def report_from_dict(data: dict) -> ClassificationReport:
    curve = RationalCurve(Fraction(data["curve"]["A"]), Fraction(data["curve"]["B"]))
    field = AbelianFieldDesc(
        data["field"]["cycloLevel"], frozenset(data["field"]["quadDiscs"])
    )
    return ClassificationReport(
        curve=curve,
        order=CMOrder(data["order"]["deltaK"], data["order"]["f"]),
        p=data["p"],
        n=data["n"],
        alpha=data["alpha"],
        field=field,
        degree=data["degree"],
        predicted_index=data["predictedIndex"],
        theorem_case=data["theoremCase"],
    )


def report_to_json(report: ClassificationReport) -> str:
    return json.dumps(report_to_dict(report))


def _sqrt_text(fund: int) -> str:
    d = fund if fund % 4 == 1 else fund // 4
    return f"sqrt({d})"


def field_to_text(report: ClassificationReport) -> str:
    """Human-readable field, e.g. 'K(zeta_8), K = Q(sqrt(-11))'."""
    field = report.field
    m = field.cyclo_level
    discs = sorted(field.quad_discs)
    dk_fund = fundamental_discriminant(squarefree_part(report.order.delta_K))
    if report.theorem_case in ("Thm1.1", "Thm1.4a", "Thm1.4bi") and discs == [dk_fund]:
        dk_class = squarefree_part(report.order.delta_K)
        if m > 1:
            return f"K(zeta_{m}), K = Q(sqrt({dk_class}))"
        return f"K = Q(sqrt({dk_class}))"
    inner = []
    if m > 1:
        inner.append(f"zeta_{m}")
    inner.extend(_sqrt_text(d) for d in discs)
    return "Q(" + ", ".join(inner) + ")" if inner else "Q"
