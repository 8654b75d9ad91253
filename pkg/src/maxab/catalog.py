"""Catalog of explicit Galois-image subgroups of Cartan normalizers.

Each case records a generator recipe (materializable at any prime-power
level), the pair (A, B) used for commutator perturbation steps, an optional
witness curve whose classified field must match the group's abelianization
degree, and the level past which the one-step reduction kernel is known to
lie inside the image.

Recipe atoms, by presentation:
  ("full",)              whole Cartan C_{delta,phi}
  ("subset", key)        filtered Cartan subgroup (keys below)
  ("cubes",)             {c^3 : c in Cartan}
  ("c_eps", e)           involution [[-e, 0], [phi, e]]
  ("cartan_elt", (a, b)) c(a, b); a, b ints or (num, den) rationals
  ("cube_elt", (a, b))   c(a, b)^3
  ("scalar", s)          s * Id
  ("mat", entries)       literal matrix, entries ints or (num, den)
  ("sp_full",)           split Cartan  diag(a, b)
  ("sp_cube_ratio",)     split Cartan with a/b a cube
  ("sp_elt", (a, b))     diag(a, b)
  ("gamma1",)            [[0, 1], [1, 0]]
  ("gamma_eps", e)       [[0, e], [e, 0]]
  ("ns_full",)           non-split Cartan [[a, delta*b], [b, a]]
  ("ns_elt", (a, b))
  ("c1diag",)            diag(1, -1)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cartan import (
    CartanParams,
    CMOrder,
    build_cartan,
    build_normalizer,
    cartan_matrix,
    conj_matrix,
    nonsplit_cartan,
    nonsplit_normalizer,
    split_cartan,
    split_normalizer,
)
from .errors import UnsupportedInputError
from .matgroups import (
    FiniteMatGroup,
    Mat2,
    _decode_batch,
    _encode_batch,
    _left_mul_batch,
    closure,
)
from .residues import ModInt, euler_phi, rational_residue_int

__all__ = [
    "ImageCase",
    "CATALOG",
    "CASES_BY_LABEL",
    "materialize",
    "materialize_spec",
    "case_params",
    "ambient_normalizer",
    "presentation_kernel_matrices",
    "max_enum_modulus",
    "INERT_AT_2_ORDERS",
]

# largest modulus at which groups are fully enumerated, per prime
_ENUM_LIMIT = {2: 64, 3: 243, 5: 125, 7: 343}


def max_enum_modulus(p: int) -> int:
    return _ENUM_LIMIT.get(p, 0)


@dataclass(frozen=True)
class ImageCase:
    label: str
    p: int
    presentation: str  # "cartan" | "split" | "nonsplit"
    recipe: tuple
    step_a: tuple
    step_b: tuple
    delta: tuple[int, int] = (0, 1)  # rational delta (cartan), integer (nonsplit)
    phi: int = 0
    order: tuple[int, int] | None = None
    witness: tuple[int, int] | None = None
    witness_levels: tuple[int, ...] = ()
    expected_index: int | None = None
    level_exp: int = 1
    note: str = ""

    @property
    def max_level(self) -> int:
        return 4 if self.p == 2 else 3

    def cm_order(self) -> CMOrder | None:
        return CMOrder(*self.order) if self.order else None


def case_params(case: ImageCase, modulus: int) -> CartanParams:
    if case.presentation != "cartan":
        raise UnsupportedInputError("params only defined for the cartan presentation")
    num, den = case.delta
    d = rational_residue_int(num, den, modulus)
    return CartanParams(ModInt(d, modulus), ModInt(case.phi, modulus), modulus)


def _frac_residue(x, modulus: int) -> int:
    if isinstance(x, tuple):
        return rational_residue_int(x[0], x[1], modulus)
    if isinstance(x, Fraction):
        return rational_residue_int(x.numerator, x.denominator, modulus)
    return x % modulus


def _subset_codes(case: ImageCase, key: str, modulus: int) -> np.ndarray:
    cartan = build_cartan(case_params(case, modulus))
    e11, e12, e21, e22 = _decode_batch(cartan.codes, modulus)
    a, b = e22, e12  # c(a, b) stores a: lower-right, b: upper-right
    p = case.p
    if key == "a_square":
        squares = {x * x % p for x in range(1, p)}
        mask = np.isin(a % p, np.array(sorted(squares), dtype=np.int64))
    elif key == "a_1_mod_3":
        mask = a % 3 == 1
    elif key == "a_1_b_0_mod_3":
        mask = (a % 3 == 1) & (b % 3 == 0)
    elif key == "a_unit_b_0_mod_3":
        mask = (a % 3 != 0) & (b % 3 == 0)
    else:
        raise ValueError(f"unknown subset key {key!r}")
    return cartan.codes[mask]


def _pairwise_mul(c1: np.ndarray, c2: np.ndarray, modulus: int) -> np.ndarray:
    a11, a12, a21, a22 = _decode_batch(c1, modulus)
    b11, b12, b21, b22 = _decode_batch(c2, modulus)
    return _encode_batch(
        (a11 * b11 + a12 * b21) % modulus,
        (a11 * b12 + a12 * b22) % modulus,
        (a21 * b11 + a22 * b21) % modulus,
        (a21 * b12 + a22 * b22) % modulus,
        modulus,
    )


def _cube_codes(case: ImageCase, modulus: int) -> np.ndarray:
    cartan = build_cartan(case_params(case, modulus))
    sq = _pairwise_mul(cartan.codes, cartan.codes, modulus)
    return np.unique(_pairwise_mul(sq, cartan.codes, modulus))


def _sp_cube_ratio_codes(p: int, modulus: int) -> np.ndarray:
    group = split_cartan(p, _exponent(p, modulus))
    phi_m = euler_phi(modulus)
    if phi_m % 3 != 0:
        return group.codes  # cubing is bijective; every ratio is a cube
    cube = np.zeros(modulus, dtype=bool)
    inv = np.zeros(modulus, dtype=np.int64)
    for u in range(modulus):
        if np.gcd(u, modulus) == 1:
            cube[u] = pow(u, phi_m // 3, modulus) == 1
            inv[u] = pow(u, -1, modulus)
    e11, _, _, e22 = _decode_batch(group.codes, modulus)
    ratio = (e11 * inv[e22]) % modulus
    return group.codes[cube[ratio]]


def _exponent(p: int, modulus: int) -> int:
    n = 0
    while modulus > 1:
        modulus //= p
        n += 1
    return n


def materialize_spec(case: ImageCase, spec: tuple, modulus: int) -> list[Mat2]:
    """Generators contributed by one recipe atom at the given modulus."""
    kind = spec[0]
    if kind == "full":
        return list(build_cartan(case_params(case, modulus)).generators)
    if kind == "subset":
        codes = _subset_codes(case, spec[1], modulus)
        return list(FiniteMatGroup(modulus, codes).generators)
    if kind == "cubes":
        codes = _cube_codes(case, modulus)
        return list(FiniteMatGroup(modulus, codes).generators)
    if kind == "c_eps":
        return [conj_matrix(case_params(case, modulus), spec[1])]
    if kind == "cartan_elt":
        a, b = spec[1]
        params = case_params(case, modulus)
        return [cartan_matrix(params, _frac_residue(a, modulus), _frac_residue(b, modulus))]
    if kind == "cube_elt":
        a, b = spec[1]
        params = case_params(case, modulus)
        m = cartan_matrix(params, _frac_residue(a, modulus), _frac_residue(b, modulus))
        return [m * m * m]
    if kind == "scalar":
        return [Mat2.scalar(_frac_residue(spec[1], modulus), modulus)]
    if kind == "mat":
        vals = [_frac_residue(x, modulus) for x in spec[1]]
        return [Mat2.of(*vals, modulus)]
    if kind == "sp_full":
        return list(split_cartan(case.p, _exponent(case.p, modulus)).generators)
    if kind == "sp_cube_ratio":
        codes = _sp_cube_ratio_codes(case.p, modulus)
        return list(FiniteMatGroup(modulus, codes).generators)
    if kind == "sp_elt":
        a, b = spec[1]
        return [Mat2.of(a, 0, 0, b, modulus)]
    if kind == "gamma1":
        return [Mat2.of(0, 1, 1, 0, modulus)]
    if kind == "gamma_eps":
        e = spec[1]
        return [Mat2.of(0, e, e, 0, modulus)]
    if kind == "ns_full":
        return list(
            nonsplit_cartan(case.p, _exponent(case.p, modulus), case.delta[0]).generators
        )
    if kind == "ns_elt":
        a, b = spec[1]
        d = case.delta[0]
        return [Mat2.of(a, d * b, b, a, modulus)]
    if kind == "c1diag":
        return [Mat2.of(1, 0, 0, -1, modulus)]
    raise ValueError(f"unknown recipe atom {kind!r}")


_SET_ATOMS = ("full", "subset", "cubes", "sp_full", "sp_cube_ratio", "ns_full")
_materialize_cache: dict[tuple[str, int], FiniteMatGroup] = {}


def materialize(case: ImageCase, n: int) -> FiniteMatGroup:
    """Closure of the recipe's generators at modulus p^n (cached).

    The common shape [abelian subgroup H, one normalizing involution t]
    is assembled as the coset union H + tH instead of a blind closure.
    """
    key = (case.label, n)
    if key in _materialize_cache:
        return _materialize_cache[key]
    modulus = case.p**n
    set_specs = [s for s in case.recipe if s[0] in _SET_ATOMS]
    single_specs = [s for s in case.recipe if s[0] not in _SET_ATOMS]
    if len(set_specs) == 1 and len(single_specs) == 1:
        codes = _set_spec_codes(case, set_specs[0], modulus)
        sub = FiniteMatGroup(modulus, codes)
        (t,) = materialize_spec(case, single_specs[0], modulus)
        ti = t.inv()
        if (t * t) in sub and all(t * g * ti in sub for g in sub.generators):
            group = FiniteMatGroup(
                modulus,
                np.union1d(sub.codes, _left_mul_batch(t, sub.codes)),
                sub.generators + (t,),
            )
            _materialize_cache[key] = group
            return group
    gens: list[Mat2] = []
    for spec in case.recipe:
        gens.extend(materialize_spec(case, spec, modulus))
    group = closure(gens, modulus=modulus)
    _materialize_cache[key] = group
    return group


def _set_spec_codes(case: ImageCase, spec: tuple, modulus: int) -> np.ndarray:
    kind = spec[0]
    if kind == "full":
        return build_cartan(case_params(case, modulus)).codes
    if kind == "subset":
        return _subset_codes(case, spec[1], modulus)
    if kind == "cubes":
        return _cube_codes(case, modulus)
    if kind == "sp_full":
        return split_cartan(case.p, _exponent(case.p, modulus)).codes
    if kind == "sp_cube_ratio":
        return _sp_cube_ratio_codes(case.p, modulus)
    if kind == "ns_full":
        return nonsplit_cartan(case.p, _exponent(case.p, modulus), case.delta[0]).codes
    raise ValueError(kind)


def ambient_normalizer(case: ImageCase, n: int) -> FiniteMatGroup:
    """The Cartan normalizer containing the case's image at modulus p^n."""
    modulus = case.p**n
    if case.presentation == "cartan":
        return build_normalizer(case_params(case, modulus))
    if case.presentation == "split":
        return split_normalizer(case.p, n)
    return nonsplit_normalizer(case.p, n, case.delta[0])


def presentation_kernel_matrices(case: ImageCase, n: int) -> list[Mat2]:
    """Kernel of one-step reduction from p^(n+1), in the case's presentation."""
    p = case.p
    modulus = p ** (n + 1)
    pn = p**n
    if case.presentation == "cartan":
        from .cartan import kernel_matrices

        return kernel_matrices(case_params(case, modulus))
    out = []
    for k1 in range(p):
        for k2 in range(p):
            if case.presentation == "split":
                out.append(Mat2.of(1 + pn * k1, 0, 0, 1 + pn * k2, modulus))
            else:
                d = case.delta[0]
                out.append(
                    Mat2.of(1 + pn * k1, d * pn * k2, pn * k2, 1 + pn * k1, modulus)
                )
    return out


# ---------------------------------------------------------------------------
# the catalog
# ---------------------------------------------------------------------------

_C = "cartan"


def _case(**kw) -> ImageCase:
    return ImageCase(**kw)


CATALOG: tuple[ImageCase, ...] = (
    # -- odd p prime to the discriminant: full normalizers ------------------
    _case(
        label="Thm1.1-split-full-p5",
        p=5,
        presentation=_C,
        delta=(-11, 4),
        recipe=(("full",), ("c_eps", 1)),
        step_a=("c_eps", 1),
        step_b=("cartan_elt", (2, 1)),
        order=(-11, 1),
        witness=(-9504, 365904),
        witness_levels=(1, 2, 3),
        expected_index=1,
    ),
    _case(
        label="Thm1.1-inert-full-p5",
        p=5,
        presentation=_C,
        delta=(-7, 4),
        recipe=(("full",), ("c_eps", 1)),
        step_a=("c_eps", 1),
        step_b=("cartan_elt", (1, 1)),
        order=(-7, 1),
        witness=(-35, 98),
        witness_levels=(1, 2, 3),
        expected_index=1,
    ),
    _case(
        label="Thm1.1-sp-presentation-p5",
        p=5,
        presentation="split",
        recipe=(("sp_full",), ("gamma1",)),
        step_a=("gamma1",),
        step_b=("sp_elt", (2, 1)),
        witness=(-9504, 365904),
        witness_levels=(1, 2, 3),
        expected_index=1,
    ),
    _case(
        label="Thm1.1-ns-presentation-p5",
        p=5,
        presentation="nonsplit",
        delta=(2, 1),
        recipe=(("ns_full",), ("c1diag",)),
        step_a=("c1diag",),
        step_b=("ns_elt", (1, 1)),
        witness=(-35, 98),
        witness_levels=(1, 2, 3),
        expected_index=1,
    ),
    _case(
        label="Thm1.1-sp-presentation-p7",
        p=7,
        presentation="split",
        recipe=(("sp_full",), ("gamma1",)),
        step_a=("gamma1",),
        step_b=("sp_elt", (3, 1)),
        expected_index=1,
    ),
    _case(
        label="Thm1.1-ns-presentation-p7",
        p=7,
        presentation="nonsplit",
        delta=(3, 1),
        recipe=(("ns_full",), ("c1diag",)),
        step_a=("c1diag",),
        step_b=("ns_elt", (1, 1)),
        expected_index=1,
    ),
    # -- odd p prime to the discriminant, j = 0 index-3 images --------------
    _case(
        label="Thm1.1-j0-split-idx3-p7",
        p=7,
        presentation="split",
        recipe=(("sp_cube_ratio",), ("gamma_eps", 1)),
        step_a=("gamma_eps", 1),
        step_b=("sp_elt", (8, 1)),
        order=(-3, 1),
        witness=(0, 16),
        witness_levels=(1, 2, 3),
        expected_index=3,
    ),
    _case(
        label="Thm1.1-j0-nonsplit-idx3-p5",
        p=5,
        presentation=_C,
        delta=(-3, 4),
        recipe=(("cubes",), ("c_eps", 1)),
        step_a=("c_eps", 1),
        step_b=("cube_elt", (1, 1)),
        order=(-3, 1),
        witness=(0, 16),
        witness_levels=(1, 2, 3),
        expected_index=3,
    ),
    # -- odd p dividing the discriminant, j != 0, 1728 ----------------------
    _case(
        label="Thm1.2-idx1-disc-7-p7",
        p=7,
        presentation=_C,
        delta=(-7, 4),
        recipe=(("full",), ("c_eps", 1)),
        step_a=("c_eps", 1),
        step_b=("cartan_elt", (1, 1)),
        order=(-7, 1),
        witness=(-140, -784),
        witness_levels=(1, 2, 3),
        expected_index=1,
    ),
    _case(
        label="Thm1.2-idx2-disc-7-p7",
        p=7,
        presentation=_C,
        delta=(-7, 4),
        recipe=(("subset", "a_square"), ("c_eps", 1)),
        step_a=("c_eps", 1),
        step_b=("cartan_elt", (1, 1)),
        order=(-7, 1),
        witness=(-1715, 33614),
        witness_levels=(1, 2, 3),
        expected_index=2,
    ),
    _case(
        label="Thm1.2-idx2-disc-7-p7-epsneg",
        p=7,
        presentation=_C,
        delta=(-7, 4),
        recipe=(("subset", "a_square"), ("c_eps", -1)),
        step_a=("c_eps", -1),
        step_b=("cartan_elt", (1, 1)),
        order=(-7, 1),
        witness=(-1715, 33614),
        witness_levels=(1, 2, 3),
        expected_index=2,
        note="involution sign variant",
    ),
    _case(
        label="Thm1.2-idx1-disc-27-p3",
        p=3,
        presentation=_C,
        delta=(-27, 4),
        recipe=(("full",), ("c_eps", 1)),
        step_a=("c_eps", 1),
        step_b=("cartan_elt", (1, 1)),
        order=(-3, 3),
        witness=(-1920, 32384),
        witness_levels=(1, 2, 3),
        expected_index=1,
    ),
    _case(
        label="Thm1.2-idx2-disc-27-p3",
        p=3,
        presentation=_C,
        delta=(-27, 4),
        recipe=(("subset", "a_square"), ("c_eps", 1)),
        step_a=("c_eps", 1),
        step_b=("cartan_elt", (1, 1)),
        order=(-3, 3),
        witness=(-480, 4048),
        witness_levels=(1, 2, 3),
        expected_index=2,
    ),
    # -- p = 3, j = 0 --------------------------------------------------------
    _case(
        label="Thm1.3-idx1-p3",
        p=3,
        presentation=_C,
        delta=(-3, 4),
        recipe=(("full",), ("c_eps", 1)),
        step_a=("c_eps", 1),
        step_b=("cartan_elt", (1, 1)),
        order=(-3, 1),
        witness=(0, 32),
        witness_levels=(1, 2, 3),
        expected_index=1,
    ),
    _case(
        label="Thm1.3-idx2-p3",
        p=3,
        presentation=_C,
        delta=(-3, 4),
        recipe=(("subset", "a_1_mod_3"), ("c_eps", 1)),
        step_a=("c_eps", 1),
        step_b=("cartan_elt", (1, 1)),
        order=(-3, 1),
        witness=(0, 64),
        witness_levels=(1, 2, 3),
        expected_index=2,
    ),
    _case(
        label="Thm1.3-idx6-G1-p3",
        p=3,
        presentation=_C,
        delta=(-3, 4),
        recipe=(("subset", "a_1_b_0_mod_3"), ("c_eps", 1)),
        step_a=("c_eps", 1),
        step_b=("cartan_elt", (4, 3)),
        order=(-3, 1),
        witness=(0, 16),
        witness_levels=(1, 2, 3),
        expected_index=6,
    ),
    _case(
        label="Thm1.3-idx6-G2-p3",
        p=3,
        presentation=_C,
        delta=(-3, 4),
        recipe=(("c_eps", 1), ("scalar", 4), ("cartan_elt", (1, 1))),
        step_a=("c_eps", 1),
        step_b=("cartan_elt", (1, 1)),
        order=(-3, 1),
        witness=(0, -48),
        witness_levels=(1, 2, 3),
        expected_index=6,
        level_exp=3,
    ),
    _case(
        label="Thm1.3-idx6-G3-p3",
        p=3,
        presentation=_C,
        delta=(-3, 4),
        recipe=(("c_eps", 1), ("scalar", 4), ("cartan_elt", ((-5, 4), (1, 2)))),
        step_a=("c_eps", 1),
        step_b=("cartan_elt", ((-5, 4), (1, 2))),
        order=(-3, 1),
        witness=(0, 1296),
        witness_levels=(1, 2, 3),
        expected_index=6,
        level_exp=3,
    ),
    _case(
        label="Thm1.3-idx3-G1-p3",
        p=3,
        presentation=_C,
        delta=(-3, 4),
        recipe=(("subset", "a_unit_b_0_mod_3"), ("c_eps", 1)),
        step_a=("c_eps", 1),
        step_b=("cartan_elt", (2, 3)),
        order=(-3, 1),
        witness=(0, 128),
        witness_levels=(1, 2, 3),
        expected_index=3,
    ),
    _case(
        label="Thm1.3-idx3-G2-p3",
        p=3,
        presentation=_C,
        delta=(-3, 4),
        recipe=(("c_eps", 1), ("scalar", 2), ("cartan_elt", (1, 1))),
        step_a=("c_eps", 1),
        step_b=("cartan_elt", (1, 1)),
        order=(-3, 1),
        witness=(0, -6),
        witness_levels=(1, 2, 3),
        expected_index=3,
        level_exp=3,
    ),
    _case(
        label="Thm1.3-idx3-G3-p3",
        p=3,
        presentation=_C,
        delta=(-3, 4),
        recipe=(("c_eps", 1), ("scalar", 2), ("cartan_elt", ((-5, 4), (1, 2)))),
        step_a=("c_eps", 1),
        step_b=("cartan_elt", ((-5, 4), (1, 2))),
        order=(-3, 1),
        witness=(0, 48),
        witness_levels=(1, 2, 3),
        expected_index=3,
        level_exp=3,
    ),
    # -- p = 2, odd discriminant ---------------------------------------------
    _case(
        label="Thm1.4a-split-disc-7-p2",
        p=2,
        presentation=_C,
        delta=(-2, 1),
        phi=1,
        recipe=(("full",), ("c_eps", 1)),
        step_a=("c_eps", 1),
        step_b=("cartan_elt", (1, 2)),
        order=(-7, 1),
        witness=(-1715, 33614),
        witness_levels=(1, 2, 3, 4),
        expected_index=1,
    ),
    _case(
        label="Thm1.4a-inert-disc-11-p2",
        p=2,
        presentation=_C,
        delta=(-3, 1),
        phi=1,
        recipe=(("full",), ("c_eps", 1)),
        step_a=("c_eps", 1),
        step_b=("cartan_elt", (0, 1)),
        order=(-11, 1),
        witness=(-9504, 365904),
        witness_levels=(1, 2, 3, 4),
        expected_index=1,
    ),
    _case(
        label="Thm1.4a-j0-idx1-p2",
        p=2,
        presentation=_C,
        delta=(-1, 1),
        phi=1,
        recipe=(("full",), ("c_eps", 1)),
        step_a=("c_eps", 1),
        step_b=("cartan_elt", (1, 1)),
        order=(-3, 1),
        witness=(0, 16),
        witness_levels=(1, 2, 3, 4),
        expected_index=1,
    ),
    _case(
        label="Thm1.4a-j0-idx3-p2",
        p=2,
        presentation=_C,
        delta=(-1, 1),
        phi=1,
        recipe=(
            ("mat", (0, 1, 1, 0)),
            ("scalar", -1),
            ("mat", (7, 4, -4, 3)),
            ("mat", (3, 6, -6, -3)),
        ),
        step_a=("mat", (0, 1, 1, 0)),
        step_b=("cartan_elt", (-3, 6)),
        order=(-3, 1),
        witness=(0, -6),
        witness_levels=(1, 2, 3, 4),
        expected_index=3,
        level_exp=4,
    ),
    # -- p = 2, disc -12 / -28 ------------------------------------------------
    _case(
        label="Thm1.4bi-disc-12-p2",
        p=2,
        presentation=_C,
        delta=(-3, 1),
        recipe=(("full",), ("c_eps", 1)),
        step_a=("c_eps", 1),
        step_b=("cartan_elt", (0, 1)),
        order=(-3, 2),
        witness=(-15, 22),
        witness_levels=(1, 2, 3, 4),
        expected_index=1,
    ),
    _case(
        label="Thm1.4bi-disc-28-p2",
        p=2,
        presentation=_C,
        delta=(-7, 1),
        recipe=(("full",), ("c_eps", 1)),
        step_a=("c_eps", 1),
        step_b=("cartan_elt", (0, 1)),
        order=(-7, 2),
        witness=(-29155, 1915998),
        witness_levels=(1, 2, 3, 4),
        expected_index=1,
    ),
    # -- p = 2, disc -4 (j = 1728) ---------------------------------------------
    _case(
        label="Thm1.4bii-idx1-p2",
        p=2,
        presentation=_C,
        delta=(-1, 1),
        recipe=(("full",), ("c_eps", 1)),
        step_a=("c_eps", 1),
        step_b=("cartan_elt", (1, 2)),
        order=(-4, 1),
        witness=(5, 0),
        witness_levels=(1, 2, 3, 4),
        expected_index=1,
    ),
    _case(
        label="Thm1.4bii-idx2-G2a-p2",
        p=2,
        presentation=_C,
        delta=(-1, 1),
        recipe=(
            ("mat", (0, 1, 1, 0)),
            ("scalar", -1),
            ("scalar", 3),
            ("cartan_elt", (1, 2)),
        ),
        step_a=("mat", (0, 1, 1, 0)),
        step_b=("cartan_elt", (1, 2)),
        order=(-4, 1),
        witness=(9, 0),
        witness_levels=(1, 2, 3, 4),
        expected_index=2,
        level_exp=4,
    ),
    _case(
        label="Thm1.4bii-idx2-G2b-p2",
        p=2,
        presentation=_C,
        delta=(-1, 1),
        recipe=(
            ("mat", (0, 1, 1, 0)),
            ("scalar", -1),
            ("scalar", 3),
            ("cartan_elt", (2, 1)),
        ),
        step_a=("mat", (0, 1, 1, 0)),
        step_b=("cartan_elt", (2, 1)),
        order=(-4, 1),
        witness=(18, 0),
        witness_levels=(1, 3, 4),
        expected_index=2,
        level_exp=4,
        note="degree identity skips n=2: sqrt(alpha) enters only at level 8 "
        "for twists by 2*t^2, so the maximal abelian field mod 4 is Q(zeta_8)",
    ),
    _case(
        label="Thm1.4bii-idx4-G4a-p2",
        p=2,
        presentation=_C,
        delta=(-1, 1),
        recipe=(("mat", (0, -1, -1, 0)), ("scalar", 5), ("cartan_elt", (1, 2))),
        step_a=("mat", (0, -1, -1, 0)),
        step_b=("cartan_elt", (1, 2)),
        order=(-4, 1),
        witness=(1, 0),
        witness_levels=(1, 2, 3, 4),
        expected_index=4,
        level_exp=4,
    ),
    _case(
        label="Thm1.4bii-idx4-G4a-diag-p2",
        p=2,
        presentation=_C,
        delta=(-1, 1),
        recipe=(("mat", (1, 0, 0, -1)), ("scalar", 5), ("cartan_elt", (1, 2))),
        step_a=("mat", (1, 0, 0, -1)),
        step_b=("cartan_elt", (1, 2)),
        order=(-4, 1),
        witness=(-1, 0),
        witness_levels=(1, 2, 3, 4),
        expected_index=4,
        level_exp=4,
    ),
    _case(
        label="Thm1.4bii-idx4-G4c-p2",
        p=2,
        presentation=_C,
        delta=(-1, 1),
        recipe=(("mat", (1, 0, 0, -1)), ("scalar", -3), ("cartan_elt", (2, -1))),
        step_a=("mat", (1, 0, 0, -1)),
        step_b=("cartan_elt", (2, -1)),
        order=(-4, 1),
        witness=(2, 0),
        witness_levels=(1, 2, 3, 4),
        expected_index=4,
        level_exp=4,
    ),
    # -- p = 2, disc -8 / -16 ---------------------------------------------------
    _case(
        label="Thm1.4biii-disc-8-idx1-p2",
        p=2,
        presentation=_C,
        delta=(-2, 1),
        recipe=(("full",), ("c_eps", 1)),
        step_a=("c_eps", 1),
        step_b=("cartan_elt", (1, 1)),
        order=(-8, 1),
        witness=(-30, 56),
        witness_levels=(1, 2, 3, 4),
        expected_index=1,
    ),
    _case(
        label="Thm1.4biii-disc-8-idx2-b5-p2",
        p=2,
        presentation=_C,
        delta=(-2, 1),
        recipe=(("c_eps", 1), ("scalar", 5), ("cartan_elt", (1, 1))),
        step_a=("c_eps", 1),
        step_b=("cartan_elt", (1, 1)),
        order=(-8, 1),
        witness=(-4320, 96768),
        witness_levels=(1, 2, 3, 4),
        expected_index=2,
        level_exp=4,
    ),
    _case(
        label="Thm1.4biii-disc-8-idx2-b3-p2",
        p=2,
        presentation=_C,
        delta=(-2, 1),
        recipe=(("c_eps", 1), ("scalar", 3), ("cartan_elt", (1, 1))),
        step_a=("c_eps", 1),
        step_b=("cartan_elt", (1, 1)),
        order=(-8, 1),
        witness=(-4320, 96768),
        witness_levels=(1, 3, 4),
        expected_index=2,
        level_exp=4,
        note="degree identity skips n=2: with scalar 3 the reduction mod 4 "
        "is the full normalizer, so the mod-4 abelianization is one step larger",
    ),
    _case(
        label="Thm1.4biii-disc-16-idx1-p2",
        p=2,
        presentation=_C,
        delta=(-4, 1),
        recipe=(("full",), ("c_eps", 1)),
        step_a=("c_eps", 1),
        step_b=("cartan_elt", (1, 1)),
        order=(-4, 2),
        witness=(-99, 378),
        witness_levels=(1, 2, 3, 4),
        expected_index=1,
    ),
    _case(
        label="Thm1.4biii-disc-16-idx2-b5-p2",
        p=2,
        presentation=_C,
        delta=(-4, 1),
        recipe=(("c_eps", 1), ("scalar", 5), ("cartan_elt", (1, 1))),
        step_a=("c_eps", 1),
        step_b=("cartan_elt", (1, 1)),
        order=(-4, 2),
        witness=(-11, 14),
        witness_levels=(1, 2, 3, 4),
        expected_index=2,
        level_exp=4,
    ),
)

CASES_BY_LABEL: dict[str, ImageCase] = {c.label: c for c in CATALOG}

# the six orders where 2 is inert and prime to the discriminant
INERT_AT_2_ORDERS: tuple[CMOrder, ...] = (
    CMOrder(-11, 1),
    CMOrder(-19, 1),
    CMOrder(-3, 3),
    CMOrder(-43, 1),
    CMOrder(-67, 1),
    CMOrder(-163, 1),
)
