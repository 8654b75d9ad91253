"""Maximal abelian subextensions of prime-power division fields of CM
elliptic curves over Q, verified by exhaustive finite-group computation."""

from .cartan import (
    CartanParams,
    CMOrder,
    build_cartan,
    build_normalizer,
    expected_cartan_order,
    kernel_matrices,
    nonsplit_cartan,
    nonsplit_normalizer,
    order_from_disc,
    params_for,
    split_cartan,
    split_normalizer,
    splitting_type,
)
from .classify import (
    AbelianFieldDesc,
    ClassificationReport,
    abelian_field,
    canonicalize,
    classify_max_abelian,
    field_degree,
    predicted_index,
)
from .cmcurves import (
    RationalCurve,
    TwistData,
    alpha_of,
    j_invariant,
    quadratic_twist,
    recognize_cm,
    table_curve,
    twist_factor,
)
from .matgroups import (
    FiniteMatGroup,
    Mat2,
    abelianization_order,
    closure,
    commutator,
    derived_subgroup,
    find_conjugator,
    is_abelian,
    kernel_of_reduction,
    reduce_group,
    subgroup_index,
)
from .residues import (
    ModInt,
    QuadDisc,
    inv_mod,
    power_free_part,
    quad_in_cyclotomic,
    rational_residue,
    squarefree_part,
)
from .verify import bound_step, find_certificate, run_suite

__version__ = "0.1.0"
