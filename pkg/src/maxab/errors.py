"""Exception types shared across the package."""


class MaxabError(Exception):
    """Base class for all package errors."""


class NonUnitError(MaxabError):
    """A residue that must be invertible is not a unit."""


class ZeroInputError(MaxabError):
    """Zero passed where a nonzero integer is required."""


class ModulusMismatchError(MaxabError):
    """Binary operation on residues or matrices with different moduli."""


class SingularMatrixError(MaxabError):
    """Matrix inversion requested for a non-invertible matrix."""


class SingularGeneratorError(SingularMatrixError):
    """A group generator is not invertible."""


class SizeLimitExceededError(MaxabError):
    """Enumeration would exceed the configured element cap."""


class BadTargetError(MaxabError):
    """Reduction target does not divide the modulus."""


class NotSubgroupError(MaxabError):
    """Claimed subgroup relation fails."""


class NonUnitDetError(NonUnitError):
    """Parametrized matrix has non-unit determinant."""


class BadDeltaError(MaxabError):
    """Non-split parameter is a square (or non-unit) mod p."""


class SingularCurveError(MaxabError):
    """Weierstrass coefficients define a singular cubic."""


class NotCMError(MaxabError):
    """Curve's j-invariant matches none of the thirteen CM classes."""


class UnknownOrderError(MaxabError):
    """Imaginary quadratic order is not one of the thirteen with class number one."""


class NotInGroupError(MaxabError):
    """Element expected inside an enumerated group is missing."""


class BadKappaError(MaxabError):
    """Perturbation matrix is not in the reduction kernel at this level."""


class UnsupportedInputError(MaxabError):
    """Input outside the supported domain (composite p, n < 1, ...)."""


class VerificationError(MaxabError):
    """A verification check failed; args carry the violated check tag."""
