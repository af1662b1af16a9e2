class FermiFisherError(Exception):
    """Base class for all library errors."""


class ExtremalState(FermiFisherError, ValueError):
    """A correlation matrix has |gamma_k| = 1, so no finite generator exists."""


class NonPhysicalState(FermiFisherError, ValueError):
    """A correlation matrix has an eigenvalue outside [-1, 1]."""


class SingularPair(FermiFisherError, ArithmeticError):
    """A tangent has weight on an eigenpair with gamma_j * gamma_k = 1.

    Attributes
    ----------
    pair : tuple of int
        Eigen-indices (j, k) of the offending entry.
    magnitude : float
        Absolute value of the tangent entry in the eigenbasis.
    """

    def __init__(self, message, pair=None, magnitude=None):
        super().__init__(message)
        self.pair = pair
        self.magnitude = magnitude


class NonPhysicalTangent(FermiFisherError, ValueError):
    """A derivative matrix is not a valid tangent (shape or antisymmetry)."""


class SingularQfim(FermiFisherError, ArithmeticError):
    """The QFIM is not invertible; some parameter combination is unidentifiable."""


class NonPdCost(FermiFisherError, ValueError):
    """The cost matrix is not symmetric positive definite."""


class KernelTangent(FermiFisherError, ArithmeticError):
    """A dense density-matrix derivative leaves the support of rho."""


class DomainError(FermiFisherError, ValueError):
    """A parameter point lies outside a family's domain box."""


class OracleSizeError(FermiFisherError, ValueError):
    """The dense oracle was asked for more modes than it supports."""
