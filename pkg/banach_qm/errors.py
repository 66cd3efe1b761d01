"""
Exception hierarchy for banach-qm
"""


class BanachQMError(Exception):
    """Base class for every error raised by the library"""


class DimensionMismatch(BanachQMError):
    """Vector or matrix shape does not match the ambient space"""


class ZeroVector(BanachQMError):
    """Operation needs a non-zero vector"""


class NotNormalized(BanachQMError):
    """State vector is not a unit vector and auto-normalization is off"""


class NonDiagonalizable(BanachQMError):
    """Operator is not of scalar type (defective or ill-conditioned eigenvectors)"""


class InvalidDecomposition(BanachQMError):
    """Eigenvalue/projection pairs violate the spectral resolution invariants"""


class ComplexSpectrum(BanachQMError):
    """Operator has a non-real eigenvalue where a real spectrum is required"""


class NotAProjection(BanachQMError):
    """Matrix is not idempotent within tolerance"""


class DegenerateBasis(BanachQMError):
    """Eigenvector matrix is numerically singular"""


class NotPhysical(BanachQMError):
    """Sampling requested where some outcome probability lies outside [0, 1]"""


class SingularPair(BanachQMError):
    """Vectors x, y do not span C^2 (ad - cb vanishes)"""


class UndefinedFunction(BanachQMError):
    """Function passed to the functional calculus is undefined at an eigenvalue"""


class ConfigError(BanachQMError):
    """Malformed job file, unknown fields or invalid settings"""
