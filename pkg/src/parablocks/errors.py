"""Exception hierarchy shared by all modules.

Every domain error carries a short machine-readable ``tag`` so the CLI can
emit structured error objects without parsing messages.
"""


class DomainError(Exception):
    """Base class for input conditions a caller can anticipate."""

    tag = "domain-error"


class InstanceTooLargeError(DomainError):
    tag = "instance-too-large"


class NonGeneralWeightError(DomainError):
    tag = "non-general-weight"


class NotEffectiveError(DomainError):
    tag = "not-effective"


class NotInteriorError(DomainError):
    tag = "not-in-effective-cone-interior"


class NonIntegralClassError(DomainError):
    tag = "non-integral-class"


class GenericityError(DomainError):
    tag = "genericity-failure"


class WeightOnWallError(DomainError):
    tag = "weight-on-wall"


class DimensionMismatchError(DomainError):
    tag = "dimension-mismatch"


class NotAGeneratorError(DomainError):
    tag = "not-a-generator"


class CertificateError(Exception):
    """An internally produced certificate failed its own verification."""
