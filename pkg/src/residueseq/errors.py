"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Raised when arguments violate an operation's preconditions."""


class CertificateError(RuntimeError):
    """Raised when an extracted lift polynomial is inconsistent.

    Signals that the polynomial handed in is not primitive: the residue
    x^(p^(i-1)*T) - 1 had a coefficient not divisible by p^i.
    """
