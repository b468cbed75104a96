"""Exception hierarchy shared by all zetalab modules."""


class ZetaLabError(Exception):
    """Base class for every error raised by zetalab."""


class ModelError(ZetaLabError, ValueError):
    """Model parameters violate a structural invariant."""


class DomainError(ZetaLabError, ValueError):
    """An argument lies outside the region where the quantity is defined or bounded."""


class PoleError(DomainError):
    """Evaluation requested at (or numerically on top of) a pole."""


class BranchAmbiguityError(DomainError):
    """A factor lands exactly on the branch cut of the logarithm."""


class InsufficientDataError(ZetaLabError, ValueError):
    """Not enough orbit data to form the requested estimate."""


class ConsistencyError(ZetaLabError, ArithmeticError):
    """Two independent numerical routes disagree beyond their tolerance."""
