"""Exception types shared across the package."""


class ContractViolation(ValueError):
    """An input breaks a structural precondition (non-Hermitian matrix, bad shape, ...)."""


class InfraredDivergence(ArithmeticError):
    """A momentum integral diverges at k = 0 for the requested parameters."""


class UnsolvableDensity(ValueError):
    """Target density lies below the floor reachable by the fugacity equation."""


class BracketError(RuntimeError):
    """A root bracket could not be established on the given interval."""


class VerificationFailure(RuntimeError):
    """A numerical verification report came back negative (e.g. non-monotone ladder)."""
