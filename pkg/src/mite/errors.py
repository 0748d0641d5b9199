"""Exception types shared across the package."""


class MiteError(Exception):
    """Base class for all package-specific errors."""


class PositivityError(MiteError):
    """epsilon is too large for a term's spectral range (M0 would lose positivity)."""


class DegenerateFixedPointError(MiteError):
    """A sequence operator has no unique dominant eigenvector."""


class AnnihilatedTargetError(MiteError):
    """M_k maps the target to (numerically) zero; no span rotation exists."""


class InsufficientDataError(MiteError):
    """Too few points inside the fit window."""


class ConfigError(MiteError):
    """Invalid run or sweep configuration."""
