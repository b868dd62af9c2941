"""Exception types shared across the package."""


class KerrBellError(Exception):
    """Base class for all package-specific errors."""


class NotInQubitSpace(KerrBellError):
    """A spatial state has significant amplitude outside the one-photon-per-arm sector."""


class TruncationOverflow(KerrBellError):
    """An operation produced (or requires) occupation beyond the configured photon bound."""


class ZeroDensity(KerrBellError):
    """Conditioning on a quadrature value whose probability density is numerically zero."""


class NotABellState(KerrBellError):
    """A state does not coincide with any single Bell state."""


class InvalidSpec(KerrBellError):
    """An experiment specification failed validation."""
