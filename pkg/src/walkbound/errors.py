class WalkboundError(Exception):
    """Base class for errors raised by walkbound."""


class InputError(WalkboundError, ValueError):
    """Malformed or inconsistent input (dimension mismatch, bad weights, ...)."""


class ResourceLimitError(WalkboundError, RuntimeError):
    """An exact computation would exceed its configured size cap."""


class UnsupportedOracleError(WalkboundError, NotImplementedError):
    """A numerical oracle was asked to run outside its domain (e.g. infinite Y)."""
