"""Exception types raised by fringelab."""


class FringelabError(Exception):
    """Base class for all package-specific errors."""


class SpectrumFormatError(FringelabError, ValueError):
    """A spectrum CSV has a malformed header or a non-numeric cell."""


class NegativePowerError(FringelabError, ValueError):
    """A spectrum sample carries a negative power."""


class InsufficientDataError(FringelabError, ValueError):
    """Fewer valid rows than an operation needs."""


class EstimationError(FringelabError, ValueError):
    """A spectral width could not be estimated (no half-power crossings)."""


class EmptyOverlapError(FringelabError, ValueError):
    """The trace is too short for the delayed beam to ever reach the slits."""


class ConfigError(FringelabError, ValueError):
    """Invalid run configuration. The message names the offending key."""
