"""Exception hierarchy shared by all kummer3 modules."""


class Kummer3Error(Exception):
    """Base class for every error raised by the library."""


class InvalidInput(Kummer3Error, ValueError):
    """An argument violates the documented precondition."""


class NotAField(InvalidInput):
    """The cube-free part of the radicand is 1 (a perfect cube)."""


class ConfigurationError(Kummer3Error, ValueError):
    """Out-of-range limits or worker counts."""


class NoFieldExists(Kummer3Error):
    """The conductor is well formed but no pure cubic field realizes it."""


class IngestError(Kummer3Error):
    """Malformed class-data ingest file or record."""
