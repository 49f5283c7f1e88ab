"""Exception hierarchy shared by the library and the CLI."""


class RankOrderError(Exception):
    """Base class for all library errors."""


class ParameterError(RankOrderError, ValueError):
    """An argument is outside its admissible range."""


class ValidationError(RankOrderError, ValueError):
    """A probability vector or matrix failed a consistency check."""


class DataError(RankOrderError, ValueError):
    """Input data is malformed (e.g. contains NaN)."""


class CapabilityError(RankOrderError, NotImplementedError):
    """The requested method is not available for these parameters."""
