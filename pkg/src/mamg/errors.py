"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid solver configuration or unknown problem id."""


class DataError(ValueError):
    """Sampled data is unusable (e.g. non-finite source values)."""


class DegenerateNodeError(ArithmeticError):
    """A nodal update lost ellipticity: the local polynomial has no real root."""
