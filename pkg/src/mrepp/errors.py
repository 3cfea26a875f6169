"""Exception types shared across the package."""


class ConfigError(Exception):
    """Invalid configuration: bad kernel parameters, malformed config files,
    inconsistent method specifications."""


class SingularMatrixError(RuntimeError):
    """A required factorization failed because the matrix is (numerically)
    singular, e.g. duplicated locations with a zero nugget."""


class ScoringError(ValueError):
    """A score cannot be evaluated, e.g. a zero-variance mixture component."""
