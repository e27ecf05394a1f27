"""Exception hierarchy shared by the library and the CLI."""


class CampanatoError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(CampanatoError, ValueError):
    """Invalid parameters or scenario content (CLI exit code 2)."""


class ComputationError(CampanatoError):
    """A numerical computation could not be carried out (CLI exit code 1)."""


class NonFiniteError(ComputationError):
    pass


class UnderResolvedError(ComputationError):
    pass


class BracketError(ComputationError):
    pass


class AdmissibilityError(ComputationError):
    """No admissible configuration (pairs, cubes, balls) for a sampled sup."""
