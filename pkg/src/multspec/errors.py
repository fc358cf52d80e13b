"""Exception types raised across the package."""

import numpy as np


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class ResourceError(RuntimeError):
    """A dense materialization would exceed the configured size cap."""


class ConditioningError(np.linalg.LinAlgError):
    """A factorization failed or a triangular factor is numerically singular."""


class DegenerateWeightError(DomainError):
    """Every grid point was excluded while dividing out the weight."""


class UnsupportedError(NotImplementedError):
    """The requested combination of options is not implemented."""
