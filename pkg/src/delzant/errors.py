"""Exception hierarchy for the delzant package."""


class ToricError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(ToricError):
    """Matrix or vector dimensions are inconsistent."""


class RankError(ToricError):
    """An integer matrix does not have the rank required by an operation."""


class NonSmoothError(ToricError):
    """The quotient presentation is not smooth over the integers
    (no integer right inverse exists; Smith diagonal is not all ones)."""


class NonDelzantVertexError(ToricError):
    """The facet normals meeting at a vertex do not form a lattice basis."""


class AnchorError(ToricError):
    """The requested anchor facets cannot pin the offset vector."""


class DomainError(ToricError):
    """A point lies outside the domain of the requested operation
    (outside the polytope, outside the admissible open set, on a
    forbidden stratum, ...)."""


class ChartDomainError(DomainError):
    """A point is not representable in the requested coordinate chart."""


class SolverError(ToricError):
    """An iterative solver failed to reach its residual tolerance.

    Attributes
    ----------
    residual : float
        Best residual norm achieved before giving up.
    iterations : int
        Number of iterations performed.
    """

    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class ConditioningError(ToricError):
    """A linear system is too ill-conditioned to invert reliably."""


class ConsistencyError(ToricError):
    """A built-in cross-check failed, indicating inconsistent input data."""


class ContractError(ToricError):
    """An operation was called on a presentation that does not satisfy
    its structural requirements (e.g. not a canonical-bundle total space)."""


class ConfigError(ToricError):
    """A configuration file is malformed; the message carries the file
    and field where parsing failed."""
