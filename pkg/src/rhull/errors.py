"""Exception types shared across the package."""


class RhullError(Exception):
    """Base class for all rhull errors."""


class DuplicatePoints(RhullError):
    """Two sample points share exactly the same coordinates."""


class AllCollinear(RhullError):
    """An operation needed a nondegenerate triangulation but every point is collinear."""


class EmptyRegion(RhullError):
    """A region query was made against a region with no material."""


class EmptyInput(RhullError):
    """A set-distance was requested for an empty input."""


class NonpositiveBandwidth(RhullError):
    """Kernel bandwidth must be strictly positive."""


class AlphaOutOfRange(RhullError):
    """Significance level must lie strictly between 0 and 1."""


class SampleTooSmall(RhullError):
    """The spacing calibration needs n >= 3 so that log(log(n)) > 0."""


class DegenerateSupport(RhullError):
    """A synthetic support with zero area cannot be sampled or gridded."""


class InvalidEndpoints(RhullError):
    """Dichotomy endpoints must satisfy 0 < r_min < r_max."""


class ParseError(RhullError):
    """Input file could not be parsed; message carries line numbers."""


class EmptyAfterFilter(RhullError):
    """All rows were removed by the requested filters."""
