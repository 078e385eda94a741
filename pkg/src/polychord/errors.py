"""Exception hierarchy shared by every module."""


class PolychordError(ValueError):
    """Base class for all library errors."""


class DegenerateSegment(PolychordError):
    pass


class DegenerateInput(PolychordError):
    pass


class ParallelLines(PolychordError):
    pass


class CoincidentLines(PolychordError):
    pass


class LineThroughVertexParallel(PolychordError):
    pass


class DomainError(PolychordError):
    pass


class RootFindingFailure(PolychordError):
    pass


class NotConvex(PolychordError):
    pass


class PolygonError(PolychordError):
    """Raised by polygon validation."""


class SelfIntersecting(PolygonError):
    pass


class HoleOutsideOuter(PolygonError):
    pass


class TooFewVertices(PolygonError):
    pass
