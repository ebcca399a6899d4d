"""Exception hierarchy shared by every pathforge module."""


class PathforgeError(ValueError):
    """Base class for all domain errors raised by the package."""


class DegenerateFrame(PathforgeError):
    """The three calibration points do not span a plane."""


class InvalidStep(PathforgeError):
    """A discretization step length is not strictly positive."""


class DegenerateSegment(PathforgeError):
    """Linear segment endpoints coincide."""


class CollinearPoints(PathforgeError):
    """No unique circle passes through the given points."""


class DegenerateNormals(PathforgeError):
    """Nagata section normals are parallel or opposite."""


class OutOfRange(PathforgeError):
    """Curve parameter outside [0, 1]."""


class NoActivation(PathforgeError):
    """No output label fired during fuzzy inference."""


class ParseError(PathforgeError):
    """A JSON document could not be decoded."""


class ValidationError(PathforgeError):
    """A decoded document violates its schema."""
