"""Domain errors. All derive from ValueError so callers catching bad input keep working."""


class ToolkitError(ValueError):
    """Base class for every domain error raised by the toolkit"""


class BallViolation(ToolkitError):
    """Bloch vector lies outside the unit ball"""


class InvalidState(ToolkitError):
    """Matrix is not a valid density matrix"""


class DegenerateScenario(ToolkitError):
    """The two states coincide, so there is nothing to discriminate"""


class MismatchedAverage(ToolkitError):
    """Steering components do not average to Bob's reduced state"""


class NearSingularAverage(ToolkitError):
    """Bob's reduced state is too close to rank one to invert"""


class ZeroProbability(ToolkitError):
    """Conditional state requested for an outcome that never happens"""


class InvalidDetector(ToolkitError):
    """Detector elements are not a valid two-outcome POVM"""


class InconsistentDocument(ToolkitError):
    """A fully specified JSON document disagrees with its recomputed fields"""
