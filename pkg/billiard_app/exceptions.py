"""Exception types raised by the billiards toolkit.

Every computational failure derives from BilliardsError and carries a short
machine-readable ``code`` that the management commands put in their JSON
error object. Bad user input (labels out of range, non-positive lengths)
raises ValueError subclasses instead.
"""


class BilliardsError(Exception):
    code = 'billiards_error'

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def as_dict(self) -> dict:
        return {'code': self.code, 'message': self.message, **self.details}


class GeometryError(BilliardsError):
    """Two geodesics are not in the configuration an operation needs."""
    code = 'geometry_error'

    def __init__(self, message: str, classification: str, **details):
        super().__init__(message, classification=classification, **details)
        self.classification = classification


class NoAxisError(BilliardsError):
    code = 'no_axis'


class GlideReflectionError(BilliardsError):
    code = 'use_glide_length'


class NoClosingSolutionError(BilliardsError):
    code = 'no_closing_solution'


class DegeneratePolygonError(BilliardsError):
    code = 'degenerate_polygon'


class DecompositionError(BilliardsError):
    code = 'decomposition_invalid'


class InvalidSequenceError(BilliardsError):
    code = 'invalid_sequence'


class NonHyperbolicWordError(InvalidSequenceError):
    """The unfolded reflection word has no translation axis."""
    code = 'non_hyperbolic_word'


class FamilyInvalidError(BilliardsError):
    code = 'family_invalid'


class DegenerateArrangementError(BilliardsError):
    code = 'degenerate_arrangement'


class OptimizationFailedError(BilliardsError):
    code = 'optimization_failed'


class DomainError(ValueError):
    """A parameter lies outside the domain of a construction."""


class SequenceError(ValueError):
    """A billiard sequence violates its labelling rules."""
