"""
Exception hierarchy for the numerical pipeline.

Every error carries a short machine-readable ``code`` and a ``to_dict()`` so
batch runs can report failures the same way they report results:
``{'success': False, 'error': {...}}``.
"""


class DoubleWellError(Exception):
    """Base class for every failure raised by apps.core."""

    code = 'error'

    def __init__(self, message: str = '', **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> dict:
        return {'code': self.code, 'message': self.message, **self.details}


class InvalidParameters(DoubleWellError):
    code = 'invalid_parameters'


class NoBarrier(DoubleWellError):
    code = 'no_barrier'


class EnergyBelowMinimum(DoubleWellError):
    code = 'energy_below_minimum'


class DegenerateCubic(DoubleWellError):
    code = 'degenerate_cubic'


class EigensolverFailure(DoubleWellError):
    """Dense symmetric eigensolver failed; ``details`` holds matrix diagnostics."""
    code = 'eigensolver_failure'


class NonConvergent(DoubleWellError):
    """Quadrature refinement cap reached; keeps the last two estimates."""
    code = 'non_convergent'

    def __init__(self, message: str = '', coarse: float = float('nan'),
                 fine: float = float('nan'), **details):
        super().__init__(message, coarse=coarse, fine=fine, **details)
        self.coarse = coarse
        self.fine = fine


class UnsupportedState(DoubleWellError):
    code = 'unsupported_state'


class GridTooCoarse(DoubleWellError):
    code = 'grid_too_coarse'


class InvariantViolation(DoubleWellError):
    code = 'invariant_violation'
