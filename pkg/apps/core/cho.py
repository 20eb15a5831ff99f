"""
Confined oscillator: H = −d²/dx² + 4γ²x² on [−x_c, x_c] with hard walls

Expanded in the box eigenfunctions φ_k(x) = x_c^(−1/2)·sin(kπ(x + x_c)/(2x_c)),
k = 1..K. With γ = 1/4 the potential is x²/4 and the wide-box limit gives
E_n = n + ½.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import linalg

from . import quadrature
from .exceptions import EigensolverFailure, InvalidParameters
from .quadrature import QuadratureConfig

logger = logging.getLogger(__name__)

OSCILLATOR_GAMMA = 0.25


@dataclass(frozen=True)
class BoxConfig:
    x_c: float
    basis_size: int = 200
    oscillator_gamma: float = OSCILLATOR_GAMMA

    def __post_init__(self):
        if not self.x_c > 0:
            raise InvalidParameters(f'x_c must be > 0, got {self.x_c}', field='x_c')
        if self.basis_size < 1:
            raise InvalidParameters(f'basis_size must be >= 1, got {self.basis_size}',
                                    field='basis_size')
        if not self.oscillator_gamma > 0:
            raise InvalidParameters('oscillator_gamma must be > 0', field='oscillator_gamma')

    @classmethod
    def from_settings(cls, x_c: float, **overrides) -> 'BoxConfig':
        from django.conf import settings
        conf = getattr(settings, 'DOUBLEWELL', {}) if settings.configured else {}
        values = {'basis_size': int(conf.get('BOX_BASIS_SIZE', 200))}
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(x_c=x_c, **values)


@dataclass(frozen=True, eq=False)
class BoxSpectrum:
    x_c: float
    eigenvalues: np.ndarray
    coefficients: np.ndarray     # column n = sine-basis coefficients of state n
    oscillator_gamma: float = field(default=OSCILLATOR_GAMMA)

    def __post_init__(self):
        for arr in (self.eigenvalues, self.coefficients):
            arr.flags.writeable = False

    def amplitude(self, state_index: int, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        k = np.arange(1, self.coefficients.shape[0] + 1)
        phases = np.outer(k, x + self.x_c) * (math.pi / (2.0 * self.x_c))
        return self.coefficients[:, state_index] @ np.sin(phases) / math.sqrt(self.x_c)

    def density(self, state_index: int, x):
        psi = self.amplitude(state_index, x)
        return psi * psi

    def to_dict(self, states: int = 4) -> dict:
        return {
            'x_c':              self.x_c,
            'basis_size':       self.coefficients.shape[0],
            'oscillator_gamma': self.oscillator_gamma,
            'eigenvalues':      self.eigenvalues[:states].tolist(),
        }


def box_matrix_elements(config: BoxConfig):
    """(kinetic, x²) matrices in the sine basis."""
    xc = config.x_c
    k = np.arange(1, config.basis_size + 1, dtype=float)
    kinetic = np.diag((k * math.pi / (2.0 * xc)) ** 2)

    kk, ll = np.meshgrid(k, k, indexing='ij')
    same = kk == ll
    denom = np.where(same, 1.0, (kk ** 2 - ll ** 2) ** 2)
    off = 32.0 * xc ** 2 * kk * ll / (math.pi ** 2 * denom)
    off[(kk + ll) % 2 == 1] = 0.0
    off[same] = 0.0
    x2 = off + np.diag(xc ** 2 / 3.0 - 2.0 * xc ** 2 / (k ** 2 * math.pi ** 2))
    return kinetic, x2


def cho_solve(config: BoxConfig) -> BoxSpectrum:
    kinetic, x2 = box_matrix_elements(config)
    h = kinetic + 4.0 * config.oscillator_gamma ** 2 * x2
    try:
        values, vectors = linalg.eigh(h)
    except (linalg.LinAlgError, ValueError) as e:
        raise EigensolverFailure(f'box eigensolver failed: {e}', x_c=config.x_c,
                                 finite=bool(np.isfinite(h).all())) from e
    pivots = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pivots, np.arange(vectors.shape[1])])
    vectors = vectors * np.where(signs == 0, 1.0, signs)
    logger.info(f'[Box] x_c={config.x_c} K={config.basis_size} E0={values[0]:.13g}')
    return BoxSpectrum(x_c=config.x_c, eigenvalues=values, coefficients=vectors,
                       oscillator_gamma=config.oscillator_gamma)


def cho_shannon_x(config: BoxConfig, state_index: int,
                  quad_config: Optional[QuadratureConfig] = None,
                  spectrum: Optional[BoxSpectrum] = None) -> float:
    if not 0 <= state_index < config.basis_size:
        raise InvalidParameters(f'state {state_index} outside basis of {config.basis_size}',
                                field='state_index')
    quad_config = quad_config or QuadratureConfig.from_settings()
    spectrum = spectrum or cho_solve(config)
    return -quadrature.integrate(
        lambda x: quadrature.xlogx(spectrum.density(state_index, x)),
        -config.x_c, config.x_c, quad_config)


def box_state_shannon(x_c: float) -> float:
    """S_x of the bare box ground state, sin² density on a width of 2·x_c."""
    return math.log(4.0 * x_c) - 1.0
