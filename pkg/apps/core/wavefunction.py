"""
Eigenfunctions and densities from oscillator-basis coefficients

Both spaces use the same series

    ψ(t) = s^(1/2) · Σ c_m φ_m(s·t)

over orthonormal Hermite functions φ_m (Gaussian folded into φ_0), with
s = √(2γ), c_m = b_m in position space and s = 1/√(2γ), c_m = (−i)^m b_m in
momentum space. All nonzero b_m of a parity eigenstate share one parity, so
(−i)^m splits into a global phase (1 or −i) times the real sign (−1)^(m//2).
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from django.db import models

from . import quadrature
from .quadrature import QuadratureConfig

logger = logging.getLogger(__name__)

OCCUPATION_CUT = 1e-14     # |b_m| / max|b| below which a basis function is ignored
SUPPORT_MARGIN = 8.0       # Gaussian widths added beyond the last classical turning point


class Parity(models.TextChoices):
    EVEN = 'even', 'Even'
    ODD  = 'odd',  'Odd'


class Space(models.TextChoices):
    POSITION = 'x', 'Position'
    MOMENTUM = 'p', 'Momentum'


@dataclass(frozen=True, eq=False)
class StateFunctions:
    state_index: int
    gamma: float
    coeffs: np.ndarray
    parity: str = Parity.EVEN

    def __post_init__(self):
        self.coeffs.flags.writeable = False

    @property
    def m_max(self) -> int:
        """Last basis index carrying weight."""
        mags = np.abs(self.coeffs)
        occupied = np.nonzero(mags > OCCUPATION_CUT * mags.max())[0]
        return int(occupied[-1]) if len(occupied) else 0

    def scale(self, space: str) -> float:
        root = math.sqrt(2.0 * self.gamma)
        return root if space == Space.POSITION else 1.0 / root

    def series_coeffs(self, space: str) -> np.ndarray:
        c = np.array(self.coeffs[: self.m_max + 1], dtype=float)
        if space == Space.MOMENTUM:
            m = np.arange(len(c))
            c *= np.where((m // 2) % 2 == 0, 1.0, -1.0)
        return c

    def momentum_phase(self) -> complex:
        return 1.0 + 0j if self.parity == Parity.EVEN else -1j


def oscillator_state(n: int, gamma: float, size: Optional[int] = None) -> StateFunctions:
    """Pure n-th oscillator eigenstate of −d²/dx² + 4γ²x²."""
    coeffs = np.zeros(max(size or 0, n + 1))
    coeffs[n] = 1.0
    return StateFunctions(state_index=n, gamma=gamma, coeffs=coeffs,
                          parity=Parity.EVEN if n % 2 == 0 else Parity.ODD)


# ── Hermite functions ────────────────────────────────

def hermite_functions(m_max: int, y) -> np.ndarray:
    """Rows φ_0..φ_m_max at the points y (orthonormal, Gaussian included)."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    phi = np.empty((m_max + 1, y.size))
    phi[0] = math.pi ** -0.25 * np.exp(-0.5 * y * y)
    if m_max >= 1:
        phi[1] = math.sqrt(2.0) * y * phi[0]
    for m in range(2, m_max + 1):
        phi[m] = y * math.sqrt(2.0 / m) * phi[m - 1] - math.sqrt((m - 1.0) / m) * phi[m - 2]
    return phi


def hermite_derivatives(phi: np.ndarray, y) -> np.ndarray:
    """dφ_m/dy = √(2m)·φ_{m−1} − y·φ_m."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    dphi = -y * phi
    m = np.arange(1, phi.shape[0])
    dphi[1:] += np.sqrt(2.0 * m)[:, None] * phi[:-1]
    return dphi


def _series(state: StateFunctions, space: str, t, derivative: bool = False):
    s = state.scale(space)
    c = state.series_coeffs(space)
    y = s * np.atleast_1d(np.asarray(t, dtype=float))
    phi = hermite_functions(len(c) - 1, y)
    value = math.sqrt(s) * (c @ phi)
    if not derivative:
        return value
    slope = s ** 1.5 * (c @ hermite_derivatives(phi, y))
    return value, slope


def _unwrap(arr, like):
    return float(arr[0]) if np.ndim(like) == 0 else arr


# ── Public evaluation ────────────────────────────────

def psi_x(state: StateFunctions, x):
    return _unwrap(_series(state, Space.POSITION, x), x)


def psi_p(state: StateFunctions, p):
    """Complex momentum amplitude; the real series times the state's global phase."""
    value = state.momentum_phase() * _series(state, Space.MOMENTUM, p)
    return complex(value[0]) if np.ndim(p) == 0 else value


def amplitude(state: StateFunctions, space: str, t):
    """Real amplitude whose square is the density in ``space``."""
    return _unwrap(_series(state, space, t), t)


def amplitude_and_derivative(state: StateFunctions, space: str, t):
    psi, dpsi = _series(state, space, t, derivative=True)
    return _unwrap(psi, t), _unwrap(dpsi, t)


def density(state: StateFunctions, space: str, t):
    psi = _series(state, space, t)
    return _unwrap(psi * psi, t)


def density_and_derivative(state: StateFunctions, space: str, t):
    """(ρ, dρ/dt) with ρ = ψ² and dρ = 2ψψ′."""
    psi, dpsi = _series(state, space, t, derivative=True)
    return _unwrap(psi * psi, t), _unwrap(2.0 * psi * dpsi, t)


# ── Support and derived quantities ───────────────────

def support(state: StateFunctions, space: str) -> float:
    """Half-width beyond which the density is negligible."""
    return (math.sqrt(2.0 * state.m_max + 1.0) + SUPPORT_MARGIN) / state.scale(space)


def integration_limit(state: StateFunctions, space: str,
                      config: Optional[QuadratureConfig] = None) -> float:
    config = config or QuadratureConfig.from_settings()
    return support(state, space) * config.domain_cut


def expectation(state: StateFunctions, space: str, power: int,
                config: Optional[QuadratureConfig] = None) -> float:
    """⟨t^power⟩ over the density in ``space``."""
    config = config or QuadratureConfig.from_settings()
    limit = integration_limit(state, space, config)
    return quadrature.integrate(lambda t: t ** power * density(state, space, t),
                                -limit, limit, config)


def normalization(state: StateFunctions, space: str,
                  config: Optional[QuadratureConfig] = None) -> float:
    return expectation(state, space, 0, config)


def node_count(state: StateFunctions, samples: int = 4001) -> int:
    """Sign changes of ψ(x) across its support, ignoring tail noise."""
    limit = support(state, Space.POSITION)
    x = np.linspace(-limit, limit, samples)
    psi = psi_x(state, x)
    keep = np.abs(psi) > 1e-8 * np.abs(psi).max()
    signs = np.sign(psi[keep])
    return int(np.count_nonzero(signs[1:] != signs[:-1]))
