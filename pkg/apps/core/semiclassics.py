"""
Semiclassical views of a double-well eigenstate

- Tunneling probability: weight of |ψ|² between the inner turning points,
  defined only while the level lies below the barrier top.
- Phase-space contour p = ±√(E − V(x)) and the area it encloses on x ≥ 0.
- Onset of tunneling: the β at which a level drops below the barrier top.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy import optimize

from . import quadrature
from .exceptions import InvalidParameters, UnsupportedState
from .oscillator_basis import SolverConfig, Spectrum, diagonalize
from .potential import PotentialSpec, barrier_top, evaluate, shift, turning_points
from .quadrature import QuadratureConfig
from .wavefunction import Space, density

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TunnelingResult:
    t_prob: float
    inner_tp: Optional[float] = None

    def to_dict(self) -> dict:
        return {'tunneling': self.t_prob, 'inner_turning_point': self.inner_tp}


@dataclass(frozen=True, eq=False)
class ContourLobe:
    lobe_id: int
    x: np.ndarray
    p: np.ndarray       # upper branch, p ≥ 0


@dataclass(frozen=True, eq=False)
class PhaseContour:
    energy: float
    lobes: int
    branches: Tuple[ContourLobe, ...] = field(default=())

    @property
    def samples(self) -> List[Tuple[float, float]]:
        """Closed orbit(s): upper branch left to right, lower branch back."""
        points = []
        for lobe in self.branches:
            points.extend(zip(lobe.x.tolist(), lobe.p.tolist()))
            points.extend(zip(lobe.x[::-1].tolist(), (-lobe.p[::-1]).tolist()))
        return points


def state_energy(spec: PotentialSpec, spectrum: Spectrum, state_index: int) -> float:
    """Eigenvalue expressed in ``spec``'s shift convention."""
    if not 0 <= state_index < spectrum.size:
        raise UnsupportedState(f'state {state_index} outside basis of {spectrum.size}')
    shifted = float(spectrum.shifted_eigenvalues[state_index])
    return shifted if spec.include_shift else shifted - shift(spec)


def _below_barrier(spec, energy):
    return spec.beta > 0 and energy < barrier_top(spec)


# ── Tunneling ────────────────────────────────────────

def tunneling_probability(spec: PotentialSpec, spectrum: Spectrum, state_index: int,
                          config: Optional[QuadratureConfig] = None) -> TunnelingResult:
    energy = state_energy(spec, spectrum, state_index)
    if not _below_barrier(spec, energy):
        return TunnelingResult(t_prob=0.0)

    inner = turning_points(spec, energy, require_inner=True).inner
    if not inner:
        return TunnelingResult(t_prob=0.0, inner_tp=inner)

    state = spectrum.state(state_index)
    weight = quadrature.integrate(lambda x: density(state, Space.POSITION, x),
                                  -inner, inner, config or QuadratureConfig.from_settings())
    return TunnelingResult(t_prob=min(max(weight, 0.0), 1.0), inner_tp=inner)


# ── Phase space ──────────────────────────────────────

def _momentum(spec, energy, x):
    return np.sqrt(np.maximum(energy - evaluate(spec, x), 0.0))


def phase_area(spec: PotentialSpec, spectrum: Spectrum, state_index: int,
               config: Optional[QuadratureConfig] = None) -> float:
    """∫ √(E − V) over the allowed set on x ≥ 0."""
    config = config or QuadratureConfig.from_settings()
    energy = state_energy(spec, spectrum, state_index)
    tp = turning_points(spec, energy)

    def integrand(x):
        return _momentum(spec, energy, x)

    if tp.has_inner and tp.inner > 0:
        return quadrature.integrate_sqrt_endpoint(integrand, tp.inner, tp.outer, config)
    return 0.5 * quadrature.integrate_sqrt_endpoint(integrand, -tp.outer, tp.outer, config)


def phase_contour(spec: PotentialSpec, spectrum: Spectrum, state_index: int,
                  samples: int = 401) -> PhaseContour:
    if samples < 2:
        raise InvalidParameters(f'samples must be >= 2, got {samples}', field='samples')
    energy = state_energy(spec, spectrum, state_index)
    tp = turning_points(spec, energy)

    if tp.has_inner and tp.inner > 0:
        spans = ((-tp.outer, -tp.inner), (tp.inner, tp.outer))
    else:
        spans = ((-tp.outer, tp.outer),)

    branches = []
    for lobe_id, (a, b) in enumerate(spans):
        x = np.linspace(a, b, samples)
        branches.append(ContourLobe(lobe_id=lobe_id, x=x, p=_momentum(spec, energy, x)))
    return PhaseContour(energy=energy, lobes=len(spans), branches=tuple(branches))


def contour_rows(contour: PhaseContour) -> list:
    """[x, p_plus, p_minus, lobe_id] per sample."""
    rows = []
    for lobe in contour.branches:
        for x, p in zip(lobe.x.tolist(), lobe.p.tolist()):
            rows.append([x, p, -p, lobe.lobe_id])
    return rows


# ── Onset of tunneling ───────────────────────────────

def tunneling_onset(alpha: float, state_index: int, config: Optional[SolverConfig] = None,
                    bracket: Tuple[float, float] = (0.0, 10.0), xtol: float = 1e-6) -> float:
    """Smallest β at which E_n (shifted) drops below the barrier top β²/(4α)."""
    config = config or SolverConfig.from_settings()

    def gap(beta):
        spec = PotentialSpec(alpha, beta)
        return float(diagonalize(spec, config).shifted_eigenvalues[state_index]) - shift(spec)

    lo, hi = bracket
    g_lo, g_hi = gap(lo), gap(hi)
    if not (g_lo > 0 > g_hi):
        raise InvalidParameters(
            f'no sign change of E_{state_index} − V(0) on β ∈ [{lo}, {hi}]',
            field='bracket', gap_low=g_lo, gap_high=g_hi)
    beta = optimize.brentq(gap, lo, hi, xtol=xtol)
    logger.info(f'[Semiclassics] onset α={alpha} n={state_index} β*={beta:.6g}')
    return beta
