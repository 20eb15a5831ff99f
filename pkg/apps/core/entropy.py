"""
Information measures of a single eigenstate

Per space (x or p): Fisher information ∫ρ′²/ρ, Shannon entropy −∫ρ ln ρ,
Onicescu energy ∫ρ², the Onicescu–Shannon product exp(2S/3)·E and the
standard deviation. Net values are products (Fisher, Onicescu, OS) or the
sum (Shannon).

Also holds the β-grid helpers used by the sweep reports: merge/plateau
detection for state pairs and the classification of |d/dβ| in x vs p.
"""
import logging
import math
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np

from . import quadrature
from .exceptions import InvariantViolation
from .quadrature import QuadratureConfig
from .wavefunction import (Space, StateFunctions, amplitude_and_derivative, density, expectation,
                           integration_limit)

logger = logging.getLogger(__name__)

INVARIANT_TOL = 1e-8
BBM_BOUND = 1.0 + math.log(math.pi)


@dataclass(frozen=True)
class MeasureSet:
    fisher_x: float
    fisher_p: float
    fisher_net: float
    shannon_x: float
    shannon_p: float
    shannon_total: float
    onicescu_x: float
    onicescu_p: float
    onicescu_net: float
    os_x: float
    os_p: float
    os_net: float
    sigma_x: float
    sigma_p: float

    @property
    def sigma_product(self) -> float:
        return self.sigma_x * self.sigma_p

    @classmethod
    def build(cls, fisher_x, fisher_p, shannon_x, shannon_p, onicescu_x, onicescu_p,
              sigma_x, sigma_p) -> 'MeasureSet':
        os_x = math.exp(2.0 * shannon_x / 3.0) * onicescu_x
        os_p = math.exp(2.0 * shannon_p / 3.0) * onicescu_p
        return cls(
            fisher_x=fisher_x, fisher_p=fisher_p, fisher_net=fisher_x * fisher_p,
            shannon_x=shannon_x, shannon_p=shannon_p, shannon_total=shannon_x + shannon_p,
            onicescu_x=onicescu_x, onicescu_p=onicescu_p, onicescu_net=onicescu_x * onicescu_p,
            os_x=os_x, os_p=os_p, os_net=os_x * os_p,
            sigma_x=sigma_x, sigma_p=sigma_p,
        )

    def check_invariants(self, tol: float = INVARIANT_TOL):
        """Raise InvariantViolation if a product/sum law or a lower bound fails."""
        def close(a, b):
            return abs(a - b) <= tol * max(1.0, abs(a), abs(b))

        failures = []
        if not close(self.shannon_total, self.shannon_x + self.shannon_p):
            failures.append('shannon_total != shannon_x + shannon_p')
        if not close(self.fisher_net, self.fisher_x * self.fisher_p):
            failures.append('fisher_net != fisher_x * fisher_p')
        if not close(self.onicescu_net, self.onicescu_x * self.onicescu_p):
            failures.append('onicescu_net != onicescu_x * onicescu_p')
        if not close(self.os_net, math.exp(2.0 * self.shannon_total / 3.0) * self.onicescu_net):
            failures.append('os_net != exp(2S/3) * onicescu_net')
        if self.shannon_total < BBM_BOUND - tol:
            failures.append(f'shannon_total {self.shannon_total:.12g} below 1 + ln π')
        if self.sigma_product < 0.5 - tol:
            failures.append(f'sigma_x * sigma_p = {self.sigma_product:.12g} below 1/2')
        if failures:
            raise InvariantViolation('; '.join(failures), measures=self.to_dict())

    def to_dict(self) -> dict:
        data = asdict(self)
        data['sigma_product'] = self.sigma_product
        return data


# ── Single measures ──────────────────────────────────

def _limit(state, space, config):
    return integration_limit(state, space, config)


def fisher(state: StateFunctions, space: str, config: Optional[QuadratureConfig] = None) -> float:
    config = config or QuadratureConfig.from_settings()
    limit = _limit(state, space, config)

    # ρ′²/ρ = 4ψ′² for a real amplitude, finite at nodes and in the tails
    def integrand(t):
        _, dpsi = amplitude_and_derivative(state, space, t)
        return 4.0 * dpsi * dpsi

    return quadrature.integrate(integrand, -limit, limit, config)


def shannon(state: StateFunctions, space: str, config: Optional[QuadratureConfig] = None) -> float:
    config = config or QuadratureConfig.from_settings()
    limit = _limit(state, space, config)
    return -quadrature.integrate(lambda t: quadrature.xlogx(density(state, space, t)),
                                 -limit, limit, config)


def onicescu(state: StateFunctions, space: str, config: Optional[QuadratureConfig] = None) -> float:
    config = config or QuadratureConfig.from_settings()
    limit = _limit(state, space, config)
    return quadrature.integrate(lambda t: density(state, space, t) ** 2, -limit, limit, config)


def onicescu_shannon(state: StateFunctions, space: str,
                     config: Optional[QuadratureConfig] = None) -> float:
    return math.exp(2.0 * shannon(state, space, config) / 3.0) * onicescu(state, space, config)


def _sigma(state, space, config):
    mean = expectation(state, space, 1, config)
    variance = expectation(state, space, 2, config) - mean * mean
    return math.sqrt(max(variance, 0.0))


def uncertainties(state: StateFunctions, config: Optional[QuadratureConfig] = None):
    """(σ_x, σ_p)."""
    config = config or QuadratureConfig.from_settings()
    return _sigma(state, Space.POSITION, config), _sigma(state, Space.MOMENTUM, config)


def measure_set(state: StateFunctions, config: Optional[QuadratureConfig] = None,
                check: bool = True) -> MeasureSet:
    config = config or QuadratureConfig.from_settings()
    sigma_x, sigma_p = uncertainties(state, config)
    measures = MeasureSet.build(
        fisher_x=fisher(state, Space.POSITION, config),
        fisher_p=fisher(state, Space.MOMENTUM, config),
        shannon_x=shannon(state, Space.POSITION, config),
        shannon_p=shannon(state, Space.MOMENTUM, config),
        onicescu_x=onicescu(state, Space.POSITION, config),
        onicescu_p=onicescu(state, Space.MOMENTUM, config),
        sigma_x=sigma_x,
        sigma_p=sigma_p,
    )
    logger.debug(f'[Entropy] state={state.state_index} γ={state.gamma:.6g} '
                 f'S={measures.shannon_total:.10g} I={measures.fisher_net:.10g}')
    if check:
        measures.check_invariants()
    return measures


# ── β-grid helpers ───────────────────────────────────

def _merged_run(beta_grid, a, b, tol, run):
    diff = np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))
    inside = diff < tol
    count = 0
    for i, ok in enumerate(inside):
        count = count + 1 if ok else 0
        if count == run:
            start = i - run + 1
            end = start
            while end + 1 < len(inside) and inside[end + 1]:
                end += 1
            return start, end
    return None


def _merge_defaults(tol, run):
    from django.conf import settings
    conf = getattr(settings, 'DOUBLEWELL', {}) if settings.configured else {}
    tol = conf.get('MERGE_TOL', 1e-3) if tol is None else tol
    run = conf.get('MERGE_RUN', 3) if run is None else run
    return float(tol), int(run)


def merge_point(beta_grid: Sequence[float], a: Sequence[float], b: Sequence[float],
                tol: Optional[float] = None, run: Optional[int] = None) -> Optional[float]:
    """First β of the first ``run`` consecutive points with |a − b| < tol."""
    tol, run = _merge_defaults(tol, run)
    found = _merged_run(beta_grid, a, b, tol, run)
    return None if found is None else float(beta_grid[found[0]])


def plateau_value(beta_grid: Sequence[float], a: Sequence[float], b: Sequence[float],
                  tol: Optional[float] = None, run: Optional[int] = None) -> Optional[float]:
    """Mean of the pair over the merged stretch."""
    tol, run = _merge_defaults(tol, run)
    found = _merged_run(beta_grid, a, b, tol, run)
    if found is None:
        return None
    start, end = found
    pair = 0.5 * (np.asarray(a[start:end + 1], dtype=float) + np.asarray(b[start:end + 1], dtype=float))
    return float(pair.mean())


BALANCED = 'balanced'
POSITION_DOMINATED = 'position'
MOMENTUM_DOMINATED = 'momentum'


def trichotomy(d_x: Sequence[float], d_p: Sequence[float], rel_tol: float = 1e-6) -> list:
    """Compare |d/dβ| of the x and p parts point by point."""
    out = []
    for dx, dp in zip(np.abs(d_x), np.abs(d_p)):
        scale = max(dx, dp)
        if scale == 0 or abs(dx - dp) <= rel_tol * scale:
            out.append(BALANCED)
        elif dx > dp:
            out.append(POSITION_DOMINATED)
        else:
            out.append(MOMENTUM_DOMINATED)
    return out
