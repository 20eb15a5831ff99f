"""
Polynomial double-well potentials

    V(x) = α·x^(2n) − β·x^(2m) (+ h),   h = β² / (4α)

- (n, m) = (2, 1) is the quartic double well used everywhere else in the app;
  its geometry and turning points have closed forms.
- Other exponent pairs are evaluated exactly and handled by a bracketed
  root finder for the turning points.
- ``include_shift`` decides whether +h is part of V. With the shift the
  quartic well bottoms sit at V = 0; without it V(0) = 0 and the reference
  energies are negative. Both conventions stay available.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import optimize

from .exceptions import EnergyBelowMinimum, InvalidParameters, NoBarrier

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PotentialSpec:
    alpha: float
    beta: float
    n_exp: int = 2
    m_exp: int = 1
    include_shift: bool = True

    def __post_init__(self):
        if not self.alpha > 0:
            raise InvalidParameters(f'alpha must be > 0, got {self.alpha}', field='alpha')
        if self.beta < 0:
            raise InvalidParameters(f'beta must be >= 0, got {self.beta}', field='beta')
        if not (self.n_exp > self.m_exp >= 1):
            raise InvalidParameters(
                f'exponents need n_exp > m_exp >= 1, got ({self.n_exp}, {self.m_exp})',
                field='n_exp')

    @property
    def is_quartic(self) -> bool:
        return (self.n_exp, self.m_exp) == (2, 1)

    @property
    def h(self) -> float:
        """The β²/(4α) constant, whether or not it is added to V."""
        return self.beta ** 2 / (4.0 * self.alpha)

    @property
    def offset(self) -> float:
        """Constant actually added to V in this spec's convention."""
        return self.h if self.include_shift else 0.0

    def with_shift(self, include_shift: bool) -> 'PotentialSpec':
        return PotentialSpec(self.alpha, self.beta, self.n_exp, self.m_exp, include_shift)

    def to_dict(self) -> dict:
        return {
            'alpha':         self.alpha,
            'beta':          self.beta,
            'n_exp':         self.n_exp,
            'm_exp':         self.m_exp,
            'include_shift': self.include_shift,
        }


@dataclass(frozen=True)
class WellGeometry:
    x0: float   # location of the right-hand minimum
    h: float    # barrier height above the well bottoms


@dataclass(frozen=True)
class TurningPoints:
    outer: float
    inner: Optional[float] = None

    @property
    def has_inner(self) -> bool:
        return self.inner is not None


# ── Evaluation ───────────────────────────────────────

def evaluate(spec: PotentialSpec, x):
    """V(x); scalars in, float out; arrays in, arrays out."""
    t = np.asarray(x, dtype=float)
    value = spec.alpha * t ** (2 * spec.n_exp) - spec.beta * t ** (2 * spec.m_exp) + spec.offset
    return float(value) if value.ndim == 0 else value


def shift(spec: PotentialSpec) -> float:
    """Constant that lifts the two minima of the quartic well to zero."""
    return spec.h


def barrier_top(spec: PotentialSpec) -> float:
    """V(0) in the potential's own shift convention."""
    return spec.offset


def well_geometry(spec: PotentialSpec) -> WellGeometry:
    if spec.beta == 0:
        return WellGeometry(x0=0.0, h=0.0)
    if spec.is_quartic:
        return WellGeometry(x0=math.sqrt(spec.beta / (2.0 * spec.alpha)), h=spec.h)
    n, m = spec.n_exp, spec.m_exp
    x0 = (m * spec.beta / (n * spec.alpha)) ** (1.0 / (2 * (n - m)))
    return WellGeometry(x0=x0, h=evaluate(spec, 0.0) - evaluate(spec, x0))


def minimum_value(spec: PotentialSpec) -> float:
    return evaluate(spec, well_geometry(spec).x0)


def scaled(spec: PotentialSpec, alpha: float) -> PotentialSpec:
    """
    The potential at ``alpha`` whose eigenproblem is ``spec``'s under x → λx.

    With r = alpha/spec.alpha, β picks up r^((m+1)/(n+1)) and every energy
    r^(1/(n+1)); densities only change width, so net measures are unchanged.
    For the quartic that is β·r^(2/3) and E·r^(1/3), shift included.
    """
    if not alpha > 0:
        raise InvalidParameters(f'alpha must be > 0, got {alpha}', field='alpha')
    ratio = alpha / spec.alpha
    beta = spec.beta * ratio ** ((spec.m_exp + 1) / (spec.n_exp + 1))
    return PotentialSpec(alpha, beta, spec.n_exp, spec.m_exp, spec.include_shift)


# ── Turning points ───────────────────────────────────

def turning_points(spec: PotentialSpec, energy: float,
                   require_inner: bool = False) -> TurningPoints:
    """
    Positive roots of V(x) = E (the negative ones follow by symmetry).

    ``energy`` is in the same shift convention as ``spec``. The inner root is
    present when E lies at or below the barrier top; at exactly the barrier
    top it is 0.
    """
    if require_inner and spec.beta == 0:
        raise NoBarrier('beta = 0: the potential has no central barrier', beta=spec.beta)

    floor = minimum_value(spec)
    if energy < floor:
        raise EnergyBelowMinimum(f'E={energy} lies below min V={floor}',
                                 energy=energy, minimum=floor)

    if spec.is_quartic:
        return _quartic_turning_points(spec, energy)
    return _numeric_turning_points(spec, energy)


def _quartic_turning_points(spec: PotentialSpec, energy: float) -> TurningPoints:
    a, b = spec.alpha, spec.beta
    shifted = max(energy + shift(spec) - spec.offset, 0.0)
    root = 2.0 * math.sqrt(a * shifted)
    outer = math.sqrt((b + root) / (2.0 * a))
    if b == 0 or shifted > spec.h:
        return TurningPoints(outer=outer)
    inner = math.sqrt(max(b - root, 0.0) / (2.0 * a))
    return TurningPoints(outer=outer, inner=inner)


def _numeric_turning_points(spec: PotentialSpec, energy: float) -> TurningPoints:
    x0 = well_geometry(spec).x0

    def excess(x):
        return evaluate(spec, x) - energy

    right = max(2.0 * x0, 1.0)
    while excess(right) < 0:
        right *= 2.0
    outer = optimize.brentq(excess, x0, right, xtol=1e-14, rtol=4 * np.finfo(float).eps)

    inner = None
    if spec.beta > 0:
        top = excess(0.0)
        if top == 0:
            inner = 0.0
        elif top > 0:
            inner = optimize.brentq(excess, 0.0, x0, xtol=1e-14, rtol=4 * np.finfo(float).eps)
    logger.debug(f'[Potential] numeric turning points E={energy:.6g} outer={outer:.6g} inner={inner}')
    return TurningPoints(outer=outer, inner=inner)
