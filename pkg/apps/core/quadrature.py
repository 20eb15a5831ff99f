"""
1-D integration with a doubling convergence test

Integrands are vectorized callables (numpy array in, array out). The panel
count doubles until two successive estimates agree to
max(abs_tol, rel_tol·|I|); hitting ``max_refinements`` raises NonConvergent
with both estimates attached.
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from django.db import models
from scipy.special import xlogy

from .exceptions import InvalidParameters, NonConvergent

logger = logging.getLogger(__name__)

DENSITY_FLOOR = 1e-300


class Rule(models.TextChoices):
    SIMPSON        = 'simpson',        'Composite Simpson'
    GAUSS_LEGENDRE = 'gauss_legendre', 'Gauss–Legendre panels'


@dataclass(frozen=True)
class QuadratureConfig:
    rule: str = Rule.GAUSS_LEGENDRE
    panels: int = 32
    order: int = 16
    abs_tol: float = 1e-11
    rel_tol: float = 1e-9
    domain_cut: float = 1.2
    max_refinements: int = 10

    def __post_init__(self):
        eps = np.finfo(float).eps
        if self.rule not in Rule.values:
            raise InvalidParameters(f'unknown quadrature rule {self.rule!r}', field='rule')
        if self.panels < 8:
            raise InvalidParameters(f'panels must be >= 8, got {self.panels}', field='panels')
        if self.order < 2:
            raise InvalidParameters(f'order must be >= 2, got {self.order}', field='order')
        if not (self.abs_tol > eps and self.rel_tol > eps):
            raise InvalidParameters('tolerances must exceed machine epsilon', field='abs_tol')
        if not self.domain_cut > 0:
            raise InvalidParameters('domain_cut must be > 0', field='domain_cut')

    @classmethod
    def from_settings(cls, **overrides) -> 'QuadratureConfig':
        from django.conf import settings
        conf = getattr(settings, 'DOUBLEWELL', {}) if settings.configured else {}
        values = {
            'rule':            conf.get('QUADRATURE_RULE', Rule.GAUSS_LEGENDRE),
            'panels':          int(conf.get('QUADRATURE_PANELS', 32)),
            'order':           int(conf.get('QUADRATURE_ORDER', 16)),
            'abs_tol':         float(conf.get('ABS_TOL', 1e-11)),
            'rel_tol':         float(conf.get('REL_TOL', 1e-9)),
            'domain_cut':      float(conf.get('DOMAIN_CUT', 1.2)),
            'max_refinements': int(conf.get('MAX_REFINEMENTS', 10)),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@lru_cache(maxsize=16)
def _legendre(order: int):
    return np.polynomial.legendre.leggauss(order)


def _gauss_legendre(f, a: float, b: float, panels: int, order: int) -> float:
    nodes, weights = _legendre(order)
    edges = np.linspace(a, b, panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    x = mid[:, None] + half[:, None] * nodes[None, :]
    values = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    return float(np.sum(half * (values @ weights)))


def _simpson(f, a: float, b: float, panels: int) -> float:
    intervals = 2 * panels
    x = np.linspace(a, b, intervals + 1)
    w = np.ones(intervals + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    values = np.asarray(f(x), dtype=float)
    return float((b - a) / (3.0 * intervals) * np.dot(w, values))


def _estimate(f, a, b, panels, config):
    if config.rule == Rule.SIMPSON:
        return _simpson(f, a, b, panels)
    return _gauss_legendre(f, a, b, panels, config.order)


def integrate(f: Callable, a: float, b: float, config: QuadratureConfig = None) -> float:
    config = config or QuadratureConfig.from_settings()
    if not a < b:
        raise InvalidParameters(f'integration needs a < b, got [{a}, {b}]', field='interval')

    panels = config.panels
    coarse = _estimate(f, a, b, panels, config)
    if not math.isfinite(coarse):
        raise NonConvergent(f'non-finite integrand on [{a}, {b}]', coarse=coarse, fine=coarse)
    fine = coarse
    for step in range(config.max_refinements):
        if step:
            coarse = fine
        panels *= 2
        fine = _estimate(f, a, b, panels, config)
        if abs(fine - coarse) <= max(config.abs_tol, config.rel_tol * abs(fine)):
            return fine
    logger.error(f'[Quad] no convergence on [{a:.6g}, {b:.6g}] after '
                 f'{config.max_refinements} doublings ({panels} panels)')
    raise NonConvergent(f'quadrature did not converge on [{a}, {b}]',
                        coarse=coarse, fine=fine, panels=panels)


def integrate_sqrt_endpoint(f: Callable, a: float, b: float,
                            config: QuadratureConfig = None) -> float:
    """∫_a^b f for f vanishing like a square root at both ends (x = a + (b−a)sin²θ)."""
    width = b - a

    def g(theta):
        s = np.sin(theta)
        return f(a + width * s * s) * width * np.sin(2.0 * theta)

    return integrate(g, 0.0, 0.5 * math.pi, config)


def xlogx(rho):
    """ρ·ln ρ, exactly 0 where ρ is below the denormal floor."""
    rho = np.asarray(rho, dtype=float)
    out = np.where(rho < DENSITY_FLOOR, 0.0, xlogy(rho, np.maximum(rho, DENSITY_FLOOR)))
    return float(out) if out.ndim == 0 else out
