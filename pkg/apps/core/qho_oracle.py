"""
Closed-form oscillator reference values (states n = 0..3)

Convention: H = −d²/dx² + 4γ²x², E_n = 2γ(2n+1). The Shannon and
Onicescu–Shannon constants for n ≥ 1 are only known to a few printed
decimals; ``qho_tolerance`` gives the tolerance each printed value supports.
"""
import math
from dataclasses import dataclass

from django.db import models

from .exceptions import InvalidParameters, UnsupportedState

MAX_STATE = 3

# Shannon constants c_n in S_x = c_n + ½ ln(π/2γ)
SHANNON_CONST = (0.5, 0.77036, 0.92624, 1.03735)
SHANNON_TOTAL_CONST = (1.0, 1.54072, 1.85248, 2.07470)

# Onicescu prefactors of √(γ/π)
ONICESCU_X_FACTOR = (1.0, 3 / 4, 41 / 64, 147 / 256)

# exponents in exp[...] of the OS closed forms, with printed decimals
OS_EXPONENT     = ((1 / 3, None), (0.5136, 4), (0.6175, 4), (0.6916, 4))
OS_NET_EXPONENT = ((2 / 3, None), (1.0271, 4), (1.235, 3), (1.3831, 4))

SHANNON_ABS_TOL = 5e-5
EXACT_REL_TOL = 1e-7


class Kind(models.TextChoices):
    FISHER_X      = 'fisher_x',      'Fisher (x)'
    FISHER_P      = 'fisher_p',      'Fisher (p)'
    FISHER_NET    = 'fisher_net',    'Fisher (net)'
    SHANNON_X     = 'shannon_x',     'Shannon (x)'
    SHANNON_P     = 'shannon_p',     'Shannon (p)'
    SHANNON_TOTAL = 'shannon_total', 'Shannon (total)'
    ONICESCU_X    = 'onicescu_x',    'Onicescu (x)'
    ONICESCU_P    = 'onicescu_p',    'Onicescu (p)'
    ONICESCU_NET  = 'onicescu_net',  'Onicescu (net)'
    OS_X          = 'os_x',          'Onicescu–Shannon (x)'
    OS_P          = 'os_p',          'Onicescu–Shannon (p)'
    OS_NET        = 'os_net',        'Onicescu–Shannon (net)'


@dataclass(frozen=True)
class QhoClosedForms:
    gamma: float
    n: int

    def __post_init__(self):
        if not self.gamma > 0:
            raise InvalidParameters(f'gamma must be > 0, got {self.gamma}', field='gamma')
        if not 0 <= self.n <= MAX_STATE:
            raise UnsupportedState(f'closed forms exist for n = 0..{MAX_STATE}, got {self.n}',
                                   n=self.n)

    @property
    def energy(self) -> float:
        return 2.0 * self.gamma * (2 * self.n + 1)

    def measure(self, kind: str) -> float:
        g, n = self.gamma, self.n
        if kind == Kind.FISHER_X:
            return (8 * n + 4) * g
        if kind == Kind.FISHER_P:
            return (2 * n + 1) / g
        if kind == Kind.FISHER_NET:
            return float((8 * n + 4) * (2 * n + 1))
        if kind == Kind.SHANNON_X:
            return SHANNON_CONST[n] + 0.5 * math.log(math.pi / (2 * g))
        if kind == Kind.SHANNON_P:
            return SHANNON_CONST[n] + 0.5 * math.log(2 * g * math.pi)
        if kind == Kind.SHANNON_TOTAL:
            return SHANNON_TOTAL_CONST[n] + math.log(math.pi)
        if kind == Kind.ONICESCU_X:
            return ONICESCU_X_FACTOR[n] * math.sqrt(g / math.pi)
        if kind == Kind.ONICESCU_P:
            return ONICESCU_X_FACTOR[n] / (2 * math.sqrt(g * math.pi))
        if kind == Kind.ONICESCU_NET:
            return ONICESCU_X_FACTOR[n] ** 2 / (2 * math.pi)
        if kind == Kind.OS_X:
            return (ONICESCU_X_FACTOR[n] * (g / (4 * math.pi)) ** (1 / 6)
                    * math.exp(OS_EXPONENT[n][0]))
        if kind == Kind.OS_P:
            return (0.5 * ONICESCU_X_FACTOR[n] * (4 / (g * math.pi)) ** (1 / 6)
                    * math.exp(OS_EXPONENT[n][0]))
        if kind == Kind.OS_NET:
            return (0.5 * ONICESCU_X_FACTOR[n] ** 2 * math.pi ** (-1 / 3)
                    * math.exp(OS_NET_EXPONENT[n][0]))
        raise InvalidParameters(f'unknown measure kind {kind!r}', field='kind')

    def to_dict(self) -> dict:
        return {kind: self.measure(kind) for kind in Kind.values}


def qho_measure(kind: str, gamma: float, n: int) -> float:
    return QhoClosedForms(gamma, n).measure(kind)


def qho_tolerance(kind: str, n: int):
    """
    (tolerance, is_relative) supported by the printed closed form.

    Exact forms: 1e-7 relative. Shannon forms with 5-decimal constants:
    5e-5 absolute. OS forms with an exponent printed to d decimals: 10^-d
    relative.
    """
    if n == 0 or kind in (Kind.FISHER_X, Kind.FISHER_P, Kind.FISHER_NET,
                          Kind.ONICESCU_X, Kind.ONICESCU_P, Kind.ONICESCU_NET):
        return EXACT_REL_TOL, True
    if kind in (Kind.SHANNON_X, Kind.SHANNON_P, Kind.SHANNON_TOTAL):
        return SHANNON_ABS_TOL, False
    decimals = (OS_NET_EXPONENT if kind == Kind.OS_NET else OS_EXPONENT)[n][1]
    return 10.0 ** -decimals, True


def agrees(kind: str, n: int, expected: float, actual: float) -> bool:
    tol, relative = qho_tolerance(kind, n)
    scale = abs(expected) if relative else 1.0
    return abs(actual - expected) <= tol * scale
