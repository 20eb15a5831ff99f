"""
Exact diagonalization in a scaled harmonic-oscillator number basis

- Basis scale γ chosen by minimizing the trace of the Hamiltonian matrix
  (closed-form cubic for the quartic double well, numeric minimization for
  other exponent pairs, or a fixed value).
- Ladder convention: x = (a + a†) / (2√γ), p = i√γ (a† − a), so that
  −d²/dx² + 4γ²x² has eigenvalues 2γ(2n+1).
- X is assembled in dimension N + pad, raised to the needed powers there, and
  only then truncated to N × N; P² is exactly banded.
- The matrix never couples even and odd indices, so the two parity blocks are
  diagonalized separately. Each eigenvector therefore has a definite parity,
  even inside quasi-degenerate doublets.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from django.db import models
from scipy import linalg, optimize

from .exceptions import DegenerateCubic, EigensolverFailure, InvalidParameters
from .potential import PotentialSpec
from .wavefunction import Parity, StateFunctions

logger = logging.getLogger(__name__)

DEGENERACY_TOL = 1e-13     # |ΔE| below which the even state is listed first
NOISE_FACTOR   = 16        # multiples of eps·‖H‖ treated as a tie
RESIDUAL_TOL   = 1e-9      # relative to ‖H‖, checked on the lower half of the spectrum


class GammaMode(models.TextChoices):
    FULL   = 'full',   'Trace over the full basis'
    EVEN   = 'even',   'Trace over even-parity functions'
    ODD    = 'odd',    'Trace over odd-parity functions'
    MANUAL = 'manual', 'Fixed γ'


@dataclass(frozen=True)
class SolverConfig:
    basis_size: int = 100
    gamma_mode: str = GammaMode.FULL
    gamma: Optional[float] = None
    pad: int = 4

    def __post_init__(self):
        if self.basis_size < 4:
            raise InvalidParameters(f'basis_size must be >= 4, got {self.basis_size}',
                                    field='basis_size')
        if self.gamma_mode not in GammaMode.values:
            raise InvalidParameters(f'unknown gamma_mode {self.gamma_mode!r}', field='gamma_mode')
        if self.gamma_mode == GammaMode.MANUAL and not (self.gamma and self.gamma > 0):
            raise InvalidParameters('manual gamma_mode needs gamma > 0', field='gamma')
        if self.pad < 0:
            raise InvalidParameters(f'pad must be >= 0, got {self.pad}', field='pad')

    @classmethod
    def from_settings(cls, **overrides) -> 'SolverConfig':
        from django.conf import settings
        conf = getattr(settings, 'DOUBLEWELL', {}) if settings.configured else {}
        values = {
            'basis_size': int(conf.get('BASIS_SIZE', 100)),
            'gamma_mode': conf.get('GAMMA_MODE', GammaMode.FULL),
            'pad':        int(conf.get('PAD', 4)),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def effective_pad(self, spec: PotentialSpec) -> int:
        return max(self.pad, 2 * spec.n_exp)


@dataclass(frozen=True, eq=False)
class Spectrum:
    gamma: float
    eigenvalues: np.ndarray          # ascending, in the potential's shift convention
    coefficients: np.ndarray         # column n = basis coefficients of state n
    shift_included: bool
    shift: float                     # β²/(4α)
    parities: tuple = field(default=())

    def __post_init__(self):
        for arr in (self.eigenvalues, self.coefficients):
            arr.flags.writeable = False

    @property
    def size(self) -> int:
        return len(self.eigenvalues)

    @property
    def shifted_eigenvalues(self) -> np.ndarray:
        return self.eigenvalues if self.shift_included else self.eigenvalues + self.shift

    @property
    def unshifted_eigenvalues(self) -> np.ndarray:
        return self.eigenvalues - self.shift if self.shift_included else self.eigenvalues

    def state(self, index: int) -> StateFunctions:
        return StateFunctions(
            state_index=index,
            gamma=self.gamma,
            coeffs=np.array(self.coefficients[:, index]),
            parity=self.parities[index],
        )

    def to_dict(self, states: int = 10) -> dict:
        k = min(states, self.size)
        return {
            'gamma':                 self.gamma,
            'basis_size':            self.size,
            'shift':                 self.shift,
            'shift_included':        self.shift_included,
            'eigenvalues':           self.eigenvalues[:k].tolist(),
            'shifted_eigenvalues':   self.shifted_eigenvalues[:k].tolist(),
            'unshifted_eigenvalues': self.unshifted_eigenvalues[:k].tolist(),
            'parities':              [str(p) for p in self.parities[:k]],
        }


# ── Basis scale γ ────────────────────────────────────

def trace_constant(mode: str, basis_size: int) -> float:
    """C in 8γ³ + 2βγ − αC = 0 for the quartic well."""
    n = basis_size
    if mode == GammaMode.EVEN:
        return 2.0 * n + 1.0
    if mode == GammaMode.ODD:
        return 2.0 * n + 3.0
    return (2.0 * n * n + 4.0 * n + 3.0) / (n + 1.0)


def cubic_root(alpha: float, beta: float, c: float) -> float:
    """Unique positive root of 8γ³ + 2βγ − αc = 0 (β ≥ 0)."""
    load = alpha * c
    if not load > 0:
        raise DegenerateCubic(f'alpha·C = {load}: the only root is γ = 0', alpha=alpha, c=c)
    upper = (load / 8.0) ** (1.0 / 3.0)
    if beta == 0:
        return upper

    def cubic(g):
        return 8.0 * g ** 3 + 2.0 * beta * g - load

    # f(0) < 0 and f(upper) = 2β·upper > 0
    gamma = optimize.brentq(cubic, 0.0, upper, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    # one Newton step to squeeze out the bracket tolerance
    slope = 24.0 * gamma ** 2 + 2.0 * beta
    polished = gamma - cubic(gamma) / slope
    return polished if abs(cubic(polished)) <= abs(cubic(gamma)) else gamma


def trace(spec: PotentialSpec, gamma: float, config: SolverConfig,
          mode: Optional[str] = None) -> float:
    """Trace of the N × N Hamiltonian, optionally over one parity only."""
    diag = np.diag(build_hamiltonian(spec, gamma, config))
    mode = mode or config.gamma_mode
    if mode == GammaMode.EVEN:
        return float(diag[0::2].sum())
    if mode == GammaMode.ODD:
        return float(diag[1::2].sum())
    return float(diag.sum())


def solve_gamma(spec: PotentialSpec, config: SolverConfig) -> float:
    if config.gamma_mode == GammaMode.MANUAL:
        return float(config.gamma)
    if spec.is_quartic:
        return cubic_root(spec.alpha, spec.beta,
                          trace_constant(config.gamma_mode, config.basis_size))

    # other exponent pairs: minimize the trace numerically in log γ
    def objective(log_gamma):
        return trace(spec, math.exp(log_gamma), config)

    result = optimize.minimize_scalar(objective, bounds=(-12.0, 12.0), method='bounded',
                                      options={'xatol': 1e-12})
    if not result.success:
        logger.warning(f'[Basis] trace minimization did not report success: {result.message}')
    return math.exp(result.x)


# ── Matrix assembly ──────────────────────────────────

def position_matrix(gamma: float, dim: int) -> np.ndarray:
    """x = (a + a†) / (2√γ) in the first ``dim`` number states."""
    off = np.sqrt(np.arange(1, dim)) / (2.0 * math.sqrt(gamma))
    return np.diag(off, 1) + np.diag(off, -1)


def kinetic_matrix(gamma: float, dim: int) -> np.ndarray:
    """p² = γ(2n+1) − γ(a†² + a²), exactly banded."""
    m = np.arange(dim)
    off = -gamma * np.sqrt((m[:-2] + 1.0) * (m[:-2] + 2.0))
    return np.diag(gamma * (2.0 * m + 1.0)) + np.diag(off, 2) + np.diag(off, -2)


def build_hamiltonian(spec: PotentialSpec, gamma: float, config: SolverConfig) -> np.ndarray:
    if not gamma > 0:
        raise InvalidParameters(f'gamma must be > 0, got {gamma}', field='gamma')
    n = config.basis_size
    dim = n + config.effective_pad(spec)

    x = position_matrix(gamma, dim)
    x_high = np.linalg.matrix_power(x, 2 * spec.n_exp)[:n, :n]
    x_low = np.linalg.matrix_power(x, 2 * spec.m_exp)[:n, :n]

    h = kinetic_matrix(gamma, n) + spec.alpha * x_high - spec.beta * x_low
    if spec.offset:
        h[np.diag_indices(n)] += spec.offset
    return 0.5 * (h + h.T)


def diagonal_formula(spec: PotentialSpec, gamma: float, basis_size: int) -> np.ndarray:
    """Closed-form diagonal of the quartic Hamiltonian (used as a check)."""
    m = np.arange(basis_size, dtype=float)
    return (2.0 * gamma * (2 * m + 1)
            - (spec.beta + 4.0 * gamma ** 2) * (2 * m + 1) / (4.0 * gamma)
            + 3.0 * spec.alpha * (2 * m ** 2 + 2 * m + 1) / (16.0 * gamma ** 2)
            + spec.offset)


# ── Diagonalization ──────────────────────────────────

def _matrix_diagnostics(h: np.ndarray) -> dict:
    finite = bool(np.isfinite(h).all())
    diag = {'finite': finite, 'shape': list(h.shape)}
    if finite:
        diag['frobenius_norm'] = float(np.linalg.norm(h))
        diag['max_abs_entry'] = float(np.abs(h).max())
        diag['asymmetry'] = float(np.abs(h - h.T).max())
    return diag


def _block_eigh(block: np.ndarray, label: str):
    try:
        return linalg.eigh(block)
    except (linalg.LinAlgError, ValueError) as e:
        raise EigensolverFailure(f'{label} block eigensolver failed: {e}',
                                 block=label, **_matrix_diagnostics(block)) from e


def diagonalize(spec: PotentialSpec, config: SolverConfig) -> Spectrum:
    gamma = solve_gamma(spec, config)
    h = build_hamiltonian(spec, gamma, config)
    if not np.isfinite(h).all():
        raise EigensolverFailure('Hamiltonian has non-finite entries', **_matrix_diagnostics(h))

    n = config.basis_size
    energies, vectors, parities = [], [], []
    for parity, start in ((Parity.EVEN, 0), (Parity.ODD, 1)):
        idx = np.arange(start, n, 2)
        values, block_vectors = _block_eigh(h[np.ix_(idx, idx)], parity.label)
        for k in range(len(values)):
            full = np.zeros(n)
            full[idx] = block_vectors[:, k]
            pivot = np.argmax(np.abs(full))
            if full[pivot] < 0:
                full = -full
            energies.append(float(values[k]))
            vectors.append(full)
            parities.append(parity)

    order = sorted(range(n), key=lambda i: energies[i])
    # quasi-degenerate doublets: even partner first; the window never drops
    # below the eigensolver noise floor eps·‖H‖
    window = max(DEGENERACY_TOL, NOISE_FACTOR * np.finfo(float).eps * max(map(abs, energies)))
    for j in range(n - 1):
        a, b = order[j], order[j + 1]
        if (abs(energies[a] - energies[b]) < window
                and parities[a] == Parity.ODD and parities[b] == Parity.EVEN):
            order[j], order[j + 1] = b, a

    eigenvalues = np.array([energies[i] for i in order])
    coefficients = np.column_stack([vectors[i] for i in order])
    spectrum = Spectrum(
        gamma=gamma,
        eigenvalues=eigenvalues,
        coefficients=coefficients,
        shift_included=spec.include_shift,
        shift=spec.h,
        parities=tuple(parities[i] for i in order),
    )

    lower = n // 2
    res = residuals(spectrum, h)[:lower]
    scale = float(np.abs(eigenvalues).max()) or 1.0
    if res.max() > RESIDUAL_TOL * scale:
        logger.warning(f'[Basis] residual {res.max():.3e} exceeds {RESIDUAL_TOL:g}·‖H‖ '
                       f'(α={spec.alpha}, β={spec.beta}, N={n})')
    logger.info(f'[Basis] α={spec.alpha} β={spec.beta} N={n} γ={gamma:.12g} '
                f'mode={config.gamma_mode} E0={eigenvalues[0]:.15g}')
    return spectrum


def residuals(spectrum: Spectrum, h: np.ndarray) -> np.ndarray:
    """‖H v − E v‖ for every eigenpair."""
    v = spectrum.coefficients
    return np.linalg.norm(h @ v - v * spectrum.eigenvalues, axis=0)
