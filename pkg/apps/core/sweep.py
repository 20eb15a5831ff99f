"""
β-sweep engine v1
  - (α, β) points fanned out over a thread pool, rows sorted by (α, β, state)
  - CSV / JSON tables with 15 significant digits, written atomically
  - flat ``key = value`` config files (flags > file > settings)
  - derivative reports, merge points, extrema tables
  - DeepDiff comparison against a baseline table

Config file schema (``#`` starts a comment, lists are comma separated):

    alpha_values = 0.5, 1, 2
    beta_start   = 0
    beta_stop    = 10
    beta_step    = 0.25
    states       = 0, 1
    measures     = shannon, onicescu
    output_path  = out/shannon.csv
    format       = csv
    basis_size   = 100
    gamma_mode   = full
    workers      = 4
"""
import concurrent.futures
import csv
import json
import logging
import math
import os
import tempfile
import time
from dataclasses import dataclass, field, replace
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from django.db import models

from . import entropy, semiclassics
from .exceptions import GridTooCoarse, InvalidParameters, InvariantViolation, UnsupportedState
from .oscillator_basis import GammaMode, SolverConfig, diagonalize
from .potential import PotentialSpec, scaled
from .quadrature import QuadratureConfig
from .wavefunction import Space

logger = logging.getLogger(__name__)


class Format(models.TextChoices):
    CSV  = 'csv',  'CSV'
    JSON = 'json', 'JSON'


# ── Columns ──────────────────────────────────────────

KEY_COLUMNS = ('alpha', 'beta', 'state')

MEASURE_COLUMNS = {
    'fisher':    ('fisher_x', 'fisher_p', 'fisher_net'),
    'shannon':   ('shannon_x', 'shannon_p', 'shannon_total'),
    'onicescu':  ('onicescu_x', 'onicescu_p', 'onicescu_net'),
    'os':        ('os_x', 'os_p', 'os_net'),
    'sigma':     ('sigma_x', 'sigma_p', 'sigma_product'),
    'tunneling': ('tunneling', 'inner_turning_point'),
    'area':      ('phase_area',),
    'energy':    ('energy_shifted', 'energy_unshifted'),
}
MEASURE_ORDER = tuple(MEASURE_COLUMNS)
MIN_DERIVATIVE_POINTS = 5


def columns_for(measures: Sequence[str]) -> List[str]:
    cols = list(KEY_COLUMNS)
    for name in MEASURE_ORDER:
        if name in measures:
            cols.extend(MEASURE_COLUMNS[name])
    return cols


# ── Sweep parameters ─────────────────────────────────

def _settings_conf() -> dict:
    from django.conf import settings
    return getattr(settings, 'DOUBLEWELL', {}) if settings.configured else {}


@dataclass(frozen=True)
class SweepSpec:
    alpha_values: Tuple[float, ...] = (1.0,)
    beta_start: float = 0.0
    beta_stop: float = 10.0
    beta_step: float = 0.25
    states: Tuple[int, ...] = (0, 1)
    measures: Tuple[str, ...] = ('shannon',)
    output_path: Optional[str] = None
    format: str = Format.CSV
    basis_size: int = 100
    gamma_mode: str = GammaMode.FULL
    workers: int = 4

    def __post_init__(self):
        if not self.beta_step > 0:
            raise InvalidParameters(f'beta_step must be > 0, got {self.beta_step}', field='beta_step')
        if self.beta_stop < self.beta_start:
            raise InvalidParameters('beta_stop must be >= beta_start', field='beta_stop')
        if self.beta_start < 0:
            raise InvalidParameters('beta must be >= 0', field='beta_start')
        if not self.alpha_values or any(a <= 0 for a in self.alpha_values):
            raise InvalidParameters('alpha_values must be non-empty and positive', field='alpha_values')
        if not self.states or any(s < 0 for s in self.states):
            raise InvalidParameters('states must be a non-empty list of indices', field='states')
        unknown = set(self.measures) - set(MEASURE_ORDER)
        if not self.measures or unknown:
            raise InvalidParameters(f'unknown measures: {sorted(unknown)}', field='measures')
        if self.format not in Format.values:
            raise InvalidParameters(f'unknown format {self.format!r}', field='format')
        if self.workers < 1:
            raise InvalidParameters('workers must be >= 1', field='workers')
        if max(self.states) >= self.basis_size:
            raise UnsupportedState(f'state {max(self.states)} outside basis of {self.basis_size}')

    # β grid is inclusive of beta_stop when it lands on the step
    def beta_grid(self) -> np.ndarray:
        count = int(math.floor((self.beta_stop - self.beta_start) / self.beta_step + 1e-9)) + 1
        return self.beta_start + self.beta_step * np.arange(count)

    @property
    def columns(self) -> List[str]:
        return columns_for(self.measures)

    def solver_config(self) -> SolverConfig:
        return SolverConfig.from_settings(basis_size=self.basis_size, gamma_mode=self.gamma_mode)

    def to_dict(self) -> dict:
        return {
            'alpha_values': list(self.alpha_values),
            'beta_start':   self.beta_start,
            'beta_stop':    self.beta_stop,
            'beta_step':    self.beta_step,
            'states':       list(self.states),
            'measures':     list(self.measures),
            'output_path':  self.output_path,
            'format':       self.format,
            'basis_size':   self.basis_size,
            'gamma_mode':   self.gamma_mode,
            'workers':      self.workers,
        }

    @classmethod
    def from_sources(cls, file_values: Optional[dict] = None,
                     flag_values: Optional[dict] = None) -> 'SweepSpec':
        """settings < config file < command-line flags."""
        conf = _settings_conf()
        values = {
            'beta_step':  float(conf.get('BETA_STEP', 0.25)),
            'basis_size': int(conf.get('BASIS_SIZE', 100)),
            'gamma_mode': conf.get('GAMMA_MODE', GammaMode.FULL),
            'workers':    int(conf.get('MAX_WORKERS', 4)),
        }
        for source in (file_values or {}, flag_values or {}):
            for key, raw in source.items():
                if raw is None:
                    continue
                values[key] = _coerce(key, raw)
        return cls(**values)


_LIST_FIELDS = {'alpha_values': float, 'states': int, 'measures': str}
_SCALAR_FIELDS = {
    'beta_start': float, 'beta_stop': float, 'beta_step': float,
    'output_path': str, 'format': str, 'basis_size': int, 'gamma_mode': str, 'workers': int,
}


def _coerce(key, raw):
    if key in _LIST_FIELDS:
        cast = _LIST_FIELDS[key]
        items = raw.split(',') if isinstance(raw, str) else raw
        try:
            return tuple(cast(str(i).strip()) for i in items if str(i).strip())
        except ValueError as e:
            raise InvalidParameters(f'bad value for {key}: {raw!r}', field=key) from e
    if key in _SCALAR_FIELDS:
        try:
            return _SCALAR_FIELDS[key](raw.strip() if isinstance(raw, str) else raw)
        except ValueError as e:
            raise InvalidParameters(f'bad value for {key}: {raw!r}', field=key) from e
    raise InvalidParameters(f'unknown sweep key {key!r}', field=key)


def parse_config_file(path: str) -> dict:
    values = {}
    with open(path, encoding='utf-8') as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split('#', 1)[0].strip()
            if not line:
                continue
            if '=' not in line:
                raise InvalidParameters(f'{path}:{lineno}: expected "key = value"', field='config')
            key, raw = (part.strip() for part in line.split('=', 1))
            if key not in _LIST_FIELDS and key not in _SCALAR_FIELDS:
                raise InvalidParameters(f'{path}:{lineno}: unknown key {key!r}', field='config')
            values[key] = raw
    return values


# ── Per-point evaluation ─────────────────────────────

def _state_row(spec_point: PotentialSpec, spectrum, state_index: int,
               measures: Sequence[str], qconf: QuadratureConfig) -> dict:
    row = {'alpha': spec_point.alpha, 'beta': spec_point.beta, 'state': state_index}
    state = spectrum.state(state_index)

    shannon = onicescu = None
    if 'fisher' in measures:
        fx = entropy.fisher(state, Space.POSITION, qconf)
        fp = entropy.fisher(state, Space.MOMENTUM, qconf)
        row.update(fisher_x=fx, fisher_p=fp, fisher_net=fx * fp)
    if 'shannon' in measures or 'os' in measures:
        shannon = (entropy.shannon(state, Space.POSITION, qconf),
                   entropy.shannon(state, Space.MOMENTUM, qconf))
        if shannon[0] + shannon[1] < entropy.BBM_BOUND - entropy.INVARIANT_TOL:
            raise InvariantViolation(
                f'S={sum(shannon):.12g} below 1 + ln π', alpha=spec_point.alpha,
                beta=spec_point.beta, state=state_index)
    if 'shannon' in measures:
        row.update(shannon_x=shannon[0], shannon_p=shannon[1], shannon_total=shannon[0] + shannon[1])
    if 'onicescu' in measures or 'os' in measures:
        onicescu = (entropy.onicescu(state, Space.POSITION, qconf),
                    entropy.onicescu(state, Space.MOMENTUM, qconf))
    if 'onicescu' in measures:
        row.update(onicescu_x=onicescu[0], onicescu_p=onicescu[1],
                   onicescu_net=onicescu[0] * onicescu[1])
    if 'os' in measures:
        os_x = math.exp(2.0 * shannon[0] / 3.0) * onicescu[0]
        os_p = math.exp(2.0 * shannon[1] / 3.0) * onicescu[1]
        row.update(os_x=os_x, os_p=os_p, os_net=os_x * os_p)
    if 'sigma' in measures:
        sx, sp = entropy.uncertainties(state, qconf)
        row.update(sigma_x=sx, sigma_p=sp, sigma_product=sx * sp)
    if 'tunneling' in measures:
        row.update(semiclassics.tunneling_probability(spec_point, spectrum, state_index, qconf).to_dict())
    if 'area' in measures:
        row['phase_area'] = semiclassics.phase_area(spec_point, spectrum, state_index, qconf)
    if 'energy' in measures:
        row['energy_shifted'] = float(spectrum.shifted_eigenvalues[state_index])
        row['energy_unshifted'] = float(spectrum.unshifted_eigenvalues[state_index])
    return row


def solve_point(alpha: float, beta: float, states: Sequence[int], measures: Sequence[str],
                solver: SolverConfig, qconf: QuadratureConfig) -> List[dict]:
    spec_point = PotentialSpec(alpha, float(beta))
    spectrum = diagonalize(spec_point, solver)
    return [_state_row(spec_point, spectrum, n, measures, qconf) for n in states]


# ── Batch execution ──────────────────────────────────

ProgressCallback = Callable[[int, int], None]


@dataclass
class SweepResult:
    spec: SweepSpec
    columns: List[str]
    rows: List[dict] = field(default_factory=list)
    duration: float = 0.0

    def series(self, alpha: float, state: int, column: str) -> Tuple[np.ndarray, np.ndarray]:
        picked = [r for r in self.rows if r['alpha'] == alpha and r['state'] == state]
        beta = np.array([r['beta'] for r in picked], dtype=float)
        return beta, np.array([r[column] for r in picked], dtype=float)


def run_sweep(spec: SweepSpec, qconf: Optional[QuadratureConfig] = None,
              progress: Optional[ProgressCallback] = None) -> SweepResult:
    """
    Evaluate every (α, β) point; write the table when ``spec.output_path`` is set.

    ``progress(done, total)`` is called from the calling thread after each
    finished point.
    """
    solver = spec.solver_config()
    qconf = qconf or QuadratureConfig.from_settings()
    points = [(a, float(b)) for a in spec.alpha_values for b in spec.beta_grid()]
    total = len(points)

    t0 = time.time()
    rows, done = [], 0
    try:
        with concurrent.futures.ThreadPoolExecutor(max_workers=spec.workers) as pool:
            futures = {pool.submit(solve_point, a, b, spec.states, spec.measures, solver, qconf): (a, b)
                       for a, b in points}
            try:
                for fut in concurrent.futures.as_completed(futures):
                    rows.extend(fut.result())
                    done += 1
                    alpha, beta = futures[fut]
                    logger.debug(f'[Sweep] α={alpha} β={beta} done ({done}/{total})')
                    if progress:
                        progress(done, total)
            except Exception:
                for f in futures:
                    f.cancel()
                raise
    except Exception as e:
        logger.error(f'[Sweep] failed after {done}/{total} points: {type(e).__name__}: {e}')
        raise

    rows.sort(key=lambda r: (r['alpha'], r['beta'], r['state']))
    result = SweepResult(spec=spec, columns=spec.columns, rows=rows, duration=round(time.time() - t0, 3))
    if spec.output_path:
        write_table(spec.output_path, spec.format, result.columns, rows)
    logger.info(f'[Sweep] {len(rows)} rows from {total} points in {result.duration}s')
    return result


# ── Serialization ────────────────────────────────────

def format_value(value, digits: int = 15) -> str:
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), f'.{digits}g')


def _json_value(value, digits):
    if value is None or isinstance(value, (int, np.integer)):
        return None if value is None else int(value)
    return float(format_value(value, digits))


def _significant_digits() -> int:
    return int(_settings_conf().get('SIGNIFICANT_DIGITS', 15))


def render_table(fh, fmt: str, columns: Sequence[str], rows: Sequence[dict]) -> None:
    digits = _significant_digits()
    if fmt == Format.JSON:
        data = [{c: _json_value(r.get(c), digits) for c in columns} for r in rows]
        fh.write(json.dumps(data, indent=2) + '\n')
        return
    writer = csv.writer(fh, lineterminator='\n')
    writer.writerow(columns)
    for r in rows:
        writer.writerow([format_value(r.get(c), digits) for c in columns])


def write_atomic(path: str, render: Callable[[object], None]) -> None:
    """Write to a temporary sibling, then rename; nothing is left behind on failure."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix='.sweep-', suffix='.tmp')
    try:
        with os.fdopen(fd, 'w', encoding='utf-8', newline='') as fh:
            render(fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def write_table(path: str, fmt: str, columns: Sequence[str], rows: Sequence[dict]) -> None:
    write_atomic(path, lambda fh: render_table(fh, fmt, columns, rows))


def _parse_cell(column, text):
    if text == '':
        return None
    return int(text) if column == 'state' else float(text)


def load_table(path: str) -> List[dict]:
    if path.endswith('.json'):
        with open(path, encoding='utf-8') as fh:
            return json.load(fh)
    with open(path, encoding='utf-8', newline='') as fh:
        return [{k: _parse_cell(k, v) for k, v in r.items()} for r in csv.DictReader(fh)]


def normalized_rows(columns: Sequence[str], rows: Sequence[dict]) -> List[dict]:
    digits = _significant_digits()
    return [{c: _json_value(r.get(c), digits) for c in columns} for r in rows]


def compare_baseline(columns: Sequence[str], rows: Sequence[dict], baseline_path: str,
                     significant_digits: int = 12) -> dict:
    """DeepDiff of the new rows against a previous table; empty when they agree."""
    from deepdiff import DeepDiff
    expected = load_table(baseline_path)
    diff = DeepDiff(expected, normalized_rows(columns, rows),
                    significant_digits=significant_digits,
                    ignore_numeric_type_changes=True)
    if diff:
        logger.warning(f'[Sweep] baseline {baseline_path} differs: {str(diff)[:500]}')
    return diff.to_dict() if diff else {}


# ── Derivatives and extrema ──────────────────────────

@dataclass
class DerivativeReport:
    beta_grid: np.ndarray
    d_measure_x: np.ndarray
    d_measure_p: np.ndarray
    d_measure_total: np.ndarray
    extrema: List[Tuple[float, str, str]] = field(default_factory=list)   # (β, kind, curve)
    trichotomy: List[str] = field(default_factory=list)

    def rows(self) -> List[dict]:
        return [
            {'beta': float(b), 'd_x': float(dx), 'd_p': float(dp), 'd_total': float(dt), 'regime': reg}
            for b, dx, dp, dt, reg in zip(self.beta_grid, self.d_measure_x, self.d_measure_p,
                                          self.d_measure_total, self.trichotomy)
        ]


def find_extrema(beta_grid: Sequence[float], values: Sequence[float],
                 flat_tol: float = 1e-7) -> List[Tuple[float, str]]:
    """Sign changes of dv/dβ; changes where the slope is flat noise are skipped."""
    beta = np.asarray(beta_grid, dtype=float)
    v = np.asarray(values, dtype=float)
    slope = np.gradient(v, beta)
    floor = flat_tol * (np.abs(slope).max() or 1.0)
    steep = np.nonzero(np.abs(slope) >= floor)[0]
    found = []
    for i, j in zip(steep, steep[1:]):
        window = v[i:j + 1]
        if slope[i] > 0 > slope[j]:
            found.append((float(beta[i + int(np.argmax(window))]), 'max'))
        elif slope[i] < 0 < slope[j]:
            found.append((float(beta[i + int(np.argmin(window))]), 'min'))
    return found


def derivative_report(beta_grid: Sequence[float], values_x: Sequence[float],
                      values_p: Sequence[float], values_total: Sequence[float]) -> DerivativeReport:
    beta = np.asarray(beta_grid, dtype=float)
    if len(beta) < MIN_DERIVATIVE_POINTS:
        raise GridTooCoarse(f'derivatives need >= {MIN_DERIVATIVE_POINTS} β points, got {len(beta)}',
                            points=len(beta))
    d_x = np.gradient(np.asarray(values_x, dtype=float), beta, edge_order=1)
    d_p = np.gradient(np.asarray(values_p, dtype=float), beta, edge_order=1)
    d_t = np.gradient(np.asarray(values_total, dtype=float), beta, edge_order=1)

    extrema = []
    for curve, d in (('x', d_x), ('p', d_p), ('total', d_t)):
        extrema.extend((b, kind, curve) for b, kind in find_extrema(beta, d))
    extrema.sort()
    return DerivativeReport(beta_grid=beta, d_measure_x=d_x, d_measure_p=d_p, d_measure_total=d_t,
                            extrema=extrema, trichotomy=entropy.trichotomy(d_x, d_p))


def require_derivative_grid(spec: SweepSpec) -> None:
    points = len(spec.beta_grid())
    if points < MIN_DERIVATIVE_POINTS:
        raise GridTooCoarse(f'derivatives need >= {MIN_DERIVATIVE_POINTS} β points, got {points}',
                            points=points)


def run_derivatives(spec: SweepSpec, measure: str, state: int,
                    alpha: Optional[float] = None, result: Optional[SweepResult] = None) -> DerivativeReport:
    if measure not in ('fisher', 'shannon', 'onicescu', 'os', 'sigma'):
        raise InvalidParameters(f'no x/p split for measure {measure!r}', field='measure')
    require_derivative_grid(spec)
    if result is None:
        result = run_sweep(replace(spec, measures=(measure,), output_path=None))
    alpha = spec.alpha_values[0] if alpha is None else alpha
    x_col, p_col, t_col = MEASURE_COLUMNS[measure]
    beta, vx = result.series(alpha, state, x_col)
    _, vp = result.series(alpha, state, p_col)
    _, vt = result.series(alpha, state, t_col)
    return derivative_report(beta, vx, vp, vt)


def reduced_beta(alpha: float, beta: float) -> float:
    """β of the α = 1 potential with the same eigenfunctions up to a change of length scale."""
    return scaled(PotentialSpec(alpha, beta), 1.0).beta


def merge_report(result: SweepResult, pairs: Sequence[Tuple[int, int]], column: str,
                 tol: Optional[float] = None, run: Optional[int] = None) -> List[dict]:
    """
    Merge point and plateau value of ``column`` for each state pair and α.

    ``reduced_merge_beta`` puts merges found at different α on the α = 1 axis;
    scale-free columns (net measures, Shannon totals) depend on α and β only
    through it.
    """
    report = []
    for alpha in result.spec.alpha_values:
        for a, b in pairs:
            beta, va = result.series(alpha, a, column)
            _, vb = result.series(alpha, b, column)
            merge = entropy.merge_point(beta, va, vb, tol, run)
            report.append({
                'alpha':   alpha,
                'pair':    f'{a}-{b}',
                'measure': column,
                'merge_beta': merge,
                'reduced_merge_beta': None if merge is None else reduced_beta(alpha, merge),
                'plateau':    entropy.plateau_value(beta, va, vb, tol, run),
            })
    return report


EXTREMA_BETA_STOP = 20.0
EXTREMA_STATES = (0, 1, 2, 3)


def report_extrema_table(alpha_values: Sequence[float], beta_step: Optional[float] = None,
                         beta_stop: float = EXTREMA_BETA_STOP, basis_size: Optional[int] = None,
                         workers: Optional[int] = None) -> List[dict]:
    """Extremum positions of the Onicescu energies E_x and E_p per (α, state)."""
    spec = SweepSpec.from_sources(flag_values={
        'alpha_values': tuple(alpha_values), 'beta_start': 0.0, 'beta_stop': beta_stop,
        'beta_step': beta_step, 'states': EXTREMA_STATES, 'measures': ('onicescu',),
        'basis_size': basis_size, 'workers': workers,
    })
    if spec.beta_step > 0.25 + 1e-12:
        raise GridTooCoarse(f'extrema table needs beta_step <= 0.25, got {spec.beta_step}',
                            beta_step=spec.beta_step)
    result = run_sweep(spec)
    table = []
    for alpha in spec.alpha_values:
        for n in spec.states:
            beta, ex = result.series(alpha, n, 'onicescu_x')
            _, ep = result.series(alpha, n, 'onicescu_p')
            table.append({
                'alpha': alpha,
                'state': n,
                'onicescu_x_extrema': find_extrema(beta, ex),
                'onicescu_p_extrema': find_extrema(beta, ep),
            })
    return table
