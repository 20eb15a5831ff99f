"""
Semiclassical phase space: one contour (--contour) or areas over a β grid
Run: python manage.py phase --alpha 1 --beta 5 --state 0 --contour c.csv
     python manage.py phase --alpha 1 --beta-stop 10 --states 0,1 --output areas.csv
"""
from django.core.management.base import CommandError

from apps.core.oscillator_basis import SolverConfig, diagonalize
from apps.core.potential import PotentialSpec
from apps.core.semiclassics import (contour_rows, phase_area, phase_contour,
                                    tunneling_probability)
from apps.core.sweep import render_table, run_sweep, write_table

from ._common import DoubleWellCommand, add_sweep_arguments, sweep_spec_from_options

CONTOUR_COLUMNS = ('x', 'p_plus', 'p_minus', 'lobe_id')


class Command(DoubleWellCommand):
    help = 'Phase-space contour of one state, or phase areas and tunneling over a β grid'

    def add_arguments(self, parser):
        add_sweep_arguments(parser)
        parser.add_argument('--beta', type=float, help='single β for --contour')
        parser.add_argument('--state', type=int, default=0)
        parser.add_argument('--contour', help='write the contour of --state at --beta to this CSV')
        parser.add_argument('--samples', type=int, default=401)

    def run(self, **options):
        if options.get('contour'):
            return self._contour(options)

        spec = sweep_spec_from_options(options, measures=('tunneling', 'area'))
        result = run_sweep(spec)
        if not spec.output_path:
            render_table(self.stdout, spec.format, result.columns, result.rows)

    def _contour(self, options):
        if options.get('beta') is None:
            raise CommandError('--contour needs --beta')
        alphas = options.get('alpha_values') or (1.0,)
        if isinstance(alphas, str):
            alphas = tuple(float(a) for a in alphas.split(','))
        spec = PotentialSpec(float(alphas[0]), options['beta'])
        spectrum = diagonalize(spec, SolverConfig.from_settings(basis_size=options.get('basis_size')))
        n = options['state']
        contour = phase_contour(spec, spectrum, n, samples=options['samples'])

        rows = [dict(zip(CONTOUR_COLUMNS, r)) for r in contour_rows(contour)]
        write_table(options['contour'], 'csv', CONTOUR_COLUMNS, rows)
        self.emit_json({
            'alpha':      spec.alpha,
            'beta':       spec.beta,
            'state':      n,
            'energy':     contour.energy,
            'lobes':      contour.lobes,
            'phase_area': phase_area(spec, spectrum, n),
            **tunneling_probability(spec, spectrum, n).to_dict(),
            'contour':    options['contour'],
        })
