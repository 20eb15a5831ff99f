"""
β-sweep over one or more α values
Run: python manage.py sweep --alpha 1 --beta-stop 10 --states 0,1 --measures shannon --output s.csv
"""

from django.core.management.base import CommandError

from apps.core.sweep import compare_baseline, render_table, run_sweep

from ._common import NUMERIC_FAILURE, DoubleWellCommand, add_sweep_arguments, sweep_spec_from_options


class Command(DoubleWellCommand):
    help = 'Tabulate information measures over a β grid (CSV or JSON)'

    def add_arguments(self, parser):
        add_sweep_arguments(parser)
        parser.add_argument('--baseline', help='previous CSV/JSON table to compare against')

    def run(self, **options):
        spec = sweep_spec_from_options(options)
        result = run_sweep(spec, progress=self._progress if options.get('verbosity', 1) >= 2 else None)

        if not spec.output_path:
            render_table(self.stdout, spec.format, result.columns, result.rows)
        else:
            self.stderr.write(f'{len(result.rows)} rows → {spec.output_path}')

        if options.get('baseline'):
            diff = compare_baseline(result.columns, result.rows, options['baseline'])
            if diff:
                self.emit_json({'baseline': options['baseline'], 'diff': diff})
                raise CommandError('sweep differs from baseline', returncode=NUMERIC_FAILURE)
            self.stderr.write(self.style.SUCCESS('baseline matches'))

    def _progress(self, done, total):
        # about ten lines per sweep
        step = max(total // 10, 1)
        if done == total or done % step == 0:
            self.stderr.write(f'[{done}/{total}] points')
