"""
β-derivatives of a measure for one state, with extrema, x/p regime and merge points
Run: python manage.py derive --alpha 1 --beta-stop 10 --measure shannon --state 0 --pairs 0-1
"""
import json

from apps.core.sweep import (merge_report, require_derivative_grid, run_derivatives, run_sweep,
                             write_atomic)

from ._common import DoubleWellCommand, add_sweep_arguments, pair_list, sweep_spec_from_options


class Command(DoubleWellCommand):
    help = 'Central-difference d/dβ of a measure, its extrema and pair merge points'

    def add_arguments(self, parser):
        add_sweep_arguments(parser)
        parser.add_argument('--measure', default='shannon',
                            choices=['fisher', 'shannon', 'onicescu', 'os', 'sigma'])
        parser.add_argument('--state', type=int, default=0)
        parser.add_argument('--pairs', type=pair_list, default=(),
                            help='state pairs for merge reports, e.g. 0-1,2-3')

    def run(self, **options):
        measure, state = options['measure'], options['state']
        pairs = pair_list(options['pairs']) if isinstance(options['pairs'], str) else options['pairs']
        states = sorted({state, *(n for pair in pairs for n in pair)})
        spec = sweep_spec_from_options(options, measures=(measure,), states=tuple(states),
                                       output_path=None)
        require_derivative_grid(spec)
        result = run_sweep(spec)

        total_column = {'fisher': 'fisher_net', 'shannon': 'shannon_total', 'onicescu': 'onicescu_net',
                        'os': 'os_net', 'sigma': 'sigma_product'}[measure]
        reports = []
        for alpha in spec.alpha_values:
            report = run_derivatives(spec, measure, state, alpha=alpha, result=result)
            reports.append({
                'alpha':       alpha,
                'state':       state,
                'measure':     measure,
                'derivatives': report.rows(),
                'extrema':     [{'beta': b, 'kind': k, 'curve': c} for b, k, c in report.extrema],
            })
        data = {'reports': reports, 'merges': merge_report(result, pairs, total_column)}

        if options.get('output_path'):
            write_atomic(options['output_path'], lambda fh: json.dump(data, fh, indent=2))
            self.stderr.write(f'derivative report → {options["output_path"]}')
        else:
            self.emit_json(data)
