"""
Extremum positions of the Onicescu energies E_x, E_p for states 0..3
Run: python manage.py extrema --alpha 0.5,1,2
"""
from apps.core.sweep import report_extrema_table

from ._common import DoubleWellCommand, float_list


def _fmt(extrema):
    return ','.join(f'{b:g}{kind[:3]}' for b, kind in extrema) or '-'


class Command(DoubleWellCommand):
    help = 'Tabulate β positions of the extrema of E_x and E_p'

    def add_arguments(self, parser):
        parser.add_argument('--alpha', type=float_list, default=(0.5, 1.0, 2.0))
        parser.add_argument('--beta-step', type=float)
        parser.add_argument('--beta-stop', type=float, default=20.0)
        parser.add_argument('--basis-size', type=int)
        parser.add_argument('--workers', type=int)
        parser.add_argument('--json', action='store_true', help='print the table as JSON')

    def run(self, **options):
        alphas = options['alpha']
        if isinstance(alphas, str):
            alphas = float_list(alphas)
        table = report_extrema_table(alphas, beta_step=options['beta_step'],
                                     beta_stop=options['beta_stop'],
                                     basis_size=options['basis_size'], workers=options['workers'])
        if options['json']:
            self.emit_json(table)
            return
        self.stdout.write(f'{"alpha":>6} {"state":>5}  {"E_x extrema":<28} E_p extrema')
        for row in table:
            self.stdout.write(f'{row["alpha"]:>6g} {row["state"]:>5}  '
                              f'{_fmt(row["onicescu_x_extrema"]):<28} {_fmt(row["onicescu_p_extrema"])}')
