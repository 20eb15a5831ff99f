"""
Confined oscillator in a box of half-width x_c
Run: python manage.py cho --xc 0.5,1,2,5 --states 4
"""
from apps.core.cho import BoxConfig, cho_shannon_x, cho_solve
from apps.core.quadrature import QuadratureConfig

from ._common import DoubleWellCommand, float_list


class Command(DoubleWellCommand):
    help = 'Energies and position Shannon entropy of the confined oscillator'

    def add_arguments(self, parser):
        parser.add_argument('--xc', type=float_list, default=(0.5, 1.0, 2.0, 5.0))
        parser.add_argument('--states', type=int, default=4, help='number of lowest states')
        parser.add_argument('--basis-size', type=int)
        parser.add_argument('--no-shannon', action='store_true')

    def run(self, **options):
        xcs = options['xc']
        if isinstance(xcs, str):
            xcs = float_list(xcs)
        qconf = QuadratureConfig.from_settings()
        out = []
        for xc in xcs:
            config = BoxConfig.from_settings(xc, basis_size=options['basis_size'])
            spectrum = cho_solve(config)
            entry = spectrum.to_dict(states=options['states'])
            if not options['no_shannon']:
                entry['shannon_x'] = [cho_shannon_x(config, n, qconf, spectrum=spectrum)
                                      for n in range(min(options['states'], config.basis_size))]
            out.append(entry)
        self.emit_json(out)
