"""
Single (α, β) solve: spectrum plus the measures of the requested states
Run: python manage.py solve --alpha 1 --beta 5 --states 0,1
"""
from apps.core import entropy, semiclassics
from apps.core.exceptions import UnsupportedState
from apps.core.oscillator_basis import SolverConfig, diagonalize
from apps.core.potential import PotentialSpec
from apps.core.quadrature import QuadratureConfig

from ._common import DoubleWellCommand, int_list


class Command(DoubleWellCommand):
    help = 'Diagonalize one double well and print its spectrum and information measures'

    def add_arguments(self, parser):
        parser.add_argument('--alpha', type=float, required=True)
        parser.add_argument('--beta', type=float, required=True)
        parser.add_argument('--states', type=int_list, default=(0, 1))
        parser.add_argument('--basis-size', type=int)
        parser.add_argument('--gamma-mode', choices=['full', 'even', 'odd', 'manual'])
        parser.add_argument('--gamma', type=float, help='basis scale for --gamma-mode manual')
        parser.add_argument('--n-exp', type=int, default=2)
        parser.add_argument('--m-exp', type=int, default=1)
        parser.add_argument('--unshifted', action='store_true', help='leave β²/(4α) out of V')
        parser.add_argument('--eigenvalues', type=int, default=10, help='how many eigenvalues to print')

    def run(self, **options):
        spec = PotentialSpec(options['alpha'], options['beta'], options['n_exp'], options['m_exp'],
                             include_shift=not options['unshifted'])
        solver = SolverConfig.from_settings(basis_size=options['basis_size'],
                                            gamma_mode=options['gamma_mode'],
                                            gamma=options['gamma'])
        qconf = QuadratureConfig.from_settings()
        spectrum = diagonalize(spec, solver)

        wanted = options['states']
        if isinstance(wanted, str):
            wanted = int_list(wanted)
        if max(wanted) >= spectrum.size:
            raise UnsupportedState(f'state {max(wanted)} outside basis of {spectrum.size}')

        states = []
        for n in wanted:
            measures = entropy.measure_set(spectrum.state(n), qconf)
            states.append({
                'state':      n,
                'parity':     str(spectrum.parities[n]),
                'energy':     float(spectrum.eigenvalues[n]),
                'measures':   measures.to_dict(),
                **semiclassics.tunneling_probability(spec, spectrum, n, qconf).to_dict(),
                'phase_area': semiclassics.phase_area(spec, spectrum, n, qconf),
            })
        self.emit_json({
            'potential': spec.to_dict(),
            'spectrum':  spectrum.to_dict(states=options['eigenvalues']),
            'states':    states,
        })
