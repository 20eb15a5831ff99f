"""
Self-test: numerically integrated oscillator measures against the closed forms
Run: python manage.py qho_check
"""
from django.core.management.base import CommandError

from apps.core.entropy import measure_set
from apps.core.qho_oracle import MAX_STATE, Kind, agrees, qho_measure
from apps.core.quadrature import QuadratureConfig
from apps.core.wavefunction import oscillator_state

from ._common import NUMERIC_FAILURE, DoubleWellCommand, float_list

DEFAULT_GAMMAS = (0.25, 0.5, 1.0, 2.0, 4.0)


class Command(DoubleWellCommand):
    help = 'Check the quadrature pipeline against the oscillator closed forms (n = 0..3)'

    def add_arguments(self, parser):
        parser.add_argument('--gammas', type=float_list, default=DEFAULT_GAMMAS)

    def run(self, **options):
        gammas = options['gammas']
        if isinstance(gammas, str):
            gammas = float_list(gammas)
        qconf = QuadratureConfig.from_settings()

        checked, failures = 0, []
        for gamma in gammas:
            for n in range(MAX_STATE + 1):
                values = measure_set(oscillator_state(n, gamma), qconf).to_dict()
                for kind in Kind.values:
                    expected = qho_measure(kind, gamma, n)
                    checked += 1
                    if not agrees(kind, n, expected, values[kind]):
                        failures.append(f'γ={gamma:g} n={n} {kind}: '
                                        f'got {values[kind]:.12g}, expected {expected:.12g}')

        for line in failures:
            self.stdout.write(self.style.ERROR(f'✗ {line}'))
        if failures:
            raise CommandError(f'{len(failures)}/{checked} oscillator checks failed',
                               returncode=NUMERIC_FAILURE)
        self.stdout.write(self.style.SUCCESS(f'✓ {checked} oscillator checks passed'))
