"""
Shared plumbing for the double-well management commands

Exit codes: 0 success, 1 usage error, 2 numerical failure.
"""
import json
import logging

from django.core.management.base import BaseCommand, CommandError

from apps.core.exceptions import DoubleWellError

VERBOSITY_LEVELS = {0: logging.ERROR, 1: logging.WARNING, 2: logging.INFO, 3: logging.DEBUG}

NUMERIC_FAILURE = 2


def float_list(text: str):
    return tuple(float(v) for v in str(text).split(',') if v.strip())


def int_list(text: str):
    return tuple(int(v) for v in str(text).split(',') if v.strip())


def pair_list(text: str):
    """'0-1,2-3' → ((0, 1), (2, 3))"""
    pairs = []
    for item in str(text).split(','):
        item = item.strip()
        if not item:
            continue
        a, _, b = item.partition('-')
        pairs.append((int(a), int(b)))
    return tuple(pairs)


class DoubleWellCommand(BaseCommand):
    """Subclasses implement ``run``; library errors become exit code 2."""

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        # argparse errors raise CommandError (exit 1) instead of exiting with 2
        parser.called_from_command_line = False
        return parser

    def handle(self, *args, **options):
        logging.getLogger('apps').setLevel(VERBOSITY_LEVELS.get(options.get('verbosity', 1), logging.DEBUG))
        try:
            return self.run(**options)
        except DoubleWellError as e:
            raise CommandError(f'{e.code}: {e.message}', returncode=NUMERIC_FAILURE) from e
        except OSError as e:
            raise CommandError(f'io_error: {e}', returncode=NUMERIC_FAILURE) from e

    def run(self, **options):
        raise NotImplementedError

    def emit_json(self, data):
        self.stdout.write(json.dumps(data, indent=2, default=str))


def add_sweep_arguments(parser, measures_default=None):
    parser.add_argument('--config', help='flat key = value sweep file')
    parser.add_argument('--alpha', type=float_list, dest='alpha_values', help='comma-separated α values')
    parser.add_argument('--beta-start', type=float)
    parser.add_argument('--beta-stop', type=float)
    parser.add_argument('--beta-step', type=float)
    parser.add_argument('--states', type=int_list, help='comma-separated state indices')
    parser.add_argument('--measures', default=measures_default,
                        help='comma-separated subset of fisher,shannon,onicescu,os,sigma,tunneling,area,energy')
    parser.add_argument('--output', dest='output_path')
    parser.add_argument('--format', choices=['csv', 'json'])
    parser.add_argument('--basis-size', type=int)
    parser.add_argument('--gamma-mode', choices=['full', 'even', 'odd'])
    parser.add_argument('--workers', type=int)


SWEEP_FLAG_KEYS = ('alpha_values', 'beta_start', 'beta_stop', 'beta_step', 'states', 'measures',
                   'output_path', 'format', 'basis_size', 'gamma_mode', 'workers')


def sweep_spec_from_options(options, **forced):
    from apps.core.sweep import SweepSpec, parse_config_file
    file_values = parse_config_file(options['config']) if options.get('config') else {}
    flags = {k: options.get(k) for k in SWEEP_FLAG_KEYS}
    flags.update(forced)
    return SweepSpec.from_sources(file_values, flags)
