import csv
import json
import os
import tempfile
from io import StringIO
from unittest import mock

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase


def _run(*args):
    out, err = StringIO(), StringIO()
    call_command(*args, stdout=out, stderr=err)
    return out.getvalue(), err.getvalue()


class SolveCommandTests(SimpleTestCase):

    def test_json_report(self):
        out, _ = _run('solve', '--alpha', '1', '--beta', '5', '--states', '0,1', '--basis-size', '60',
                      '--eigenvalues', '4')
        data = json.loads(out)
        self.assertEqual(data['potential']['alpha'], 1.0)
        self.assertEqual(len(data['spectrum']['eigenvalues']), 4)
        self.assertEqual([s['parity'] for s in data['states']], ['even', 'odd'])
        first = data['states'][0]
        self.assertIn('shannon_total', first['measures'])
        self.assertGreater(first['tunneling'], 0.0)
        self.assertGreater(first['phase_area'], 0.0)

    def test_usage_error_exits_one(self):
        with self.assertRaises(CommandError) as ctx:
            _run('solve', '--beta', '5')
        self.assertEqual(ctx.exception.returncode, 1)

    def test_invalid_parameters_exit_two(self):
        with self.assertRaises(CommandError) as ctx:
            _run('solve', '--alpha', '-1', '--beta', '5')
        self.assertEqual(ctx.exception.returncode, 2)
        self.assertIn('invalid_parameters', str(ctx.exception))

    def test_state_outside_basis_exits_two(self):
        with self.assertRaises(CommandError) as ctx:
            _run('solve', '--alpha', '1', '--beta', '1', '--basis-size', '10', '--states', '12')
        self.assertEqual(ctx.exception.returncode, 2)


class SweepCommandTests(SimpleTestCase):

    ARGS = ('sweep', '--alpha', '1', '--beta-stop', '0.5', '--beta-step', '0.5', '--states', '0',
            '--basis-size', '30', '--measures', 'shannon,energy', '--workers', '1')

    def test_csv_to_stdout(self):
        out, _ = _run(*self.ARGS)
        rows = list(csv.reader(StringIO(out)))
        self.assertEqual(rows[0], ['alpha', 'beta', 'state', 'shannon_x', 'shannon_p', 'shannon_total',
                                   'energy_shifted', 'energy_unshifted'])
        self.assertEqual(len(rows), 3)
        self.assertEqual(rows[2][:3], ['1', '0.5', '0'])

    def test_baseline_round_trip(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'base.json')
            _run(*self.ARGS, '--format', 'json', '--output', path)
            self.assertEqual(len(json.load(open(path, encoding='utf-8'))), 2)
            _, err = _run(*self.ARGS, '--baseline', path)
            self.assertIn('baseline matches', err)

    def test_progress_on_verbose_runs(self):
        _, err = _run(*self.ARGS, '--verbosity', '2')
        self.assertIn('[2/2] points', err)
        _, quiet = _run(*self.ARGS)
        self.assertNotIn('points', quiet)

    def test_unknown_measure_exits_two(self):
        with self.assertRaises(CommandError) as ctx:
            _run('sweep', '--measures', 'entropy')
        self.assertEqual(ctx.exception.returncode, 2)

    def test_config_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'sweep.conf')
            with open(path, 'w', encoding='utf-8') as fh:
                fh.write('alpha_values = 1\nbeta_stop = 0\nstates = 0\nbasis_size = 30\n'
                         'measures = energy\nworkers = 1\n')
            out, _ = _run('sweep', '--config', path, '--states', '0,1')
        rows = list(csv.reader(StringIO(out)))
        self.assertEqual([r[2] for r in rows[1:]], ['0', '1'])


class OtherCommandTests(SimpleTestCase):

    def test_qho_check(self):
        out, _ = _run('qho_check', '--gammas', '0.5')
        self.assertIn('48 oscillator checks passed', out)

    def test_cho(self):
        out, _ = _run('cho', '--xc', '1', '--states', '2', '--no-shannon')
        data = json.loads(out)
        self.assertEqual(len(data), 1)
        self.assertAlmostEqual(data[0]['eigenvalues'][0], 1.298459832032, delta=5e-9)
        self.assertNotIn('shannon_x', data[0])

    def test_phase_contour(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'contour.csv')
            out, _ = _run('phase', '--alpha', '1', '--beta', '5', '--state', '0', '--contour', path,
                          '--samples', '11', '--basis-size', '60')
            with open(path, encoding='utf-8') as fh:
                rows = list(csv.reader(fh))
        self.assertEqual(rows[0], ['x', 'p_plus', 'p_minus', 'lobe_id'])
        self.assertEqual(len(rows), 23)
        summary = json.loads(out)
        self.assertEqual(summary['lobes'], 2)

    def test_phase_contour_needs_beta(self):
        with self.assertRaises(CommandError) as ctx:
            _run('phase', '--contour', 'unused.csv')
        self.assertEqual(ctx.exception.returncode, 1)

    def test_derive_rejects_coarse_grid(self):
        with self.assertRaises(CommandError) as ctx:
            _run('derive', '--alpha', '1', '--beta-stop', '1', '--beta-step', '0.5')
        self.assertEqual(ctx.exception.returncode, 2)
        self.assertIn('grid_too_coarse', str(ctx.exception))

    def test_derive_report(self):
        out, _ = _run('derive', '--alpha', '1', '--beta-stop', '2', '--beta-step', '0.5',
                      '--measure', 'shannon', '--state', '0', '--pairs', '0-1', '--basis-size', '30')
        data = json.loads(out)
        self.assertEqual(len(data['reports'][0]['derivatives']), 5)
        self.assertEqual(data['merges'][0]['pair'], '0-1')

    def test_extrema_table(self):
        out, _ = _run('extrema', '--alpha', '1', '--beta-stop', '1', '--basis-size', '30',
                      '--json', '--workers', '2')
        table = json.loads(out)
        self.assertEqual([row['state'] for row in table], [0, 1, 2, 3])

    def test_extrema_rejects_coarse_step(self):
        with self.assertRaises(CommandError) as ctx:
            _run('extrema', '--alpha', '1', '--beta-step', '0.5', '--beta-stop', '1')
        self.assertEqual(ctx.exception.returncode, 2)

    def test_derive_output_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'derive.json')
            _, err = _run('derive', '--alpha', '1', '--beta-stop', '2', '--beta-step', '0.5',
                          '--state', '0', '--basis-size', '30', '--output', path)
            with open(path, encoding='utf-8') as fh:
                data = json.load(fh)
            self.assertEqual(os.listdir(tmp), ['derive.json'])
        self.assertEqual(len(data['reports']), 1)
        self.assertIn('derive.json', err)

    def test_derive_failed_write_leaves_nothing(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'derive.json')
            with mock.patch('apps.core.management.commands.derive.json.dump', side_effect=OSError('disk full')):
                with self.assertRaises(CommandError) as ctx:
                    _run('derive', '--alpha', '1', '--beta-stop', '2', '--beta-step', '0.5',
                         '--state', '0', '--basis-size', '30', '--output', path)
            self.assertEqual(os.listdir(tmp), [])
        self.assertEqual(ctx.exception.returncode, 2)
