import math

import numpy as np
from django.test import SimpleTestCase

from apps.core.exceptions import InvalidParameters, UnsupportedState
from apps.core.oscillator_basis import SolverConfig, diagonalize
from apps.core.potential import PotentialSpec, evaluate
from apps.core.quadrature import QuadratureConfig
from apps.core.semiclassics import (contour_rows, phase_area, phase_contour, state_energy,
                                    tunneling_onset, tunneling_probability)


def _solve(alpha, beta, basis_size=100, include_shift=True):
    spec = PotentialSpec(alpha, beta, include_shift=include_shift)
    return spec, diagonalize(spec, SolverConfig(basis_size=basis_size))


class TunnelingTests(SimpleTestCase):

    def setUp(self):
        self.config = QuadratureConfig()

    def test_no_barrier_means_no_tunneling(self):
        spec, spectrum = _solve(1.0, 0.0, basis_size=60)
        result = tunneling_probability(spec, spectrum, 0, self.config)
        self.assertEqual(result.t_prob, 0.0)
        self.assertIsNone(result.inner_tp)

    def test_level_above_barrier(self):
        spec, spectrum = _solve(1.0, 1.0, basis_size=60)
        self.assertGreater(state_energy(spec, spectrum, 0), spec.h)
        self.assertEqual(tunneling_probability(spec, spectrum, 0, self.config).t_prob, 0.0)

    def test_probability_bounds_and_keys(self):
        spec, spectrum = _solve(1.0, 6.0)
        result = tunneling_probability(spec, spectrum, 0, self.config)
        self.assertGreater(result.t_prob, 0.0)
        self.assertLess(result.t_prob, 1.0)
        self.assertEqual(set(result.to_dict()), {'tunneling', 'inner_turning_point'})
        self.assertAlmostEqual(evaluate(spec, result.inner_tp), state_energy(spec, spectrum, 0),
                               delta=1e-9)

    def test_shift_convention_does_not_matter(self):
        shifted = tunneling_probability(*_solve(1.0, 6.0), 0, self.config)
        unshifted = tunneling_probability(*_solve(1.0, 6.0, include_shift=False), 0, self.config)
        self.assertAlmostEqual(shifted.t_prob, unshifted.t_prob, delta=1e-9)

    def test_deeper_wells_tunnel_less(self):
        values = []
        for beta in (6.0, 7.0, 8.0, 9.0, 10.0):
            values.append(tunneling_probability(*_solve(1.0, beta), 0, self.config).t_prob)
        self.assertTrue(np.all(np.diff(values) <= 0))

    def test_probability_rises_just_after_onset(self):
        # T grows while the inner turning points move out from x = 0
        expected = {2.0: 0.0, 2.25: 0.0755, 2.5: 0.2072, 2.75: 0.2567, 3.0: 0.279, 3.25: 0.2852}
        values = [tunneling_probability(*_solve(1.0, beta), 0, self.config).t_prob for beta in expected]
        for value, (beta, target) in zip(values, expected.items()):
            self.assertAlmostEqual(value, target, delta=1e-3, msg=f'β={beta}')
        self.assertTrue(np.all(np.diff(values) > 0))

    def test_state_outside_basis(self):
        spec, spectrum = _solve(1.0, 2.0, basis_size=20)
        with self.assertRaises(UnsupportedState):
            state_energy(spec, spectrum, 20)


class PhaseSpaceTests(SimpleTestCase):

    def setUp(self):
        self.config = QuadratureConfig()

    def test_single_lobe_without_barrier(self):
        spec, spectrum = _solve(1.0, 0.0, basis_size=60)
        contour = phase_contour(spec, spectrum, 0, samples=51)
        self.assertEqual(contour.lobes, 1)
        self.assertEqual(len(contour.samples), 102)

    def test_two_lobes_on_energy_shell(self):
        spec, spectrum = _solve(1.0, 5.0)
        contour = phase_contour(spec, spectrum, 0)
        self.assertEqual(contour.lobes, 2)
        self.assertEqual(contour.energy, state_energy(spec, spectrum, 0))
        for lobe in contour.branches:
            np.testing.assert_allclose(lobe.p ** 2 + evaluate(spec, lobe.x), contour.energy,
                                       atol=1e-9)
            self.assertTrue(np.all(lobe.p >= 0))

    def test_contour_rows(self):
        spec, spectrum = _solve(1.0, 5.0)
        rows = contour_rows(phase_contour(spec, spectrum, 1, samples=11))
        self.assertEqual(len(rows), 22)
        self.assertEqual({row[3] for row in rows}, {0, 1})
        self.assertTrue(all(row[2] == -row[1] for row in rows))

    def test_contour_needs_samples(self):
        spec, spectrum = _solve(1.0, 5.0, basis_size=40)
        with self.assertRaises(InvalidParameters):
            phase_contour(spec, spectrum, 0, samples=1)

    def test_lowest_pair_area_near_onset(self):
        # E₀ is still close to the barrier top at β = 5, so the pair has not coalesced
        spec, spectrum = _solve(1.0, 5.0)
        self.assertAlmostEqual(phase_area(spec, spectrum, 0, self.config), 1.484, delta=2e-3)
        self.assertAlmostEqual(phase_area(spec, spectrum, 1, self.config), 1.5728, delta=2e-3)

    def test_lowest_pair_area_plateau(self):
        spec, spectrum = _solve(1.0, 10.0)
        a0 = phase_area(spec, spectrum, 0, self.config)
        a1 = phase_area(spec, spectrum, 1, self.config)
        self.assertAlmostEqual(a0, 1.565, delta=0.02)
        self.assertAlmostEqual(a0, a1, delta=1e-3)

    def test_second_pair_area(self):
        spec, spectrum = _solve(1.0, 10.0)
        for n in (2, 3):
            self.assertAlmostEqual(phase_area(spec, spectrum, n, self.config), 1.5 * math.pi,
                                   delta=0.04)

    def test_single_well_area_is_half_orbit(self):
        spec, spectrum = _solve(1.0, 0.0, basis_size=60)
        # quartic x⁴: full orbit ∮ = 2π(n + ½) to leading order
        self.assertAlmostEqual(phase_area(spec, spectrum, 4, self.config), 0.5 * math.pi * 4.5,
                               delta=0.05)


class OnsetTests(SimpleTestCase):

    def test_onsets(self):
        config = SolverConfig(basis_size=100)
        self.assertAlmostEqual(tunneling_onset(1.0, 0, config), 2.21960, delta=1e-4)
        self.assertAlmostEqual(tunneling_onset(1.0, 1, config), 3.25118, delta=1e-4)

    def test_onset_follows_scaling(self):
        # β* ∝ α^(2/3)
        onset = tunneling_onset(8.0, 0, SolverConfig(basis_size=100), bracket=(4.0, 20.0))
        self.assertAlmostEqual(onset, 4 * 2.21960, delta=4e-4)

    def test_bracket_without_crossing(self):
        with self.assertRaises(InvalidParameters):
            tunneling_onset(1.0, 0, SolverConfig(basis_size=40), bracket=(0.0, 1.0))
