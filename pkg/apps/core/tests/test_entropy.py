import math

import numpy as np
from django.test import SimpleTestCase

from apps.core.entropy import (BALANCED, BBM_BOUND, MOMENTUM_DOMINATED, POSITION_DOMINATED,
                               MeasureSet, fisher, measure_set, merge_point, plateau_value,
                               shannon, trichotomy, uncertainties)
from apps.core.exceptions import InvariantViolation
from apps.core.oscillator_basis import SolverConfig, diagonalize
from apps.core.potential import PotentialSpec, scaled
from apps.core.qho_oracle import MAX_STATE, Kind, agrees, qho_measure
from apps.core.quadrature import QuadratureConfig
from apps.core.wavefunction import Space, oscillator_state


class OscillatorMeasureTests(SimpleTestCase):

    def setUp(self):
        self.config = QuadratureConfig()

    def test_closed_forms(self):
        for gamma in (0.5, 2.0):
            for n in range(MAX_STATE + 1):
                values = measure_set(oscillator_state(n, gamma), self.config).to_dict()
                for kind in Kind.values:
                    expected = qho_measure(kind, gamma, n)
                    self.assertTrue(agrees(kind, n, expected, values[kind]),
                                    f'γ={gamma} n={n} {kind}: {values[kind]} vs {expected}')

    def test_fisher_values(self):
        gamma = 1.3
        self.assertAlmostEqual(fisher(oscillator_state(0, gamma), Space.POSITION, self.config),
                               4 * gamma, delta=1e-8)
        self.assertAlmostEqual(fisher(oscillator_state(3, gamma), Space.MOMENTUM, self.config),
                               7 / gamma, delta=1e-8)

    def test_fisher_through_nodes(self):
        # I_x = 4γ(2n + 1); odd states vanish at x = 0
        for n in (1, 3):
            value = fisher(oscillator_state(n, 0.7), Space.POSITION, self.config)
            self.assertAlmostEqual(value, 4 * 0.7 * (2 * n + 1), delta=1e-8)

    def test_uncertainty_products(self):
        for n, product in ((0, 0.5), (1, 1.5)):
            sigma_x, sigma_p = uncertainties(oscillator_state(n, 0.9), self.config)
            self.assertAlmostEqual(sigma_x * sigma_p, product, delta=1e-9)

    def test_shannon_scaling(self):
        low = shannon(oscillator_state(2, 0.5), Space.POSITION, self.config)
        high = shannon(oscillator_state(2, 2.0), Space.POSITION, self.config)
        self.assertAlmostEqual(low - high, 0.5 * math.log(4.0), delta=1e-9)


class DoubleWellMeasureTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.config = QuadratureConfig()
        cls.spectrum = diagonalize(PotentialSpec(1.0, 10.0), SolverConfig(basis_size=100))
        cls.measures = [measure_set(cls.spectrum.state(n), cls.config) for n in range(4)]

    def test_fisher_matches_momentum_variance(self):
        for measures in self.measures:
            self.assertAlmostEqual(measures.fisher_x, 4 * measures.sigma_p ** 2,
                                   delta=1e-6 * measures.fisher_x)
            self.assertAlmostEqual(measures.fisher_p, 4 * measures.sigma_x ** 2,
                                   delta=1e-6 * measures.fisher_p)

    def test_lower_bounds(self):
        for measures in self.measures:
            self.assertGreaterEqual(measures.shannon_total, BBM_BOUND - 1e-9)
            self.assertGreaterEqual(measures.sigma_product, 0.5 - 1e-9)
            self.assertGreaterEqual(measures.fisher_net, 16 * 0.25 - 1e-9)

    def test_os_factorizes(self):
        for m in self.measures:
            self.assertAlmostEqual(m.os_net, m.os_x * m.os_p, delta=1e-10 * m.os_net)
            self.assertAlmostEqual(m.os_net, math.exp(2 * m.shannon_total / 3) * m.onicescu_net,
                                   delta=1e-10 * m.os_net)

    def test_ground_pair_plateau(self):
        # two separated Gaussians: S → ln 4π, E → (3/4)/(2π), OS → (4π)^(2/3)·E
        s0, s1 = self.measures[0].shannon_total, self.measures[1].shannon_total
        self.assertAlmostEqual(s0, s1, delta=0.01)
        self.assertAlmostEqual(0.5 * (s0 + s1), 2.53, delta=0.01)
        e0, e1 = self.measures[0].onicescu_net, self.measures[1].onicescu_net
        self.assertAlmostEqual(0.5 * (e0 + e1), 0.1195, delta=0.002)
        o0, o1 = self.measures[0].os_net, self.measures[1].os_net
        self.assertAlmostEqual(0.5 * (o0 + o1), 0.6465, delta=0.005)

    def test_position_spread_grows_with_barrier(self):
        spreads = []
        for beta in range(11):
            spectrum = diagonalize(PotentialSpec(1.0, float(beta)), SolverConfig(basis_size=60))
            spreads.append(uncertainties(spectrum.state(0), self.config)[0])
        self.assertTrue(np.all(np.diff(spreads) > 0))


class PairPlateauTests(SimpleTestCase):

    def setUp(self):
        self.config = QuadratureConfig()

    def _pair(self, spec, pair):
        spectrum = diagonalize(spec, SolverConfig(basis_size=100))
        return [measure_set(spectrum.state(n), self.config) for n in pair]

    def test_ground_pair_before_it_merges(self):
        m0, m1 = self._pair(PotentialSpec(1.0, 6.0), (0, 1))
        self.assertAlmostEqual(m0.onicescu_net, 0.1259, delta=5e-4)
        self.assertAlmostEqual(m1.onicescu_net, 0.1155, delta=5e-4)

    def test_second_pair(self):
        # separated first excited Gaussians: S → S₁ + 2 ln 2 − 1 ≈ 3.07, E → (27/64)/(2π)
        m2, m3 = self._pair(PotentialSpec(1.0, 20.0), (2, 3))
        self.assertAlmostEqual(0.5 * (m2.shannon_total + m3.shannon_total), 3.08, delta=0.02)
        self.assertAlmostEqual(0.5 * (m2.onicescu_net + m3.onicescu_net), 0.0667, delta=0.002)
        self.assertAlmostEqual(0.5 * (m2.os_net + m3.os_net), 0.525, delta=0.01)

    def test_net_measures_independent_of_alpha(self):
        reference = self._pair(PotentialSpec(1.0, 10.0), (0, 1))
        for alpha in (0.5, 2.0):
            others = self._pair(scaled(PotentialSpec(1.0, 10.0), alpha), (0, 1))
            for ref, other in zip(reference, others):
                for name in ('shannon_total', 'fisher_net', 'onicescu_net', 'os_net', 'sigma_product'):
                    self.assertAlmostEqual(getattr(other, name), getattr(ref, name),
                                           delta=1e-8 * abs(getattr(ref, name)),
                                           msg=f'α={alpha} {name}')
                # the x/p split is not scale free
                self.assertNotAlmostEqual(other.shannon_x, ref.shannon_x, places=3)


class MeasureSetTests(SimpleTestCase):

    def _build(self):
        return MeasureSet.build(fisher_x=4.0, fisher_p=1.0, shannon_x=1.2, shannon_p=1.3,
                                onicescu_x=0.4, onicescu_p=0.3, sigma_x=0.5, sigma_p=1.0)

    def test_build_and_to_dict(self):
        data = self._build().to_dict()
        self.assertEqual(data['fisher_net'], 4.0)
        self.assertAlmostEqual(data['shannon_total'], 2.5, places=14)
        self.assertAlmostEqual(data['onicescu_net'], 0.12, places=14)
        self.assertEqual(data['sigma_product'], 0.5)
        self.assertEqual(len(data), 15)

    def test_consistent_set_passes(self):
        self._build().check_invariants()

    def test_broken_sum_raises(self):
        good = self._build().to_dict()
        del good['sigma_product']
        good['shannon_total'] += 0.1
        with self.assertRaises(InvariantViolation) as ctx:
            MeasureSet(**good).check_invariants()
        self.assertIn('shannon_total', ctx.exception.message)

    def test_below_entropy_bound_raises(self):
        measures = MeasureSet.build(fisher_x=4.0, fisher_p=1.0, shannon_x=0.5, shannon_p=0.5,
                                    onicescu_x=0.4, onicescu_p=0.3, sigma_x=0.5, sigma_p=1.0)
        with self.assertRaises(InvariantViolation):
            measures.check_invariants()


class BetaGridHelperTests(SimpleTestCase):

    def setUp(self):
        self.beta = np.arange(10, dtype=float)
        self.a = np.full(10, 2.0)
        self.b = self.a + np.array([0.5, 0.2, 5e-4, 1e-4, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0])

    def test_merge_point(self):
        self.assertEqual(merge_point(self.beta, self.a, self.b, tol=1e-3, run=3), 2.0)
        self.assertEqual(merge_point(self.beta, self.a, self.b, tol=1e-5, run=3), 4.0)
        self.assertIsNone(merge_point(self.beta, self.a, self.a + 1.0, tol=1e-3, run=3))

    def test_short_run_is_not_a_merge(self):
        b = self.a + np.array([0.5, 0.0, 0.0, 0.5, 0.5, 0.0, 0.0, 0.0, 0.5, 0.5])
        self.assertEqual(merge_point(self.beta, self.a, b, tol=1e-3, run=3), 5.0)

    def test_plateau_value(self):
        value = plateau_value(self.beta, self.a, self.b, tol=1e-3, run=3)
        expected = 2.0 + 0.5 * (5e-4 + 1e-4) / 8
        self.assertAlmostEqual(value, expected, places=12)
        self.assertIsNone(plateau_value(self.beta, self.a, self.a + 1.0, tol=1e-3, run=3))

    def test_trichotomy(self):
        labels = trichotomy([1.0, 2.0, 0.5, 0.0, -3.0], [1.0, 1.0, -2.0, 0.0, 3.0])
        self.assertEqual(labels, [BALANCED, POSITION_DOMINATED, MOMENTUM_DOMINATED,
                                  BALANCED, BALANCED])
