from unittest import TestCase

import numpy as np

from contregime.dgp.canonical import bin3, cens3, ou1
from contregime.dgp.simulation import simulate_observed
from contregime.errors import InvalidArgumentError
from contregime.estimators import DecisionPanel, NuisanceSet, build_H, \
    gcomp_estimate, make_nuisance
from contregime.estimators import value_process
from contregime.estimators.value_process import ExactValueProcess, \
    UserValueProcess
from contregime.oracle import enumerate_exact, simulate_counterfactual
from contregime.regimes import make_regime
from contregime.timegrid import make_partition


class TestExactValueProcess(TestCase):

    def test_canonical_values(self):
        spec = bin3()
        for variant, expected in (("always_treat", 0.7085),
                                  ("never_treat", 0.2915), ("null", 0.5)):
            H = build_H(NuisanceSet.exact(spec), make_regime(variant),
                        spec.fine_grid)
            self.assertEqual("exact-recursion", H.source)
            self.assertAlmostEqual(expected, H.exact_baseline_value(),
                                   places=12)

    def test_matches_enumeration(self):
        spec = cens3()
        for variant, params in (("deterministic_dynamic", {}),
                                ("incremental", {"odds_multiplier": 0.5}),
                                ("threshold", {"theta": 1.0})):
            g = make_regime(variant, **params)
            H = build_H(NuisanceSet.exact(spec), g, spec.fine_grid)
            self.assertAlmostEqual(enumerate_exact(spec, g, spec.fine_grid),
                                   H.exact_baseline_value(), places=12)

    def test_last_stage(self):
        spec = bin3()
        H = build_H(NuisanceSet.exact(spec), make_regime("always_treat"),
                    spec.fine_grid)
        l = np.array([0.0, 0.0, 1.0, 1.0])
        a = np.array([0.0, 1.0, 0.0, 1.0])
        np.testing.assert_allclose(spec.transition_probability(l, a),
                                   H.H(2, l, a))
        np.testing.assert_allclose([0.5, 0.8], H.V(2, np.array([0.0, 1.0])))

    def test_coarse_decisions(self):
        spec = bin3()
        H = build_H(NuisanceSet.exact(spec), make_regime("always_treat"),
                    make_partition(3.0, 1))
        self.assertEqual(1, H.K)
        self.assertAlmostEqual(0.7085, H.exact_baseline_value(), places=12)

    def test_diffusion_against_simulation(self):
        spec = ou1(32)
        decisions = make_partition(1.0, 4)
        g = make_regime("shift", delta=0.5)
        H = ExactValueProcess(spec, g, spec, decisions)
        sample = simulate_counterfactual(spec, g, decisions, 20000, 6)
        self.assertLess(abs(H.exact_baseline_value() - sample.mean),
                        4 * sample.se)

    def test_threshold_on_diffusion_against_simulation(self):
        spec = ou1()
        decisions = make_partition(1.0, 4)
        g = make_regime("threshold", theta=0.3)
        H = ExactValueProcess(spec, g, spec, decisions)
        sample = simulate_counterfactual(spec, g, decisions, 400000, 21,
                                         n_jobs=4)
        self.assertLess(abs(H.exact_baseline_value() - sample.mean),
                        3 * sample.se)

    def test_observed(self):
        spec = bin3()
        cohort = simulate_observed(spec, spec.fine_grid, 50, 2)
        H = build_H(NuisanceSet.exact(spec), make_regime("null"),
                    spec.fine_grid)
        H_obs, V_obs = H.observed(DecisionPanel(cohort, spec.fine_grid))
        self.assertEqual((50, 3), H_obs.shape)
        self.assertEqual((50, 4), V_obs.shape)
        np.testing.assert_array_equal(cohort.outcome, V_obs[:, 3])


class TestTableSplines(TestCase):

    def test_column_function_is_exact_on_cubics(self):
        states = np.linspace(-3.0, 3.0, 121)
        actions = np.array([-1.0, 0.0, 2.0])
        LL, AA = np.meshgrid(states, actions, indexing="ij")
        read = value_process._column_function(states, LL ** 3 + AA * LL)
        l = LL[..., np.newaxis] + np.array([-0.013, 0.0, 0.021])
        a = AA[..., np.newaxis]
        np.testing.assert_allclose(l ** 3 + a * l, read(l, a), atol=1e-9)

    def test_two_point_support_is_linear(self):
        support = np.array([0.0, 1.0])
        table = np.array([[0.2, 0.5], [0.5, 0.8]])
        read = value_process._column_function(support, table)
        np.testing.assert_allclose(table, read(support[:, np.newaxis],
                                               np.zeros((2, 2))))
        surface = value_process._table_function(support, support, table)
        np.testing.assert_allclose([0.2, 0.8, 0.5],
                                   surface(np.array([0.0, 1.0, 0.5]),
                                           np.array([0.0, 1.0, 0.5])))
        line = value_process._line_function(support, np.array([0.5, 0.8]))
        np.testing.assert_allclose([0.65], line(np.array([0.5])))


class TestFittedValueProcess(TestCase):

    def test_null_regime_reproduces_outcome_mean(self):
        spec = bin3()
        cohort = simulate_observed(spec, spec.fine_grid, 3000, 12)
        panel = DecisionPanel(cohort, spec.fine_grid)
        nuis = make_nuisance(spec, "fitted", panel)
        H = build_H(nuis, make_regime("null"), spec.fine_grid, cohort)
        self.assertEqual("fitted-regression", H.source)
        estimate = gcomp_estimate(H, cohort)
        self.assertAlmostEqual(cohort.outcome_mean()[0], estimate.point,
                               places=10)
        self.assertEqual("baseline", estimate.diagnostics["se_method"])

    def test_needs_cohort(self):
        spec = bin3()
        cohort = simulate_observed(spec, spec.fine_grid, 100, 1)
        nuis = make_nuisance(spec, "fitted",
                             DecisionPanel(cohort, spec.fine_grid))
        self.assertRaises(InvalidArgumentError, build_H, nuis,
                          make_regime("null"), spec.fine_grid)


class TestUserValueProcess(TestCase):

    def test_constant(self):
        spec = bin3()
        H = UserValueProcess.constant(2.0, make_regime("null"), spec,
                                      spec.fine_grid)
        np.testing.assert_array_equal([2.0, 2.0],
                                      H.H(0, np.zeros(2), np.ones(2)))
        np.testing.assert_allclose([2.0, 2.0], H.V(1, np.array([0.0, 1.0])))
        self.assertIsNone(H.exact_baseline_value())

    def test_shifted(self):
        spec = bin3()
        H = UserValueProcess.constant(0.0, make_regime("null"), spec,
                                      spec.fine_grid).shifted(1, 0.05)
        np.testing.assert_allclose([0.05], H.H(1, np.zeros(1), np.ones(1)))
        np.testing.assert_allclose([0.0], H.H(0, np.zeros(1), np.ones(1)))
        self.assertRaises(InvalidArgumentError, H.shifted, 3, 0.1)
