from unittest import TestCase

import numpy as np

from contregime.dgp.canonical import bin3
from contregime.dgp.simulation import simulate_observed
from contregime.errors import InvalidArgumentError
from contregime.estimators import DecisionPanel, NuisanceSet, build_H, \
    build_Q, ee_residual_gcomp, ee_residual_ipw, gcomp_battery, ipw_battery
from contregime.estimators.residuals import ResidualCheck, \
    covariate_indicator
from contregime.regimes import make_regime


class TestResidualCheck(TestCase):

    def test_passed(self):
        self.assertTrue(ResidualCheck("gcomp", "unit", 0.1, 0.05, True).passed)
        self.assertFalse(ResidualCheck("gcomp", "unit", 0.2, 0.05,
                                       True).passed)
        self.assertTrue(ResidualCheck("gcomp", "perturbed_H", 0.2, 0.05,
                                      False).passed)
        self.assertEqual(0.0, ResidualCheck("ipw", "unit", 0.0, 0.0,
                                            True).z)
        self.assertEqual(np.inf, ResidualCheck("ipw", "unit", 0.1, 0.0,
                                               True).z)


class TestBatteries(TestCase):

    @classmethod
    def setUpClass(cls):
        cls.spec = bin3()
        cls.decisions = cls.spec.fine_grid
        cls.g = make_regime("always_treat")
        cls.cohort = simulate_observed(cls.spec, cls.decisions, 10000, 31)
        cls.panel = DecisionPanel(cls.cohort, cls.decisions)
        nuis = NuisanceSet.exact(cls.spec)
        cls.H = build_H(nuis, cls.g, cls.decisions)
        cls.Q = build_Q(nuis, cls.g, cls.decisions, cls.panel)
        cls.H_wrong = build_H(nuis.with_knob(cls.spec,
                                             "transition_shift(0.15)"),
                              cls.g, cls.decisions)

    def test_gcomp_residual_constant_weights(self):
        result = ee_residual_gcomp(self.H, 1.0, self.g, self.decisions,
                                   self.cohort)
        self.assertEqual("ee_residual_gcomp", result.estimator)
        self.assertLess(abs(result.point), 4 * result.se)

    def test_gcomp_residual_detects_wrong_H(self):
        result = ee_residual_gcomp(self.H_wrong, 1.0, self.g, self.decisions,
                                   self.cohort)
        self.assertGreater(abs(result.point), 4 * result.se)

    def test_ipw_residual_any_H(self):
        for H in (self.H, self.H_wrong):
            result = ee_residual_ipw(H, self.Q, self.g, self.decisions,
                                     self.panel)
            self.assertLess(abs(result.point), 4 * result.se)

    def test_weight_shape_checked(self):
        self.assertRaises(InvalidArgumentError, ee_residual_gcomp, self.H,
                          np.ones((3, 3)), self.g, self.decisions,
                          self.panel)

    def test_gcomp_battery(self):
        checks = gcomp_battery(self.H, self.Q, self.g, self.decisions,
                               self.panel, threshold=4.0)
        self.assertEqual(["unit", "ipw", "indicator", "perturbed_H"],
                         [c.case for c in checks])
        self.assertTrue(all(c.passed for c in checks),
                        [(c.case, c.z) for c in checks])

    def test_ipw_battery(self):
        checks = ipw_battery(self.Q, self.H, self.H_wrong, self.g,
                             self.decisions, self.panel, threshold=4.0)
        self.assertEqual(["unit", "misspecified_H", "exact_H", "halved_Q"],
                         [c.case for c in checks])
        self.assertTrue(all(c.passed for c in checks),
                        [(c.case, c.z) for c in checks])

    def test_covariate_indicator(self):
        W = covariate_indicator(self.panel)
        self.assertEqual((10000, 4), W.shape)
        np.testing.assert_array_equal(np.zeros((10000, 2)), W[:, :2])
        np.testing.assert_array_equal(W[:, 2], W[:, 3])
