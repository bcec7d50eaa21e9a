from unittest import TestCase

import numpy as np

from contregime.dgp.canonical import bin3, cens3, ou1
from contregime.dgp.simulation import simulate_observed
from contregime.errors import InvalidArgumentError, NumericalError
from contregime.estimators import DecisionPanel, NuisanceSet, make_nuisance
from contregime.estimators import nuisance


class TestMakeNuisance(TestCase):

    def test_exact(self):
        spec = bin3()
        nuis = make_nuisance(spec, "exact")
        self.assertIs(spec, nuis.transition)
        self.assertEqual("exact", nuis.tag("propensity"))
        self.assertFalse(nuis.fitted_transition)
        self.assertEqual(2, nuis.degree)
        self.assertEqual(1, NuisanceSet.exact(ou1(16)).degree)

    def test_misspecified(self):
        spec = bin3()
        nuis = make_nuisance(spec, "misspec:transition_shift(0.15)")
        self.assertEqual("misspecified(transition_shift(0.15))",
                         nuis.tag("transition"))
        self.assertEqual("exact", nuis.tag("propensity"))
        self.assertAlmostEqual(0.35,
                               nuis.transition.params["trans_intercept"])
        self.assertIs(spec, nuis.propensity)

    def test_with_knob_component(self):
        spec = cens3()
        nuis = NuisanceSet.exact(spec).with_knob(spec, "censoring_ignore")
        np.testing.assert_array_equal(
            [0.0, 0.0], nuis.censoring.censoring_hazard(np.zeros(2),
                                                        np.ones(2)))
        self.assertEqual("misspecified(censoring_ignore)",
                         nuis.tag("censoring"))
        identity = NuisanceSet.exact(spec).with_knob(spec, "identity",
                                                     "propensity")
        self.assertIs(spec, identity.propensity)
        self.assertRaises(InvalidArgumentError,
                          NuisanceSet.exact(spec).with_knob, spec,
                          "censoring_ignore", "transition")
        self.assertRaises(InvalidArgumentError,
                          NuisanceSet.exact(spec).with_knob, spec,
                          "identity", "outcome")

    def test_errors(self):
        spec = bin3()
        self.assertRaises(InvalidArgumentError, make_nuisance, spec,
                          "fitted")
        self.assertRaises(InvalidArgumentError, make_nuisance, spec,
                          "estimated")
        self.assertRaises(InvalidArgumentError, make_nuisance, spec,
                          "misspec:bogus")


class TestFittedModels(TestCase):

    @classmethod
    def setUpClass(cls):
        cls.spec = cens3()
        cls.cohort = simulate_observed(cls.spec, cls.spec.fine_grid, 20000,
                                       4)
        cls.panel = DecisionPanel(cls.cohort, cls.spec.fine_grid)

    def test_fitted_set(self):
        nuis = make_nuisance(self.spec, "fitted", self.panel)
        self.assertTrue(nuis.fitted_transition)
        self.assertEqual("fitted", nuis.tag("censoring"))

    def test_binary_propensity(self):
        model = nuisance.FittedBinaryPropensity(self.panel)
        for stage in range(3):
            np.testing.assert_allclose(
                [0.2, 0.8],
                model.treatment_probability(np.array([0.0, 1.0]), stage),
                atol=0.03)
        self.assertRaises(InvalidArgumentError, model.treatment_probability,
                          np.zeros(1))

    def test_logit_propensity(self):
        model = nuisance.FittedBinaryPropensity(self.panel, link="logit")
        np.testing.assert_allclose(
            [0.2, 0.8], model.treatment_probability(np.array([0.0, 1.0]), 0),
            atol=0.03)

    def test_censoring_hazard(self):
        model = nuisance.FittedCensoring(self.cohort)
        np.testing.assert_allclose(
            np.full(4, 0.1),
            model.censoring_hazard(np.array([0.0, 0.0, 1.0, 1.0]),
                                   np.array([0.0, 1.0, 0.0, 1.0])),
            atol=0.02)

    def test_no_censoring_observed(self):
        spec = bin3()
        cohort = simulate_observed(spec, spec.fine_grid, 100, 4)
        model = nuisance.FittedCensoring(cohort)
        self.assertIsNone(model.model)
        np.testing.assert_array_equal(np.zeros(2), model.censoring_hazard(
            np.zeros(2), np.zeros(2)))

    def test_gaussian_propensity(self):
        spec = ou1(16)
        cohort = simulate_observed(spec, spec.fine_grid, 5000, 4)
        model = nuisance.FittedGaussianPropensity(
            DecisionPanel(cohort, spec.fine_grid))
        mean, sd = model.treatment_mean_sd(np.array([0.0]), 0)
        self.assertAlmostEqual(0.0, mean[0], delta=0.03)
        self.assertAlmostEqual(0.3, sd[0], delta=0.02)

    def test_constant_logit_target(self):
        self.assertRaises(NumericalError, nuisance._fit_probability,
                          np.zeros((5, 1)), np.ones(5), "logit", "test")
        self.assertRaises(NumericalError, nuisance._fit_probability,
                          np.zeros((0, 1)), np.zeros(0), "identity", "test")
