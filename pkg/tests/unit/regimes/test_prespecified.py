from unittest import TestCase

import numpy as np
from scipy.stats import norm

from contregime.dgp.canonical import bin3, ou1
from contregime.errors import DomainError, InvalidArgumentError, \
    PositivityError
from contregime.regimes import make_regime
from contregime.regimes.prespecified import DeterministicDynamicRegime, \
    NullRegime, PointMassRegime, StochasticRegime
from contregime.timegrid import HistoryView

L = np.array([0.0, 1.0, 0.0, 1.0])
A = np.array([0.0, 0.0, 1.0, 1.0])


class TestNullRegime(TestCase):

    def test_ratio_is_one(self):
        np.testing.assert_array_equal(np.ones(4),
                                      NullRegime().ratio(L, A, bin3()))

    def test_quadrature_is_propensity(self):
        nodes, weights = NullRegime().quadrature(np.array([1.0]), bin3())
        np.testing.assert_array_equal([[0.0, 1.0]], nodes)
        np.testing.assert_allclose([[0.2, 0.8]], weights)

    def test_draw_uses_propensity(self):
        rng = np.random.default_rng(0)
        draws = NullRegime().draw(np.zeros(20000), bin3(), rng)
        self.assertAlmostEqual(0.2, draws.mean(), delta=0.02)


class TestPointMassRegime(TestCase):

    def test_always_treat_ratio(self):
        g = make_regime("always_treat")
        h = HistoryView.from_state(1.0)
        self.assertAlmostEqual(1.25, g.density_ratio(h, 1.0, bin3()))
        self.assertEqual(0.0, g.density_ratio(h, 0.0, bin3()))
        self.assertAlmostEqual(5.0, g.density_ratio(
            HistoryView.from_state(0.0), 1.0, bin3()))

    def test_never_treat(self):
        g = make_regime("never_treat")
        np.testing.assert_allclose([1.0 / 0.8, 1.0 / 0.2, 0.0, 0.0],
                                   g.ratio(L, A, bin3()))

    def test_rule(self):
        g = PointMassRegime(rule=lambda l: 1.0 - l)
        np.testing.assert_array_equal([1.0, 0.0], g.target(np.array([0.0,
                                                                     1.0])))

    def test_value_or_rule(self):
        self.assertRaises(InvalidArgumentError, PointMassRegime)
        self.assertRaises(InvalidArgumentError, PointMassRegime, 1.0,
                          lambda l: l)

    def test_non_binary_value(self):
        g = PointMassRegime(value=0.5)
        self.assertRaises(DomainError, g.validate, bin3())
        self.assertRaises(DomainError, g.ratio, L, A, bin3())

    def test_continuous_point_mass_has_no_density(self):
        g = PointMassRegime(value=0.0)
        self.assertRaises(PositivityError, g.ratio, np.zeros(2),
                          np.zeros(2), ou1(16))
        self.assertRaises(PositivityError, g.density_ratio,
                          HistoryView.from_state(0.0), 0.0, ou1(16))

    def test_continuous_point_mass_still_integrates(self):
        g = PointMassRegime(value=0.7)
        value = g.integrate(lambda l, a: a * 2.0, np.zeros(3), ou1(16))
        np.testing.assert_allclose(np.full(3, 1.4), value)

    def test_sample_regime(self):
        g = make_regime("always_treat")
        rng = np.random.default_rng(1)
        self.assertEqual(1.0, g.sample_regime(HistoryView.from_state(0.0),
                                              bin3(), rng))
        self.assertRaises(InvalidArgumentError, g.sample_regime,
                          HistoryView.from_state(0.0, 1.0), bin3(), rng)


class TestDeterministicDynamic(TestCase):

    def test_target_follows_covariate(self):
        g = DeterministicDynamicRegime()
        np.testing.assert_array_equal([0.0, 1.0, 0.0, 1.0],
                                      g.target(L))
        np.testing.assert_allclose([1.0 / 0.8, 0.0, 0.0, 1.0 / 0.8],
                                   g.ratio(L, A, bin3()))

    def test_levels_must_be_binary(self):
        g = DeterministicDynamicRegime(high=2.0)
        self.assertRaises(DomainError, g.validate, bin3())


class TestStochasticRegime(TestCase):

    def test_binary_ratio(self):
        g = StochasticRegime(intercept=0.5)
        np.testing.assert_allclose([0.5 / 0.8, 0.5 / 0.2, 0.5 / 0.2,
                                    0.5 / 0.8],
                                   g.ratio(L, A, bin3()))

    def test_continuous_ratio(self):
        spec = ou1(16)
        g = StochasticRegime(intercept=0.0, sd=0.3)
        l = np.array([0.4])
        a = np.array([0.1])
        expected = norm.pdf(0.1, 0.0, 0.3) / norm.pdf(0.1, 0.2, 0.3)
        self.assertAlmostEqual(expected, g.ratio(l, a, spec)[0])

    def test_validate(self):
        self.assertRaises(InvalidArgumentError,
                          StochasticRegime(sd=0.3).validate, bin3())
        self.assertRaises(InvalidArgumentError,
                          StochasticRegime().validate, ou1(16))

    def test_ratio_averages_to_one(self):
        spec = bin3()
        g = StochasticRegime(intercept=0.3, covariate=0.4)
        for l in (0.0, 1.0):
            ls = np.full(2, l)
            a = np.array([0.0, 1.0])
            mean = (spec.treatment_pdf(ls, a) * g.ratio(ls, a, spec)).sum()
            self.assertAlmostEqual(1.0, mean)
