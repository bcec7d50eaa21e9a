from unittest import TestCase

import numpy as np

from contregime.dgp.canonical import bin3, ou1
from contregime.errors import InvalidArgumentError, PositivityError
from contregime.regimes import make_regime
from contregime.regimes.dependent import IncrementalRegime, ShiftRegime, \
    ThresholdRegime
from contregime.timegrid import HistoryView


class TestShiftRegime(TestCase):

    def setUp(self):
        self.spec = ou1(16)

    def test_ratio_at_mean(self):
        # propensity mean at l = 0 is 0, sd 0.3
        g = ShiftRegime(delta=0.5)
        ratio = g.density_ratio(HistoryView.from_state(0.0), 0.0, self.spec)
        self.assertAlmostEqual(np.exp(-0.5 ** 2 / (2 * 0.3 ** 2)), ratio)

    def test_zero_shift_is_null(self):
        g = ShiftRegime(delta=0.0)
        np.testing.assert_array_equal(
            np.ones(3), g.ratio(np.zeros(3), np.array([-1.0, 0.0, 2.0]),
                                self.spec))

    def test_quadrature_shifts_mean(self):
        g = ShiftRegime(delta=0.5)
        value = g.integrate(lambda l, a: a, np.array([0.0, 1.0]), self.spec)
        np.testing.assert_allclose([0.5, 1.0], value)

    def test_binary_rejected(self):
        self.assertRaises(InvalidArgumentError, ShiftRegime(0.5).validate,
                          bin3())

    def test_draw_adds_delta(self):
        g = ShiftRegime(delta=1.0)
        rng_a, rng_b = np.random.default_rng(4), np.random.default_rng(4)
        natural = self.spec.draw_treatment(np.zeros(5), rng_a)
        np.testing.assert_allclose(natural + 1.0,
                                   g.draw(np.zeros(5), self.spec, rng_b))


class TestThresholdRegime(TestCase):

    def test_binary_inactive(self):
        g = ThresholdRegime(theta=0.0)
        np.testing.assert_array_equal(np.ones(2), g.ratio(
            np.zeros(2), np.array([0.0, 1.0]), bin3()))

    def test_binary_always_treat(self):
        g = ThresholdRegime(theta=1.0)
        g.validate(bin3())
        np.testing.assert_allclose([0.0, 1.25], g.ratio(
            np.ones(2), np.array([0.0, 1.0]), bin3()))

    def test_binary_invalid_theta(self):
        self.assertRaises(InvalidArgumentError,
                          ThresholdRegime(theta=0.5).validate, bin3())

    def test_continuous_atom(self):
        g = ThresholdRegime(theta=0.0)
        self.assertRaises(PositivityError, g.ratio, np.zeros(1),
                          np.zeros(1), ou1(16))
        # E[max(A, 0)] for A ~ N(0, 0.3^2)
        value = g.integrate(lambda l, a: a, np.zeros(1), ou1(16))
        self.assertAlmostEqual(0.3 / np.sqrt(2 * np.pi), value[0], places=6)

    def test_infinite_threshold_is_null(self):
        g = ThresholdRegime()
        np.testing.assert_array_equal(np.ones(1), g.ratio(
            np.zeros(1), np.array([0.3]), ou1(16)))


class TestIncrementalRegime(TestCase):

    def test_shifted_probability(self):
        g = IncrementalRegime(odds_multiplier=2.0)
        spec = bin3().misspecify("propensity_drop_covariate")
        q = g.shifted_probability(np.zeros(1), spec)
        self.assertAlmostEqual(2.0 / 3.0, q[0])

    def test_ratio_averages_to_one(self):
        g = IncrementalRegime(odds_multiplier=3.0)
        spec = bin3()
        a = np.array([0.0, 1.0])
        for l in (0.0, 1.0):
            ls = np.full(2, l)
            self.assertAlmostEqual(1.0, np.sum(
                spec.treatment_pdf(ls, a) * g.ratio(ls, a, spec)))

    def test_unit_multiplier_is_null(self):
        g = IncrementalRegime(odds_multiplier=1.0)
        np.testing.assert_array_equal(np.ones(2), g.ratio(
            np.ones(2), np.array([0.0, 1.0]), bin3()))
        np.testing.assert_allclose(
            bin3().treatment_probability(np.array([0.0, 1.0])),
            g.shifted_probability(np.array([0.0, 1.0]), bin3()))

    def test_invalid(self):
        self.assertRaises(InvalidArgumentError, IncrementalRegime, 0.0)
        self.assertRaises(InvalidArgumentError,
                          IncrementalRegime(2.0).validate, ou1(16))


class TestRegimeParsing(TestCase):

    def test_parse(self):
        from contregime.regimes import parse_regime, regime_from_config
        self.assertEqual(ShiftRegime(0.5), parse_regime("shift(delta=0.5)"))
        self.assertEqual(ShiftRegime(0.5),
                         regime_from_config({"variant": "shift",
                                             "delta": 0.5}))
        self.assertEqual(1.0, parse_regime("always_treat").value)
        self.assertEqual("shift(delta=0.5)", str(ShiftRegime(0.5)))

    def test_parse_errors(self):
        from contregime.regimes import parse_regime, regime_from_config
        for text in ("shift(0.5)", "warp", "shift(delta=x)",
                     "always_treat(value=1)", "shift(width=1)"):
            self.assertRaises(InvalidArgumentError, parse_regime, text)
        self.assertRaises(InvalidArgumentError, regime_from_config,
                          {"delta": 0.5})
        self.assertRaises(InvalidArgumentError, make_regime, "incremental",
                          odds_multiplier=-1)
