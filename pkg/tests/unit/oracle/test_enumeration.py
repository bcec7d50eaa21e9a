from dataclasses import replace
from unittest import TestCase

import mock

from contregime.dgp.canonical import bin3, cens3, ou1
from contregime.dgp.hazards import DiscreteHazard
from contregime.errors import ResourceError, UnsupportedError
from contregime.oracle import enumeration
from contregime.regimes import make_regime
from contregime.timegrid import make_partition


class TestEnumerateExact(TestCase):

    def setUp(self):
        self.spec = bin3()
        self.decisions = self.spec.fine_grid

    def value(self, variant, method="backward", spec=None, **params):
        spec = spec or self.spec
        return enumeration.enumerate_exact(spec, make_regime(variant,
                                                             **params),
                                           spec.fine_grid, method=method)

    def test_canonical_values(self):
        self.assertAlmostEqual(0.7085, self.value("always_treat"), places=12)
        self.assertAlmostEqual(0.2915, self.value("never_treat"), places=12)
        self.assertAlmostEqual(0.5, self.value("null"), places=12)

    def test_censoring_plays_no_part(self):
        self.assertAlmostEqual(0.7085, self.value("always_treat",
                                                  spec=cens3()), places=12)

    def test_paths_agree_with_backward(self):
        for variant, params in (("always_treat", {}), ("never_treat", {}),
                                ("null", {}),
                                ("deterministic_dynamic", {}),
                                ("incremental", {"odds_multiplier": 2.0}),
                                ("stochastic_prespecified",
                                 {"intercept": 0.3, "covariate": 0.4})):
            self.assertAlmostEqual(
                self.value(variant, "backward", **params),
                self.value(variant, "paths", **params), places=12,
                msg=variant)

    def test_terminal_events(self):
        spec = replace(self.spec, terminal=DiscreteHazard(0.1, 0.1))
        for variant in ("always_treat", "null"):
            self.assertAlmostEqual(self.value(variant, "backward", spec=spec),
                                   self.value(variant, "paths", spec=spec),
                                   places=12)
        self.assertNotAlmostEqual(0.7085, self.value("always_treat",
                                                     spec=spec))

    def test_coarse_decisions(self):
        g = make_regime("always_treat")
        coarse = make_partition(3.0, 1)
        backward = enumeration.enumerate_exact(self.spec, g, coarse)
        paths = enumeration.enumerate_exact(self.spec, g, coarse,
                                            method="paths")
        self.assertAlmostEqual(backward, paths, places=12)
        self.assertAlmostEqual(0.7085, backward, places=12)

    def test_count_paths(self):
        self.assertEqual(16, enumeration.count_paths(
            self.spec, make_regime("always_treat"), self.decisions))
        self.assertEqual(128, enumeration.count_paths(
            self.spec, make_regime("null"), self.decisions))

    def test_budget(self):
        self.assertRaises(ResourceError, enumeration.enumerate_exact,
                          self.spec, make_regime("null"), self.decisions,
                          budget=100)

    def test_budget_checked_before_work(self):
        with mock.patch.object(enumeration, "_backward") as backward:
            self.assertRaises(ResourceError, enumeration.enumerate_exact,
                              self.spec, make_regime("null"),
                              self.decisions, budget=1)
        backward.assert_not_called()

    def test_continuous_unsupported(self):
        spec = ou1(16)
        self.assertRaises(UnsupportedError, enumeration.enumerate_exact,
                          spec, make_regime("null"), spec.fine_grid)

    def test_unknown_method(self):
        self.assertRaises(UnsupportedError, enumeration.enumerate_exact,
                          self.spec, make_regime("null"), self.decisions,
                          method="lattice")
