"""Regimes that transform or reweight the natural treatment draw.

Each composes with the observed propensity: the natural value is drawn from
the treatment law first and then shifted, floored or re-tilted, so the regime
law changes whenever the propensity does.
"""
from dataclasses import dataclass

import numpy as np

from contregime.errors import InvalidArgumentError, PositivityError
from contregime.quadrature import binary_nodes, censored_gaussian_nodes, \
    gaussian_nodes
from contregime.regimes.base_regime import BaseRegime, checked_ratio, \
    natural_nodes


def _require_continuous(regime, propensity):
    if propensity.binary_treatment:
        raise InvalidArgumentError("%s needs a continuous treatment"
                                   % regime.variant)


@dataclass(frozen=True)
class ShiftRegime(BaseRegime):
    """Modified treatment policy A + delta"""

    delta: float = 0.0

    variant = "shift"
    depends_on_actual = True

    def validate(self, propensity):
        _require_continuous(self, propensity)

    def draw(self, l, propensity, rng, stage=None):
        return propensity.draw_treatment(l, rng, stage) + self.delta

    def ratio(self, l, a, propensity, stage=None):
        a = np.asarray(a, dtype=float)
        if self.delta == 0.0:
            return np.ones(a.shape)
        return checked_ratio(propensity.treatment_pdf(l, a - self.delta,
                                                      stage),
                             propensity.treatment_pdf(l, a, stage), self)

    def quadrature(self, l, propensity, stage=None):
        mean, sd = propensity.treatment_mean_sd(l, stage)
        return gaussian_nodes(mean + self.delta, sd)


@dataclass(frozen=True)
class ThresholdRegime(BaseRegime):
    """Raise the natural treatment to at least ``theta``.

    On a continuous treatment a finite threshold leaves an atom at theta, so
    the regime has no density against the propensity. On a binary treatment
    only theta <= 0 (no effect) and theta == 1 (always treat) stay inside
    the support.
    """

    theta: float = -np.inf

    variant = "threshold"
    depends_on_actual = True

    def validate(self, propensity):
        if propensity.binary_treatment and \
                not (self.theta <= 0.0 or self.theta == 1.0):
            raise InvalidArgumentError("threshold %r moves a binary treatment "
                                       "outside {0, 1}" % (self.theta,))

    def _inactive(self, propensity):
        if propensity.binary_treatment:
            return self.theta <= 0.0
        return self.theta == -np.inf

    def draw(self, l, propensity, rng, stage=None):
        natural = propensity.draw_treatment(l, rng, stage)
        if self._inactive(propensity):
            return natural
        return np.maximum(natural, self.theta)

    def ratio(self, l, a, propensity, stage=None):
        a = np.asarray(a, dtype=float)
        if self._inactive(propensity):
            return np.ones(a.shape)
        if not propensity.binary_treatment:
            raise PositivityError("threshold(%r) puts an atom on a continuous "
                                  "treatment" % (self.theta,))
        on_regime = (a == 1.0).astype(float)
        return checked_ratio(on_regime,
                             propensity.treatment_probability(l, stage), self)

    def quadrature(self, l, propensity, stage=None):
        if self._inactive(propensity):
            return natural_nodes(propensity, l, stage)
        if propensity.binary_treatment:
            return binary_nodes(np.ones(np.shape(l)))
        mean, sd = propensity.treatment_mean_sd(l, stage)
        return censored_gaussian_nodes(mean, sd, self.theta)


@dataclass(frozen=True)
class IncrementalRegime(BaseRegime):
    """Multiply the odds of treatment by ``odds_multiplier``.

    q = delta p / (delta p + 1 - p) for propensity p.
    """

    odds_multiplier: float = 1.0

    variant = "incremental"
    depends_on_actual = True

    def __post_init__(self):
        if not self.odds_multiplier > 0:
            raise InvalidArgumentError("odds_multiplier must be positive, "
                                       "got %r" % (self.odds_multiplier,))

    def validate(self, propensity):
        if not propensity.binary_treatment:
            raise InvalidArgumentError("incremental needs a binary treatment")

    def shifted_probability(self, l, propensity, stage=None):
        p = propensity.treatment_probability(l, stage)
        if self.odds_multiplier == 1.0:
            return p
        tilted = self.odds_multiplier * p
        return tilted / (tilted + 1.0 - p)

    def draw(self, l, propensity, rng, stage=None):
        l = np.asarray(l, dtype=float)
        q = self.shifted_probability(l, propensity, stage)
        return (rng.random(l.shape[0]) < q).astype(float)

    def ratio(self, l, a, propensity, stage=None):
        a = np.asarray(a, dtype=float)
        if self.odds_multiplier == 1.0:
            return np.ones(a.shape)
        p = propensity.treatment_probability(l, stage)
        q = self.shifted_probability(l, propensity, stage)
        return checked_ratio(np.where(a == 1.0, q, 1.0 - q),
                             np.where(a == 1.0, p, 1.0 - p), self)

    def quadrature(self, l, propensity, stage=None):
        return binary_nodes(self.shifted_probability(l, propensity, stage))
