"""Regimes whose law does not read the actually observed treatment."""
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.stats import norm

from contregime.errors import DomainError, InvalidArgumentError, \
    PositivityError
from contregime.quadrature import binary_nodes, gaussian_nodes, point_nodes
from contregime.regimes.base_regime import BaseRegime, checked_ratio, \
    natural_nodes


@dataclass(frozen=True)
class NullRegime(BaseRegime):
    """G = P, the observed treatment law"""

    variant = "null"

    def draw(self, l, propensity, rng, stage=None):
        return propensity.draw_treatment(l, rng, stage)

    def ratio(self, l, a, propensity, stage=None):
        return np.ones(np.shape(a))

    def quadrature(self, l, propensity, stage=None):
        return natural_nodes(propensity, l, stage)


class DiracRegime(BaseRegime):
    """Dirac measure on the treatment returned by ``target``"""

    def target(self, l, stage=None):
        raise NotImplementedError

    def _binary_target(self, l, stage):
        target = self.target(l, stage)
        if not np.all((target == 0.0) | (target == 1.0)):
            raise DomainError("%s assigns a value outside {0, 1}" % self)
        return target

    def draw(self, l, propensity, rng, stage=None):
        if propensity.binary_treatment:
            return self._binary_target(l, stage)
        return self.target(l, stage)

    def ratio(self, l, a, propensity, stage=None):
        if not propensity.binary_treatment:
            raise PositivityError("%s is a point mass on a continuous "
                                  "treatment and has no density against the "
                                  "propensity" % self)
        target = self._binary_target(l, stage)
        on_regime = (np.asarray(a, dtype=float) == target).astype(float)
        return checked_ratio(on_regime,
                             propensity.treatment_pdf(l, target, stage), self)

    def quadrature(self, l, propensity, stage=None):
        if propensity.binary_treatment:
            return point_nodes(self._binary_target(l, stage))
        return point_nodes(self.target(l, stage))


@dataclass(frozen=True)
class PointMassRegime(DiracRegime):
    """Point mass on a treatment chosen from the history.

    Either a constant ``value`` or a ``rule`` mapping the current covariate
    array to treatment values.
    """

    value: Optional[float] = None
    rule: Optional[Callable] = None

    variant = "point_mass"

    def __post_init__(self):
        if (self.value is None) == (self.rule is None):
            raise InvalidArgumentError("point_mass needs exactly one of "
                                       "value or rule")

    def target(self, l, stage=None):
        l = np.asarray(l, dtype=float)
        if self.rule is None:
            return np.full(l.shape, float(self.value))
        return np.broadcast_to(np.asarray(self.rule(l), dtype=float),
                               l.shape).copy()

    def validate(self, propensity):
        if propensity.binary_treatment and self.value is not None and \
                self.value not in (0.0, 1.0):
            raise DomainError("point mass at %r on a binary treatment"
                              % (self.value,))


@dataclass(frozen=True)
class DeterministicDynamicRegime(DiracRegime):
    """Treat with ``high`` while the covariate exceeds ``cut``, else ``low``"""

    cut: float = 0.5
    high: float = 1.0
    low: float = 0.0

    variant = "deterministic_dynamic"

    def target(self, l, stage=None):
        l = np.asarray(l, dtype=float)
        return np.where(l > self.cut, float(self.high), float(self.low))

    def validate(self, propensity):
        if propensity.binary_treatment and not \
                {self.high, self.low} <= {0.0, 1.0}:
            raise DomainError("deterministic_dynamic levels must lie in "
                              "{0, 1} on a binary treatment")


@dataclass(frozen=True)
class StochasticRegime(BaseRegime):
    """Prespecified random assignment.

    Binary treatments: A ~ Bernoulli(clip(intercept + covariate l, 0, 1)).
    Continuous treatments: A ~ N(intercept + covariate l, sd^2).
    """

    intercept: float = 0.5
    covariate: float = 0.0
    sd: Optional[float] = None

    variant = "stochastic_prespecified"

    def validate(self, propensity):
        if propensity.binary_treatment:
            if self.sd is not None:
                raise InvalidArgumentError("sd has no meaning for a binary "
                                           "treatment")
        elif self.sd is None or not self.sd > 0:
            raise InvalidArgumentError("stochastic_prespecified needs a "
                                       "positive sd on a continuous treatment")

    def _location(self, l):
        return self.intercept + self.covariate * np.asarray(l, dtype=float)

    def probability(self, l):
        return np.clip(self._location(l), 0.0, 1.0)

    def draw(self, l, propensity, rng, stage=None):
        l = np.asarray(l, dtype=float)
        if propensity.binary_treatment:
            return (rng.random(l.shape[0]) < self.probability(l)).astype(float)
        return self._location(l) + self.sd * rng.standard_normal(l.shape[0])

    def ratio(self, l, a, propensity, stage=None):
        a = np.asarray(a, dtype=float)
        if propensity.binary_treatment:
            p = self.probability(l)
            numerator = np.where(a == 1.0, p, 1.0 - p)
        else:
            numerator = norm.pdf(a, loc=self._location(l), scale=self.sd)
        return checked_ratio(numerator,
                             propensity.treatment_pdf(l, a, stage), self)

    def quadrature(self, l, propensity, stage=None):
        if propensity.binary_treatment:
            return binary_nodes(self.probability(l))
        return gaussian_nodes(self._location(l),
                              np.full(np.shape(l), self.sd))
