"""Interventions G on the treatment process.

A regime supplies three things at each decision time, all vectorised over
the current covariate ``l`` and evaluated against a treatment law
``propensity`` (a DgpSpec or a fitted propensity model):

* ``draw``: a draw from G given the history,
* ``ratio``: the Radon-Nikodym factor dG/dP at the observed treatment,
* ``quadrature``: nodes and weights integrating a function of the treatment
  against G, used by g-computation and the doubly robust functional.
"""
import numpy as np

from contregime.errors import InvalidArgumentError, PositivityError
from contregime.quadrature import binary_nodes, gaussian_nodes


class BaseRegime(object):
    """Intervention on the treatment law"""

    variant = None
    depends_on_actual = False

    def validate(self, propensity):
        """Raises InvalidArgumentError when the regime cannot act on the
        treatment type of ``propensity``"""
        pass

    def draw(self, l, propensity, rng, stage=None):
        raise NotImplementedError

    def ratio(self, l, a, propensity, stage=None):
        raise NotImplementedError

    def quadrature(self, l, propensity, stage=None):
        raise NotImplementedError

    def integrate(self, fn, l, propensity, stage=None):
        """Integrates fn(l, a) over a ~ G(. | l)

        :param fn: vectorised function of (covariate, treatment) arrays
        :return array shaped like l
        """
        l = np.asarray(l, dtype=float)
        nodes, weights = self.quadrature(l, propensity, stage)
        values = fn(np.broadcast_to(l[..., np.newaxis], nodes.shape), nodes)
        return np.sum(weights * values, axis=-1)

    def sample_regime(self, h, spec, rng):
        """One draw of the regime's treatment for a single history

        :param h: HistoryView without current treatment
        :param spec: DgpSpec providing the observed treatment law
        :param rng: numpy Generator
        """
        if h.treatment_aware:
            raise InvalidArgumentError("sample_regime needs a view without "
                                       "the current treatment")
        self.validate(spec)
        return float(self.draw(np.array([h.covariate]), spec, rng)[0])

    def density_ratio(self, h, observed_a, spec):
        """dG/dP at the observed treatment for a single history"""
        if h.treatment_aware:
            raise InvalidArgumentError("density_ratio needs a view without "
                                       "the current treatment")
        self.validate(spec)
        return float(self.ratio(np.array([h.covariate]),
                                np.array([float(observed_a)]), spec)[0])

    def __str__(self):
        fields = getattr(self, "__dataclass_fields__", {})
        args = ", ".join("%s=%r" % (name, getattr(self, name))
                         for name in fields
                         if not callable(getattr(self, name)))
        return "%s(%s)" % (self.variant, args)


def natural_nodes(propensity, l, stage=None):
    """Quadrature of the observed treatment law itself"""
    if propensity.binary_treatment:
        return binary_nodes(propensity.treatment_probability(l, stage))
    mean, sd = propensity.treatment_mean_sd(l, stage)
    return gaussian_nodes(mean, sd)


def checked_ratio(numerator, denominator, regime):
    """numerator / denominator, raising when the regime puts mass where the
    propensity has none"""
    numerator = np.asarray(numerator, dtype=float)
    denominator = np.asarray(denominator, dtype=float)
    if np.any((denominator <= 0) & (numerator > 0)):
        raise PositivityError("regime %s charges treatments the propensity "
                              "never assigns" % regime)
    safe = np.where(denominator > 0, denominator, 1.0)
    return np.where(denominator > 0, numerator / safe, 0.0)


def sample_regime(g, h, spec, rng):
    return g.sample_regime(h, spec, rng)


def density_ratio(g, h, observed_a, spec):
    return g.density_ratio(h, observed_a, spec)
