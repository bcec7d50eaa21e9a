"""Treatment-law mixins.

A class providing ``treatment_probability`` (binary treatments) or
``treatment_mean_sd`` (Gaussian treatments) inherits density evaluation and
sampling from one of these mixins. Data-generating processes and fitted
propensity models share them, so regimes can treat both alike.
"""
import numpy as np
from scipy.stats import norm

from contregime.errors import DomainError

BINARY_SUPPORT = np.array([0.0, 1.0])


class BinaryPropensityMixin(object):

    binary_treatment = True

    def treatment_probability(self, l, stage=None):
        """P(A = 1 | current covariate l) at decision stage ``stage``"""
        raise NotImplementedError

    def treatment_pdf(self, l, a, stage=None):
        a = np.asarray(a, dtype=float)
        if not np.all(np.isin(a, BINARY_SUPPORT)):
            raise DomainError("binary treatment value outside {0, 1}: %r"
                              % (a[~np.isin(a, BINARY_SUPPORT)][:3],))
        p = self.treatment_probability(l, stage)
        return np.where(a == 1.0, p, 1.0 - p)

    def draw_treatment(self, l, rng, stage=None):
        l = np.asarray(l, dtype=float)
        u = rng.random(l.shape[0])
        return (u < self.treatment_probability(l, stage)).astype(float)


class GaussianPropensityMixin(object):

    binary_treatment = False

    def treatment_mean_sd(self, l, stage=None):
        """Mean and standard deviation arrays of A | current covariate l"""
        raise NotImplementedError

    def treatment_pdf(self, l, a, stage=None):
        mean, sd = self.treatment_mean_sd(l, stage)
        return norm.pdf(np.asarray(a, dtype=float), loc=mean, scale=sd)

    def draw_treatment(self, l, rng, stage=None):
        l = np.asarray(l, dtype=float)
        mean, sd = self.treatment_mean_sd(l, stage)
        return mean + sd * rng.standard_normal(l.shape[0])
