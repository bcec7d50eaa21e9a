"""Inverse probability weighting process with censoring correction."""
import logging

import numpy as np

from contregime.errors import InvalidArgumentError, NumericalError
from contregime.estimators.panel import DecisionPanel

logger = logging.getLogger(__name__)


class WeightProcess(object):
    """Per-subject cumulative weights at the decision times.

    ``pre[:, k]`` is Q just before the treatment of stage k is assigned,
    ``post[:, k]`` just after it; censoring inside stage k moves post[:, k]
    to pre[:, k + 1]. pre[:, 0] is 1 and pre[:, K] is Q(X).

    :param pre: (n, K + 1) array
    :param post: (n, K) array
    :param capped: number of subjects with at least one capped entry
    :param cap: cap that was applied, None when off
    """

    def __init__(self, pre, post, capped=0, cap=None):
        self.pre = pre
        self.post = post
        self.capped = int(capped)
        self.cap = cap

    @property
    def n(self):
        return self.pre.shape[0]

    @property
    def K(self):
        return self.post.shape[1]

    @property
    def final(self):
        """Q(X)"""
        return self.pre[:, -1]

    def martingale_means(self):
        """Mean and standard error of Q at every decision index"""
        mean = np.mean(self.pre, axis=0)
        se = np.std(self.pre, axis=0, ddof=1) / np.sqrt(self.n)
        return mean, se

    def scaled(self, from_index, factor):
        """Copy with pre[:, from_index:] multiplied by factor"""
        pre = self.pre.copy()
        pre[:, from_index:] *= factor
        post = self.post.copy()
        post[:, from_index:] *= factor
        return WeightProcess(pre, post, self.capped, self.cap)


def build_Q(nuis, g, decisions, cohort, cap=None):
    """Builds the weight process of regime g on a cohort

    Each stage multiplies by the regime-to-propensity ratio at the observed
    treatment, then by 1{uncensored through the stage} over the probability
    of that, taken along the subject's fine-grid path. After a terminal event
    both factors are 1.

    :param nuis: NuisanceSet; its propensity and censoring components are used
    :param g: regime absolutely continuous against the propensity
    :param decisions: decision Partition
    :param cohort: Cohort
    :param cap: optional upper bound on weights, off by default
    :return WeightProcess
    """
    g.validate(nuis.propensity)
    if cap is not None and not cap > 0:
        raise InvalidArgumentError("weight cap must be positive, got %r"
                                   % (cap,))
    panel = cohort if isinstance(cohort, DecisionPanel) else \
        DecisionPanel(cohort, decisions)
    n, K = panel.n, panel.K
    pre = np.ones((n, K + 1))
    post = np.ones((n, K))
    for k in range(K):
        ratio = g.ratio(panel.covariate[:, k], panel.treatment[:, k],
                        nuis.propensity, k)
        ratio = np.where(panel.observed[:, k], ratio, 1.0)
        survival = panel.censoring_survival(nuis.censoring, k)
        if np.any(survival <= 0):
            raise NumericalError("censoring survival vanishes in stage %d"
                                 % k)
        correction = np.where(panel.uncensored_at[:, k + 1],
                              1.0 / survival, 0.0)
        post[:, k] = pre[:, k] * ratio
        pre[:, k + 1] = post[:, k] * correction
        for values in (post[:, k], pre[:, k + 1]):
            if not np.all(np.isfinite(values)):
                raise NumericalError("non-finite weight at decision %d under "
                                     "%s" % (k, g))
    capped = 0
    if cap is not None:
        over = np.any(pre > cap, axis=1) | np.any(post > cap, axis=1)
        capped = int(np.sum(over))
        if capped:
            logger.warning("weight cap %g applied to %d subjects (protocol "
                           "deviation)", cap, capped)
            pre = np.minimum(pre, cap)
            post = np.minimum(post, cap)
    return WeightProcess(pre, post, capped, cap)
