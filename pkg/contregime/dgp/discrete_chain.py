"""Binary covariate / binary treatment Markov chain on the fine grid."""
from dataclasses import dataclass, field, replace
from typing import Any, Mapping, Optional

import numpy as np

from contregime.dgp.base_dgp import BaseDgp, OutcomeFunctional
from contregime.dgp.hazards import DiscreteHazard
from contregime.dgp.propensity import BINARY_SUPPORT, BinaryPropensityMixin
from contregime.errors import InvalidArgumentError
from contregime.timegrid.partition import Partition

# Covariate value substituted when the propensity is made to ignore it.
REFERENCE_COVARIATE = 0.5


@dataclass(frozen=True)
class DiscreteChainDgp(BinaryPropensityMixin, BaseDgp):
    """Binary chain.

    L(0) ~ Bernoulli(baseline_p)
    P(A(t) = 1 | L(t)) = clip(trt_intercept + trt_covariate L(t),
                              margin, 1 - margin)
    P(L(t+) = 1 | L(t), A(t)) = clip(trans_intercept + trans_treatment A(t)
                                     + trans_covariate L(t),
                                     clip_low, clip_high)
    """

    fine_grid: Partition
    params: Mapping[str, Any] = field(default_factory=dict)
    censoring: Optional[DiscreteHazard] = None
    terminal: Optional[DiscreteHazard] = None
    outcome_functional: OutcomeFunctional = OutcomeFunctional()
    summary_map: str = "markov"

    kind = "discrete-chain"
    DEFAULTS = {
        "baseline_p": 0.5,
        "trt_intercept": 0.2,
        "trt_covariate": 0.6,
        "trans_intercept": 0.2,
        "trans_treatment": 0.3,
        "trans_covariate": 0.3,
        "margin": 0.01,
        "clip_low": 0.01,
        "clip_high": 0.99,
    }

    def __post_init__(self):
        self._init_params()
        p = self.params
        if not 0.0 < p["clip_low"] < p["clip_high"] < 1.0:
            raise InvalidArgumentError("transition clip bounds must satisfy "
                                       "0 < clip_low < clip_high < 1")
        if not 0.0 < p["margin"] < 0.5:
            raise InvalidArgumentError("propensity margin must lie in "
                                       "(0, 0.5)")
        if not 0.0 <= p["baseline_p"] <= 1.0:
            raise InvalidArgumentError("baseline_p must be a probability")

    def treatment_probability(self, l, stage=None):
        p = self.params
        value = p["trt_intercept"] + p["trt_covariate"] * np.asarray(
            l, dtype=float)
        return np.clip(value, p["margin"], 1.0 - p["margin"])

    def transition_probability(self, l, a):
        """P(next covariate = 1 | l, a)"""
        p = self.params
        value = (p["trans_intercept"] +
                 p["trans_treatment"] * np.asarray(a, dtype=float) +
                 p["trans_covariate"] * np.asarray(l, dtype=float))
        return np.clip(value, p["clip_low"], p["clip_high"])

    def baseline_nodes(self):
        q = self.params["baseline_p"]
        return BINARY_SUPPORT.copy(), np.array([1.0 - q, q])

    def draw_baseline(self, rng, count):
        return (rng.random(count) < self.params["baseline_p"]).astype(float)

    def transition_pdf(self, l, a, l_new, dt=None):
        self._check_binary(l_new, "covariate")
        q = self.transition_probability(l, a)
        return np.where(np.asarray(l_new) == 1.0, q, 1.0 - q)

    def transition_nodes(self, l, a, dt=None):
        q = self.transition_probability(l, a)
        nodes = np.broadcast_to(BINARY_SUPPORT, q.shape + (2,))
        weights = np.stack([1.0 - q, q], axis=-1)
        return nodes, weights

    def draw_transition(self, l, a, dt, rng):
        q = self.transition_probability(l, a)
        return (rng.random(q.shape[0]) < q).astype(float)

    def state_nodes(self):
        return BINARY_SUPPORT.copy()

    def action_nodes(self):
        return BINARY_SUPPORT.copy()

    def _shift_transition(self, shift):
        params = dict(self.params)
        params["trans_intercept"] += shift
        return replace(self, params=params)

    def _drop_propensity_covariate(self):
        params = dict(self.params)
        params["trt_intercept"] += params["trt_covariate"] * \
            REFERENCE_COVARIATE
        params["trt_covariate"] = 0.0
        return replace(self, params=params)
