"""Euler-discretised Ornstein-Uhlenbeck type covariate with Gaussian
treatments redrawn at decision times."""
from dataclasses import dataclass, field, replace
from typing import Any, Mapping, Optional

import numpy as np
from scipy.stats import norm

from contregime.dgp.base_dgp import BaseDgp, OutcomeFunctional
from contregime.dgp.hazards import DiscreteHazard
from contregime.dgp.propensity import GaussianPropensityMixin
from contregime.errors import InvalidArgumentError
from contregime.quadrature import gauss_hermite, gaussian_nodes
from contregime.timegrid.partition import Partition


@dataclass(frozen=True)
class EulerDiffusionDgp(GaussianPropensityMixin, BaseDgp):
    """Linear-Gaussian diffusion.

    L(t + dt) = L(t) + (drift_intercept + drift_covariate L(t)
                        + drift_treatment A(t)) dt + noise sqrt(dt) eps
    A(t) ~ N(trt_intercept + trt_covariate L(t), trt_sd^2)
    L(0) ~ N(baseline_mean, baseline_sd^2)
    """

    fine_grid: Partition
    params: Mapping[str, Any] = field(default_factory=dict)
    censoring: Optional[DiscreteHazard] = None
    terminal: Optional[DiscreteHazard] = None
    outcome_functional: OutcomeFunctional = OutcomeFunctional()
    summary_map: str = "markov"

    kind = "euler-diffusion"
    DEFAULTS = {
        "baseline_mean": 0.0,
        "baseline_sd": 0.1,
        "drift_intercept": 0.0,
        "drift_covariate": -0.5,
        "drift_treatment": 0.8,
        "noise": 0.2,
        "trt_intercept": 0.0,
        "trt_covariate": 0.5,
        "trt_sd": 0.3,
        "state_low": -3.0,
        "state_high": 3.0,
        "state_points": 121,
        "action_low": -3.0,
        "action_high": 3.0,
        "action_points": 61,
    }

    def __post_init__(self):
        self._init_params()
        p = self.params
        for name in ("baseline_sd", "noise", "trt_sd"):
            if not p[name] > 0:
                raise InvalidArgumentError("%s must be positive" % name)
        for prefix in ("state", "action"):
            if not p[prefix + "_high"] > p[prefix + "_low"] or \
                    p[prefix + "_points"] < 2:
                raise InvalidArgumentError("invalid %s grid" % prefix)

    def treatment_mean_sd(self, l, stage=None):
        p = self.params
        mean = p["trt_intercept"] + p["trt_covariate"] * np.asarray(
            l, dtype=float)
        return mean, np.full(mean.shape, p["trt_sd"])

    def drift(self, l, a):
        p = self.params
        return (p["drift_intercept"] +
                p["drift_covariate"] * np.asarray(l, dtype=float) +
                p["drift_treatment"] * np.asarray(a, dtype=float))

    def _step_moments(self, l, a, dt):
        mean = np.asarray(l, dtype=float) + self.drift(l, a) * dt
        return mean, self.params["noise"] * np.sqrt(dt)

    def baseline_nodes(self):
        x, w = gauss_hermite()
        p = self.params
        return p["baseline_mean"] + p["baseline_sd"] * x, w

    def draw_baseline(self, rng, count):
        p = self.params
        return p["baseline_mean"] + p["baseline_sd"] * \
            rng.standard_normal(count)

    def transition_pdf(self, l, a, l_new, dt):
        mean, sd = self._step_moments(l, a, dt)
        return norm.pdf(np.asarray(l_new, dtype=float), loc=mean, scale=sd)

    def transition_nodes(self, l, a, dt):
        mean, sd = self._step_moments(l, a, dt)
        return gaussian_nodes(mean, sd)

    def draw_transition(self, l, a, dt, rng):
        mean, sd = self._step_moments(l, a, dt)
        return mean + sd * rng.standard_normal(mean.shape[0])

    def state_nodes(self):
        p = self.params
        return np.linspace(p["state_low"], p["state_high"],
                           int(p["state_points"]))

    def action_nodes(self):
        p = self.params
        return np.linspace(p["action_low"], p["action_high"],
                           int(p["action_points"]))

    def _shift_transition(self, shift):
        params = dict(self.params)
        params["drift_intercept"] += shift
        return replace(self, params=params)

    def _drop_propensity_covariate(self):
        params = dict(self.params)
        params["trt_intercept"] += params["trt_covariate"] * \
            params["baseline_mean"]
        params["trt_covariate"] = 0.0
        return replace(self, params=params)
