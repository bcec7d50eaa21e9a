"""Estimating-equation residuals and their test batteries.

Both residuals have mean zero at the truth: the g-computation residual for
the true value process whatever bounded weights are supplied, the IPW
residual for the true weights whatever bounded value process is supplied.
"""
from dataclasses import dataclass

import numpy as np

from contregime.errors import InvalidArgumentError
from contregime.estimators.functionals import Estimate, mean_and_se
from contregime.estimators.panel import DecisionPanel
from contregime.estimators.value_process import UserValueProcess
from contregime.estimators.weights import WeightProcess

DEFAULT_THRESHOLD = 3.0
PERTURBATION = 0.05


def _weight_matrix(Q, n, K):
    if isinstance(Q, WeightProcess):
        return Q.pre
    if np.isscalar(Q):
        return np.full((n, K + 1), float(Q))
    Q = np.asarray(Q, dtype=float)
    if Q.shape != (n, K + 1):
        raise InvalidArgumentError("weights must have shape %s, got %s"
                                   % ((n, K + 1), Q.shape))
    return Q


def _panel(cohort, decisions):
    if isinstance(cohort, DecisionPanel):
        return cohort
    return DecisionPanel(cohort, decisions)


def gcomp_residual_terms(H, Q, panel):
    """sum_k Q_{k+1} (V_{k+1} - H_k) over stages the subject went through
    uncensored"""
    W = _weight_matrix(Q, panel.n, panel.K)
    H_obs, V_obs = H.observed(panel)
    values = np.zeros(panel.n)
    for k in range(panel.K):
        keep = panel.uncensored_at[:, k + 1]
        values += np.where(keep, W[:, k + 1] * (V_obs[:, k + 1] -
                                                H_obs[:, k]), 0.0)
    return values


def ipw_residual_terms(H, Q, panel):
    """sum_k [Q_{k+1} H_k - Q_k V_k]"""
    W = _weight_matrix(Q, panel.n, panel.K)
    H_obs, V_obs = H.observed(panel)
    values = np.zeros(panel.n)
    for k in range(panel.K):
        values += W[:, k + 1] * H_obs[:, k] - W[:, k] * V_obs[:, k]
    return values


def ee_residual_gcomp(H, Q, g, decisions, cohort):
    """Mean and standard error of the g-computation residual

    :param H: ValueProcess of regime g
    :param Q: WeightProcess, (n, K + 1) array or a constant
    """
    panel = _panel(cohort, decisions)
    point, se = mean_and_se(gcomp_residual_terms(H, Q, panel))
    return Estimate(point=point, se=se, n=panel.n, K=panel.K,
                    estimator="ee_residual_gcomp")


def ee_residual_ipw(H, Q, g, decisions, cohort):
    """Mean and standard error of the IPW residual"""
    panel = _panel(cohort, decisions)
    point, se = mean_and_se(ipw_residual_terms(H, Q, panel))
    return Estimate(point=point, se=se, n=panel.n, K=panel.K,
                    estimator="ee_residual_ipw")


@dataclass(frozen=True)
class ResidualCheck(object):
    """One battery entry: a residual and whether it should vanish"""

    battery: str
    case: str
    mean: float
    se: float
    expect_zero: bool
    threshold: float = DEFAULT_THRESHOLD

    @property
    def z(self):
        if self.se == 0.0:
            return 0.0 if self.mean == 0.0 else np.inf
        return abs(self.mean) / self.se

    @property
    def passed(self):
        vanishes = self.z <= self.threshold
        return vanishes if self.expect_zero else not vanishes


def covariate_indicator(panel, stage=1, cut=0.5):
    """Weights Q_{k+1} = 1{L(t_stage) > cut} for k >= stage, 0 before"""
    if panel.K < stage + 1:
        raise InvalidArgumentError("the indicator battery needs at least %d "
                                   "decisions" % (stage + 1))
    indicator = (panel.covariate[:, stage] > cut).astype(float)
    W = np.zeros((panel.n, panel.K + 1))
    W[:, stage + 1:] = indicator[:, np.newaxis]
    return W


def gcomp_battery(H, Q, g, decisions, cohort, threshold=DEFAULT_THRESHOLD):
    """g-computation residual of H against unit, IPW and indicator weights,
    plus a detection case with H moved by PERTURBATION at t_1

    :return list of ResidualCheck
    """
    panel = _panel(cohort, decisions)
    indicator = covariate_indicator(panel)
    checks = []
    for case, weights in (("unit", 1.0), ("ipw", Q),
                          ("indicator", indicator)):
        result = ee_residual_gcomp(H, weights, g, decisions, panel)
        checks.append(ResidualCheck("gcomp", case, result.point, result.se,
                                    True, threshold))
    result = ee_residual_gcomp(H.shifted(1, PERTURBATION), indicator, g,
                               decisions, panel)
    checks.append(ResidualCheck("gcomp", "perturbed_H", result.point,
                                result.se, False, threshold))
    return checks


def ipw_battery(Q, H, H_wrong, g, decisions, cohort,
                threshold=DEFAULT_THRESHOLD):
    """IPW residual of Q against a unit, a misspecified and the given value
    process, plus a detection case with Q halved from t_2 on

    :return list of ResidualCheck
    """
    panel = _panel(cohort, decisions)
    unit = UserValueProcess.constant(1.0, g, H.propensity, panel.decisions)
    checks = []
    for case, values in (("unit", unit), ("misspecified_H", H_wrong),
                         ("exact_H", H)):
        result = ee_residual_ipw(values, Q, g, decisions, panel)
        checks.append(ResidualCheck("ipw", case, result.point, result.se,
                                    True, threshold))
    halved = Q.scaled(min(3, panel.K), 0.5)
    result = ee_residual_ipw(unit, halved, g, decisions, panel)
    checks.append(ResidualCheck("ipw", "halved_Q", result.point, result.se,
                                False, threshold))
    return checks
