"""Identification functionals: g-computation, IPW and doubly robust."""
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm

from contregime.errors import InvalidArgumentError, ScopeError
from contregime.estimators.panel import DecisionPanel

logger = logging.getLogger(__name__)

LOW_ESS_FRACTION = 0.01


@dataclass(frozen=True)
class Estimate(object):
    point: float
    se: float
    n: int
    K: int
    diagnostics: dict = field(default_factory=dict)
    estimator: str = ""

    def interval(self, level=0.95):
        """Normal-approximation confidence interval"""
        z = norm.ppf(0.5 + level / 2.0)
        return self.point - z * self.se, self.point + z * self.se

    def to_dict(self):
        return {"estimator": self.estimator, "point": self.point,
                "se": self.se, "n": self.n, "K": self.K,
                "diagnostics": dict(self.diagnostics)}


def mean_and_se(values):
    values = np.asarray(values, dtype=float)
    if len(values) < 2:
        return float(np.mean(values)), 0.0
    return (float(np.mean(values)),
            float(np.std(values, ddof=1) / np.sqrt(len(values))))


def weight_diagnostics(Q):
    """Effective sample size, largest weight and share of zero weights of
    Q(X), plus the cap bookkeeping

    ``low_ess`` marks an effective sample size below LOW_ESS_FRACTION of the
    cohort.
    """
    w = Q.final
    total_sq = float(np.sum(w ** 2))
    ess = float(np.sum(w)) ** 2 / total_sq if total_sq > 0 else 0.0
    return {"ess": ess,
            "max_weight": float(np.max(w)),
            "zero_share": float(np.mean(w == 0.0)),
            "capped": Q.capped,
            "low_ess": bool(ess < LOW_ESS_FRACTION * Q.n),
            "protocol_deviation": Q.capped > 0}


def _panel(cohort, decisions):
    if isinstance(cohort, DecisionPanel):
        return cohort
    return DecisionPanel(cohort, decisions)


def gcomp_estimate(H, cohort=None, Q=None):
    """Reports E V_0(L(0))

    Exact value processes integrate over the baseline law in closed form
    (se 0). Fitted ones average over the cohort's baseline covariates; their
    standard error comes from the empirical influence function when weights
    Q are supplied, from the baseline averaging alone otherwise.

    :param H: ValueProcess
    :param cohort: Cohort, needed when the baseline law is not known
    :param Q: optional WeightProcess on the same cohort
    :return Estimate
    """
    n = len(cohort) if cohort is not None else 0
    exact = H.exact_baseline_value()
    if exact is not None:
        return Estimate(point=exact, se=0.0, n=n, K=H.K,
                        diagnostics={"source": H.source},
                        estimator="gcomp")
    if cohort is None:
        cohort = getattr(H, "panel", None)
        cohort = cohort.cohort if cohort is not None else None
    if cohort is None:
        raise InvalidArgumentError("gcomp for a %s value process needs a "
                                   "cohort" % H.source)
    point, se = mean_and_se(H.V(0, cohort.covariate[:, 0, 0]))
    se_method = "baseline"
    if Q is not None:
        _, se = mean_and_se(dr_terms(H, Q, _panel(cohort, H.decisions)))
        se_method = "influence"
    return Estimate(point=point, se=se, n=len(cohort), K=H.K,
                    diagnostics={"source": H.source, "se_method": se_method},
                    estimator="gcomp")


def ipw_estimate(Q, cohort):
    """Mean of Q(X) nu; censored subjects carry weight 0

    :param Q: WeightProcess built on the same cohort
    :param cohort: Cohort or DecisionPanel
    """
    outcome = np.where(np.isnan(cohort.outcome), 0.0, cohort.outcome)
    point, se = mean_and_se(Q.final * outcome)
    return Estimate(point=point, se=se, n=Q.n, K=Q.K,
                    diagnostics=weight_diagnostics(Q), estimator="ipw")


def dr_terms(H, Q, panel):
    """Per-subject doubly robust values

    Q(X) nu - sum_k [Q(t_k+) H_k - Q(t_k-) V_k] with Q(t_k+) taken after
    the censoring of stage k, i.e. pre[:, k + 1].
    """
    H_obs, V_obs = H.observed(panel)
    values = Q.final * panel.outcome
    correction = np.zeros(panel.n)
    for k in range(panel.K):
        correction += Q.pre[:, k + 1] * H_obs[:, k] - Q.pre[:, k] * V_obs[:, k]
    return values - correction


def dr_estimate(H, Q, g, decisions, cohort):
    """Doubly robust estimate for a prespecified regime

    :raises ScopeError: g depends on the actually observed treatment
    """
    if g.depends_on_actual:
        raise ScopeError("the doubly robust functional needs a prespecified "
                         "regime, %s depends on the observed treatment" % g)
    panel = _panel(cohort, decisions)
    point, se = mean_and_se(dr_terms(H, Q, panel))
    return Estimate(point=point, se=se, n=panel.n, K=panel.K,
                    diagnostics=weight_diagnostics(Q), estimator="dr")
