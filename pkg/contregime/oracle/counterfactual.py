"""Ground truth by forward simulation of the intervened world."""
import logging
from dataclasses import dataclass

import numpy as np
from astropy.table import Table

from contregime.dgp.simulation import simulate_outcomes
from contregime.errors import InvalidArgumentError
from contregime.timegrid.partition import make_partition

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CounterfactualSample(object):
    """Monte-Carlo draws of nu under a regime"""

    values: np.ndarray
    K: int

    @property
    def n(self):
        return len(self.values)

    @property
    def mean(self):
        return float(np.mean(self.values))

    @property
    def se(self):
        if self.n < 2:
            return 0.0
        return float(np.std(self.values, ddof=1) / np.sqrt(self.n))


def simulate_counterfactual(spec, g, decisions, n, seed, n_jobs=1):
    """Draws nu(Y_G) by alternating regime draws and structural transitions

    Censoring is switched off in the intervened world. Terminal events stay,
    they are part of the outcome process.

    :param spec: DgpSpec
    :param g: regime
    :param decisions: decision Partition, a sub-grid of spec.fine_grid
    :param n: number of counterfactual subjects
    :param seed: non-negative integer seed
    :return CounterfactualSample
    """
    g.validate(spec)
    values = simulate_outcomes(spec, decisions, n, seed, regime=g,
                               censoring=False, n_jobs=n_jobs)
    sample = CounterfactualSample(values=values, K=decisions.K)
    logger.debug("counterfactual %s K=%d: %.6f +- %.6f", g, decisions.K,
                 sample.mean, sample.se)
    return sample


def mesh_convergence(spec, g, k_schedule, n, seed, threshold=3.0, n_jobs=1):
    """Counterfactual means along a refining decision schedule

    Row i carries |estimate_i - estimate_{i-1}| and its standard error. A row
    is flagged when its difference exceeds the previous difference by more
    than ``threshold`` combined standard errors; the first refinement is
    never flagged.

    :param k_schedule: non-decreasing positive integers, each giving a
        uniform sub-grid of spec.fine_grid
    :return astropy Table (K, estimate, se, delta_prev, delta_se, flagged)
        with meta["monotone"] set when no row is flagged
    """
    schedule = [int(k) for k in k_schedule]
    if not schedule:
        raise InvalidArgumentError("empty K schedule")
    if any(b < a for a, b in zip(schedule, schedule[1:])):
        raise InvalidArgumentError("K schedule must be non-decreasing: %s"
                                   % schedule)
    estimates, ses = [], []
    for K in schedule:
        decisions = make_partition(spec.fine_grid.horizon, K)
        decisions.indices_in(spec.fine_grid)
        sample = simulate_counterfactual(spec, g, decisions, n, seed,
                                         n_jobs=n_jobs)
        estimates.append(sample.mean)
        ses.append(sample.se)
        logger.info("mesh K=%d mesh=%.4g estimate=%.6f se=%.6f", K,
                    decisions.mesh, sample.mean, sample.se)
    estimates = np.array(estimates)
    ses = np.array(ses)
    delta = np.full(len(schedule), np.nan)
    delta_se = np.full(len(schedule), np.nan)
    delta[1:] = np.abs(np.diff(estimates))
    delta_se[1:] = np.sqrt(ses[1:] ** 2 + ses[:-1] ** 2)
    flagged = np.zeros(len(schedule), dtype=bool)
    for i in range(2, len(schedule)):
        tolerance = threshold * np.hypot(delta_se[i], delta_se[i - 1])
        flagged[i] = delta[i] > delta[i - 1] + tolerance
    table = Table([schedule, estimates, ses, delta, delta_se, flagged],
                  names=("K", "estimate", "se", "delta_prev", "delta_se",
                         "flagged"))
    table.meta["monotone"] = not bool(np.any(flagged))
    table.meta["regime"] = str(g)
    return table
