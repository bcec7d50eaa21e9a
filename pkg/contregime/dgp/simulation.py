"""Forward simulation of cohorts, observed or under an intervention."""
import logging

import numpy as np
from joblib import Parallel, delayed

from contregime import streams
from contregime.errors import InvalidArgumentError
from contregime.timegrid.trajectory import Cohort

logger = logging.getLogger(__name__)


def _simulate_block(spec, decision_idx, seed, block, count, regime,
                    censoring):
    draws = streams.BlockStreams(seed, block, count)
    times = spec.fine_grid.as_array()
    m = len(times) - 1
    decision_set = set(int(i) for i in decision_idx[:-1])
    L = np.empty((count, m + 1))
    A = np.empty((count, m + 1))
    L[:, 0] = spec.draw_baseline(draws.generator(streams.BASELINE, 0), count)
    active = np.ones(count, dtype=bool)
    event_time = np.full(count, np.inf)
    censor_time = np.full(count, np.inf)
    stage = -1
    for i in range(m + 1):
        l_i = L[:, i]
        if i in decision_set:
            stage += 1
            rng = draws.generator(streams.TREATMENT, i)
            if regime is None:
                a_new = spec.draw_treatment(l_i, rng, stage)
            else:
                a_new = regime.draw(l_i, spec, rng, stage)
            A[:, i] = a_new if i == 0 else np.where(active, a_new, A[:, i - 1])
        else:
            A[:, i] = A[:, i - 1]
        if i == m:
            break
        a_i = A[:, i]
        midpoint = 0.5 * (times[i] + times[i + 1])
        if censoring and spec.censoring is not None:
            u = draws.uniform(streams.CENSORING, i)
            hit = active & (u < spec.censoring.hazard(l_i, a_i))
            censor_time[hit] = midpoint
            active &= ~hit
        if spec.terminal is not None:
            u = draws.uniform(streams.TERMINAL, i)
            hit = active & (u < spec.terminal.hazard(l_i, a_i))
            event_time[hit] = midpoint
            active &= ~hit
        l_next = spec.draw_transition(l_i, a_i, times[i + 1] - times[i],
                                      draws.generator(streams.TRANSITION, i))
        L[:, i + 1] = np.where(active, l_next, l_i)
    outcome = spec.outcome(L[:, m])
    outcome[np.isfinite(censor_time)] = np.nan
    return A, L, event_time, censor_time, outcome


def _run_blocks(spec, decisions, n, seed, regime, censoring, n_jobs,
                keep_paths):
    if int(n) != n or n < 1:
        raise InvalidArgumentError("n must be a positive integer, got %r"
                                   % (n,))
    decision_idx = decisions.indices_in(spec.fine_grid)
    logger.debug("simulating %d subjects on %d fine steps (K=%d, regime=%s)",
                 n, spec.fine_grid.K, decisions.K, regime)

    def run(block, count):
        result = _simulate_block(spec, decision_idx, seed, block, count,
                                 regime, censoring)
        return result if keep_paths else result[-1:]

    blocks = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(run)(block, stop - start)
        for block, start, stop in streams.block_bounds(int(n)))
    return [np.concatenate(part) for part in zip(*blocks)]


def simulate_paths(spec, decisions, n, seed, regime=None, censoring=True,
                   n_jobs=1):
    """Simulates n subjects left to right through the factorised law

    Treatments are redrawn only at decision times (from the propensity, or
    from ``regime`` when given) and held constant in between.

    :param spec: DgpSpec
    :param decisions: Partition, a sub-grid of spec.fine_grid
    :param n: number of subjects
    :param seed: non-negative integer seed
    :param regime: optional regime replacing the treatment law
    :param censoring: apply the censoring hazard
    :param n_jobs: joblib workers over subject blocks
    :return Cohort
    """
    A, L, event_time, censor_time, outcome = _run_blocks(
        spec, decisions, n, seed, regime, censoring, n_jobs, keep_paths=True)
    return Cohort(grid=spec.fine_grid,
                  treatment=A[:, :, np.newaxis],
                  covariate=L[:, :, np.newaxis],
                  event_time=event_time,
                  censor_time=censor_time,
                  outcome=outcome,
                  decisions=decisions)


def simulate_observed(spec, decisions, n, seed, n_jobs=1):
    """Observed-data cohort: propensity treatments, censoring active"""
    return simulate_paths(spec, decisions, n, seed, regime=None,
                          censoring=True, n_jobs=n_jobs)


def simulate_outcomes(spec, decisions, n, seed, regime=None, censoring=True,
                      n_jobs=1):
    """nu of the subjects simulate_paths would return, without keeping the
    paths; draws are identical"""
    outcome, = _run_blocks(spec, decisions, n, seed, regime, censoring,
                           n_jobs, keep_paths=False)
    return outcome
