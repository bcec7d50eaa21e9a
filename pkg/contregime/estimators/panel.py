"""Decision-time view of a cohort."""
import numpy as np

from contregime.errors import InvalidArgumentError


class DecisionPanel(object):
    """Stage-level arrays of a cohort for one decision partition.

    Stage k runs from t_k to t_{k+1}; the treatment of stage k is the one
    assigned at t_k. A subject is observed at t_k while its exit time (the
    earlier of terminal event and censoring) lies after t_k.

    :param cohort: Cohort
    :param decisions: Partition, a sub-grid of cohort.grid
    """

    def __init__(self, cohort, decisions):
        self.cohort = cohort
        self.decisions = decisions
        self.index = decisions.indices_in(cohort.grid)
        self.times = decisions.as_array()
        if cohort.covariate.shape[2] != 1 or cohort.treatment.shape[2] != 1:
            raise InvalidArgumentError("only scalar covariates and treatments "
                                       "are supported")
        self.covariate = cohort.covariate[:, self.index, 0]
        self.treatment = cohort.treatment[:, self.index[:-1], 0]
        t = self.times[np.newaxis, :]
        self.observed = cohort.exit_time[:, np.newaxis] > t
        self.terminated_before = cohort.event_time[:, np.newaxis] < t
        self.uncensored_at = cohort.censor_time[:, np.newaxis] > t
        self.uncensored = ~cohort.censored
        self.outcome = np.where(self.uncensored, cohort.outcome, 0.0)

    @property
    def n(self):
        return len(self.cohort)

    @property
    def K(self):
        return self.decisions.K

    def at_risk(self, k):
        """Observed at t_k and still uncensored at t_{k+1}"""
        return self.observed[:, k] & self.uncensored_at[:, k + 1]

    def terminal_within(self, k):
        """Terminal event inside stage k"""
        return self.terminated_before[:, k + 1] & \
            ~self.terminated_before[:, k]

    def fine_steps(self, k):
        """Fine-grid steps of stage k"""
        return range(int(self.index[k]), int(self.index[k + 1]))

    def censoring_survival(self, censoring, k):
        """Probability of no censoring inside stage k along each path

        :param censoring: object with censoring_hazard(l, a)
        :return (n,) array
        """
        cohort = self.cohort
        exit_time = cohort.exit_time
        survival = np.ones(self.n)
        grid = cohort.grid.as_array()
        for j in self.fine_steps(k):
            at_risk = exit_time > grid[j]
            hazard = censoring.censoring_hazard(cohort.covariate[:, j, 0],
                                                cohort.treatment[:, j, 0])
            survival *= np.where(at_risk, 1.0 - hazard, 1.0)
        return survival

    def value_observations(self, fn, k):
        """fn(L_k) for subjects observed at t_k, nu after a terminal event and
        0 after censoring. Stage K returns nu itself."""
        if k == self.K:
            return self.outcome.copy()
        values = np.zeros(self.n)
        observed = self.observed[:, k]
        if np.any(observed):
            values[observed] = fn(self.covariate[observed, k])
        done = self.terminated_before[:, k]
        values[done] = self.outcome[done]
        return values

    def action_observations(self, fn, k):
        """fn(L_k, A_k) with the same conventions as value_observations"""
        values = np.zeros(self.n)
        observed = self.observed[:, k]
        if np.any(observed):
            values[observed] = fn(self.covariate[observed, k],
                                  self.treatment[observed, k])
        done = self.terminated_before[:, k]
        values[done] = self.outcome[done]
        return values
