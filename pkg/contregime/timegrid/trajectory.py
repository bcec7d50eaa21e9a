"""Trajectories, cohorts and filtration views.

A trajectory stores piecewise-constant treatment and covariate paths on the
fine simulation grid. After the exit time X = min(T, C) every value is frozen
at the last value observed before X.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from contregime.errors import InvalidArgumentError
from contregime.timegrid.partition import Partition


def _frozen(values, ndim):
    arr = np.array(values, dtype=float)
    if arr.ndim == ndim - 1:
        arr = arr[..., np.newaxis]
    arr.setflags(write=False)
    return arr


def summarize(past_covariates, past_treatments, current_treatment=None):
    """Markov summary of a history prefix.

    The current covariate, followed by the current treatment when the view
    is treatment aware.
    """
    parts = [np.asarray(past_covariates, dtype=float)[-1]]
    if current_treatment is not None:
        parts.append(np.atleast_1d(np.asarray(current_treatment,
                                              dtype=float)))
    return np.concatenate(parts)


@dataclass(frozen=True)
class HistoryView(object):
    """History up to grid index j.

    Without ``current_treatment`` the view is the natural filtration at t_j;
    with it, the one-step treatment aware filtration.
    """

    upto_index: int
    past_treatments: np.ndarray
    past_covariates: np.ndarray
    current_treatment: Optional[np.ndarray] = None
    summary: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "past_treatments",
                           _frozen(self.past_treatments, 2))
        object.__setattr__(self, "past_covariates",
                           _frozen(self.past_covariates, 2))
        if self.current_treatment is not None:
            object.__setattr__(self, "current_treatment",
                               _frozen(np.atleast_1d(self.current_treatment),
                                       1))
        summary = summarize(self.past_covariates, self.past_treatments,
                            self.current_treatment)
        summary.setflags(write=False)
        object.__setattr__(self, "summary", summary)

    @classmethod
    def from_state(cls, covariate, treatment=None, upto_index=0):
        """Builds a one-point view carrying only the current state"""
        return cls(upto_index=upto_index,
                   past_treatments=np.zeros((0, 1)),
                   past_covariates=np.atleast_2d(covariate),
                   current_treatment=treatment)

    @property
    def treatment_aware(self):
        return self.current_treatment is not None

    @property
    def covariate(self):
        """Current covariate as a scalar"""
        return float(self.past_covariates[-1, 0])

    @property
    def treatment(self):
        return float(self.current_treatment[0])

    def __eq__(self, other):
        if not isinstance(other, HistoryView):
            return NotImplemented
        same_current = (
            (self.current_treatment is None and
             other.current_treatment is None) or
            (self.current_treatment is not None and
             other.current_treatment is not None and
             np.array_equal(self.current_treatment, other.current_treatment)))
        return (self.upto_index == other.upto_index and same_current and
                np.array_equal(self.past_treatments, other.past_treatments) and
                np.array_equal(self.past_covariates, other.past_covariates))

    __hash__ = None


@dataclass(frozen=True)
class Trajectory(object):
    """One subject's observed record on the fine grid"""

    grid: Partition
    treatment: np.ndarray
    covariate: np.ndarray
    event_time: float = np.inf
    censor_time: float = np.inf
    outcome: float = np.nan

    def __post_init__(self):
        object.__setattr__(self, "treatment", _frozen(self.treatment, 2))
        object.__setattr__(self, "covariate", _frozen(self.covariate, 2))
        n_times = len(self.grid)
        if (self.treatment.shape[0] != n_times or
                self.covariate.shape[0] != n_times):
            raise InvalidArgumentError(
                "treatment/covariate paths need %d grid values, got %d/%d"
                % (n_times, self.treatment.shape[0], self.covariate.shape[0]))
        if self.event_time <= 0 or self.censor_time <= 0:
            raise InvalidArgumentError("event and censoring times must be "
                                       "positive")
        if np.isfinite(self.censor_time) and self.event_time <= \
                self.censor_time:
            raise InvalidArgumentError("censoring time must be +inf when "
                                       "T <= C")

    @property
    def exit_time(self):
        return min(self.event_time, self.censor_time)

    @property
    def censored(self):
        return bool(np.isfinite(self.censor_time))

    @property
    def last_index(self):
        """Index of the last grid time observed before the exit time"""
        return _last_index(self.grid, self.exit_time)


def _last_index(grid, exit_time):
    times = grid.as_array()
    exit_time = np.asarray(exit_time, dtype=float)
    idx = np.searchsorted(times, exit_time, side="left") - 1
    return np.where(np.isfinite(exit_time), idx, len(times) - 1)


def history_at(tr, j, with_current=False):
    """Prefix view of a trajectory at grid index j

    :param tr: Trajectory
    :param j: grid index, 0 <= j < number of grid times
    :param with_current: include the treatment assigned at t_j
    :return HistoryView
    """
    if int(j) != j or not 0 <= j < len(tr.grid):
        raise InvalidArgumentError("grid index %r out of range [0, %d)"
                                   % (j, len(tr.grid)))
    j = int(j)
    current = tr.treatment[j] if with_current else None
    return HistoryView(upto_index=j,
                       past_treatments=tr.treatment[:j],
                       past_covariates=tr.covariate[:j + 1],
                       current_treatment=current)


class Cohort(object):
    """Array-backed collection of trajectories sharing one fine grid.

    :param grid: fine simulation Partition
    :param treatment: (n, len(grid), p) array
    :param covariate: (n, len(grid), q) array
    :param event_time: (n,) array, +inf when no terminal event was observed
    :param censor_time: (n,) array, +inf when uncensored
    :param outcome: (n,) array of nu values, nan when censored
    :param decisions: optional Partition of treatment redraw times
    """

    def __init__(self, grid, treatment, covariate, event_time, censor_time,
                 outcome, decisions=None):
        self.grid = grid
        self.treatment = _frozen(treatment, 3)
        self.covariate = _frozen(covariate, 3)
        self.event_time = _frozen(event_time, 1)
        self.censor_time = _frozen(censor_time, 1)
        self.outcome = _frozen(outcome, 1)
        self.decisions = decisions
        n = self.treatment.shape[0]
        for name in ("covariate", "event_time", "censor_time", "outcome"):
            if getattr(self, name).shape[0] != n:
                raise InvalidArgumentError("cohort field %s has %d subjects, "
                                           "expected %d"
                                           % (name,
                                              getattr(self, name).shape[0],
                                              n))
        if self.treatment.shape[1] != len(grid) or \
                self.covariate.shape[1] != len(grid):
            raise InvalidArgumentError("cohort paths do not match the grid")

    def __len__(self):
        return self.treatment.shape[0]

    def __getitem__(self, i):
        return Trajectory(grid=self.grid,
                          treatment=self.treatment[i],
                          covariate=self.covariate[i],
                          event_time=float(self.event_time[i]),
                          censor_time=float(self.censor_time[i]),
                          outcome=float(self.outcome[i]))

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    @property
    def exit_time(self):
        return np.minimum(self.event_time, self.censor_time)

    @property
    def censored(self):
        return np.isfinite(self.censor_time)

    @property
    def last_index(self):
        return _last_index(self.grid, self.exit_time)

    def censored_fraction(self):
        return float(np.mean(self.censored))

    def outcome_mean(self):
        """Mean and standard error of nu among uncensored subjects"""
        values = self.outcome[~self.censored]
        return float(np.mean(values)), float(np.std(values, ddof=1) /
                                             np.sqrt(len(values)))
