"""Small hand-built cohorts shared by the estimator tests."""
import numpy as np

from contregime.dgp.canonical import bin3
from contregime.timegrid import Cohort


def three_subjects():
    """BIN3 grid; subject 0 runs to the horizon, subject 1 is censored at
    1.5, subject 2 has a terminal event at 0.5"""
    grid = bin3().fine_grid
    covariate = np.array([[0.0, 1.0, 1.0, 1.0],
                          [1.0, 0.0, 0.0, 0.0],
                          [1.0, 1.0, 1.0, 1.0]])
    treatment = np.array([[1.0, 1.0, 1.0, 1.0],
                          [1.0, 0.0, 0.0, 0.0],
                          [0.0, 0.0, 0.0, 0.0]])
    return Cohort(grid=grid, treatment=treatment, covariate=covariate,
                  event_time=np.array([np.inf, np.inf, 0.5]),
                  censor_time=np.array([np.inf, 1.5, np.inf]),
                  outcome=np.array([1.0, np.nan, 1.0]),
                  decisions=grid)


def single_path(covariate, treatment):
    """One uncensored BIN3 subject"""
    grid = bin3().fine_grid
    covariate = np.asarray(covariate, dtype=float)
    return Cohort(grid=grid, treatment=np.asarray([treatment], dtype=float),
                  covariate=covariate[np.newaxis, :],
                  event_time=np.array([np.inf]),
                  censor_time=np.array([np.inf]),
                  outcome=covariate[-1:], decisions=grid)
