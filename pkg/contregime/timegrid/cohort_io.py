"""Cohort CSV exchange.

One row per (subject, grid time) with columns subject_id, t, a_1..a_p,
l_1..l_q, event_time, censor_time, outcome.
"""
import logging

import numpy as np
from astropy.io import ascii
from astropy.table import Table

from contregime.errors import InvalidArgumentError
from contregime.timegrid.partition import Partition
from contregime.timegrid.trajectory import Cohort

logger = logging.getLogger(__name__)

FLOAT_FORMAT = ".17g"


def cohort_to_table(cohort):
    """Long-format astropy Table of a cohort"""
    n, n_times, p = cohort.treatment.shape
    q = cohort.covariate.shape[2]
    table = Table()
    table["subject_id"] = np.repeat(np.arange(n), n_times)
    table["t"] = np.tile(cohort.grid.as_array(), n)
    for i in range(p):
        table["a_%d" % (i + 1)] = cohort.treatment[:, :, i].ravel()
    for i in range(q):
        table["l_%d" % (i + 1)] = cohort.covariate[:, :, i].ravel()
    table["event_time"] = np.repeat(cohort.event_time, n_times)
    table["censor_time"] = np.repeat(cohort.censor_time, n_times)
    table["outcome"] = np.repeat(cohort.outcome, n_times)
    return table


def write_cohort_csv(cohort, path):
    """Writes a cohort to path in the long CSV layout"""
    table = cohort_to_table(cohort)
    formats = dict((name, FLOAT_FORMAT) for name in table.colnames
                   if name != "subject_id")
    table.write(path, format="ascii.csv", formats=formats, overwrite=True)
    logger.info("wrote %d subjects x %d grid times to %s", len(cohort),
                len(cohort.grid), path)


def _columns(table, prefix):
    names = [name for name in table.colnames if name.startswith(prefix)]
    return sorted(names, key=lambda name: int(name[len(prefix):]))


def table_to_cohort(table, decisions=None):
    """Rebuilds a Cohort from the long-format table"""
    for name in ("subject_id", "t", "event_time", "censor_time", "outcome"):
        if name not in table.colnames:
            raise InvalidArgumentError("cohort table lacks column %r" % name)
    a_cols, l_cols = _columns(table, "a_"), _columns(table, "l_")
    if not a_cols or not l_cols:
        raise InvalidArgumentError("cohort table needs a_* and l_* columns")
    table = table.copy()
    table.sort(["subject_id", "t"])
    subjects = np.unique(np.asarray(table["subject_id"]))
    n = len(subjects)
    if len(table) % n:
        raise InvalidArgumentError("subjects have unequal numbers of rows")
    n_times = len(table) // n
    times = np.asarray(table["t"], dtype=float).reshape(n, n_times)
    if not np.all(times == times[0]):
        raise InvalidArgumentError("all subjects must share one grid")

    def paths(cols):
        return np.stack([np.asarray(table[c], dtype=float).reshape(n, n_times)
                         for c in cols], axis=-1)

    def per_subject(name):
        return np.asarray(table[name], dtype=float).reshape(n, n_times)[:, 0]

    return Cohort(grid=Partition(tuple(times[0])),
                  treatment=paths(a_cols),
                  covariate=paths(l_cols),
                  event_time=per_subject("event_time"),
                  censor_time=per_subject("censor_time"),
                  outcome=per_subject("outcome"),
                  decisions=decisions)


def read_cohort_csv(path, decisions=None):
    """Reads a cohort written by write_cohort_csv"""
    table = ascii.read(path, format="csv", fast_reader=False)
    logger.info("read %d rows from %s", len(table), path)
    return table_to_cohort(table, decisions=decisions)
