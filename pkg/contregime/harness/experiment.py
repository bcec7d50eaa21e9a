"""Replicated experiments, oracle attachment and report files."""
import json
import logging
import os
from dataclasses import dataclass, field

import numpy as np
from astropy.table import Table
from joblib import Parallel, delayed

from contregime import streams
from contregime.dgp.simulation import simulate_observed
from contregime.errors import PositivityError, ResourceError, ScopeError, \
    UnsupportedError
from contregime.estimators.functionals import LOW_ESS_FRACTION, \
    dr_estimate, gcomp_estimate, ipw_estimate
from contregime.estimators.nuisance import make_nuisance
from contregime.estimators.panel import DecisionPanel
from contregime.estimators.value_process import build_H
from contregime.estimators.weights import build_Q
from contregime.oracle.counterfactual import simulate_counterfactual
from contregime.oracle.enumeration import enumerate_exact

logger = logging.getLogger(__name__)

FLOAT_FORMAT = ".17g"
EXACT_TOLERANCE = 1e-10
Z95 = 1.959963984540054
ORACLE_STREAM = 0
REPLICATION_STREAM = 1


@dataclass(frozen=True)
class OracleValue(object):
    value: float
    se: float
    method: str
    n: int = 0

    def to_dict(self):
        return {"value": self.value, "se": self.se, "method": self.method,
                "n": self.n}


def attach_oracle(cfg):
    """Ground truth for cfg's regime

    ``auto`` prefers exact enumeration and falls back to a counterfactual
    simulation multiplier times the experiment's n.
    """
    method = cfg.oracle.method
    decisions = cfg.partition
    if method in ("auto", "exact"):
        try:
            value = enumerate_exact(cfg.dgp, cfg.regime, decisions,
                                    budget=cfg.oracle.budget)
            logger.info("oracle by enumeration: %.12g", value)
            return OracleValue(value=value, se=0.0, method="exact")
        except (UnsupportedError, ResourceError) as error:
            if method == "exact":
                raise
            logger.info("enumeration unavailable (%s), simulating the oracle",
                        error.msg)
    n = cfg.oracle.n or cfg.oracle.multiplier * cfg.n
    sample = simulate_counterfactual(
        cfg.dgp, cfg.regime, decisions, n,
        streams.derive_seed(cfg.seed, ORACLE_STREAM), n_jobs=cfg.n_jobs)
    logger.info("oracle by simulation (n=%d): %.6f +- %.6f", n, sample.mean,
                sample.se)
    return OracleValue(value=sample.mean, se=sample.se, method="simulate",
                       n=n)


def replication_seed(cfg, r):
    return streams.derive_seed(cfg.seed, REPLICATION_STREAM, r)


class EstimatorRunner(object):
    """Runs the configured estimators on cohorts of one experiment.

    Exact value processes do not depend on the cohort and are built once.
    """

    def __init__(self, cfg):
        self.cfg = cfg
        self.decisions = cfg.partition
        self._values = {}

    def nuisance(self, provenance, panel):
        cfg = self.cfg
        return make_nuisance(cfg.dgp, provenance, panel, cfg.link, cfg.degree)

    def value_process(self, nuis, cohort):
        if nuis.fitted_transition:
            return build_H(nuis, self.cfg.regime, self.decisions, cohort)
        key = nuis.provenance
        if key not in self._values:
            self._values[key] = build_H(nuis, self.cfg.regime,
                                        self.decisions)
        return self._values[key]

    def run(self, estimator, cohort):
        """Estimate of one estimator on one cohort"""
        cfg = self.cfg
        g = cfg.regime
        if estimator == "dr" and g.depends_on_actual:
            raise ScopeError("dr needs a prespecified regime, got %s" % g)
        panel = DecisionPanel(cohort, self.decisions)
        nuis = self.nuisance(cfg.provenance(estimator), panel)
        if estimator == "gcomp":
            H = self.value_process(nuis, cohort)
            Q = None
            if nuis.fitted_transition:
                try:
                    Q = build_Q(nuis, g, self.decisions, panel)
                except PositivityError:
                    logger.debug("no weights for %s, baseline standard "
                                 "error only", g)
            return gcomp_estimate(H, cohort, Q)
        Q = build_Q(nuis, g, self.decisions, panel, cfg.weight_cap)
        if estimator == "ipw":
            return ipw_estimate(Q, cohort)
        H = self.value_process(nuis, cohort)
        return dr_estimate(H, Q, g, self.decisions, panel)


def _estimate_row(r, seed, name, provenance, estimate, oracle):
    diagnostics = estimate.diagnostics
    if estimate.se > 0:
        covered = abs(estimate.point - oracle.value) <= Z95 * estimate.se
    else:
        covered = abs(estimate.point - oracle.value) <= EXACT_TOLERANCE
    return {"replication": r, "seed": seed, "estimator": name,
            "nuisance": provenance, "point": estimate.point,
            "se": estimate.se, "n": estimate.n, "K": estimate.K,
            "ess": diagnostics.get("ess", np.nan),
            "max_weight": diagnostics.get("max_weight", np.nan),
            "zero_share": diagnostics.get("zero_share", np.nan),
            "capped": diagnostics.get("capped", 0),
            "covered": bool(covered)}


ESTIMATE_COLUMNS = ("replication", "seed", "estimator", "nuisance", "point",
                    "se", "n", "K", "ess", "max_weight", "zero_share",
                    "capped", "covered")
AGGREGATE_COLUMNS = ("estimator", "nuisance", "replications", "mean", "bias",
                     "sd", "se_mean", "rmse", "mean_se", "coverage",
                     "tolerance", "passed")


def rows_to_table(rows, columns):
    if not rows:
        return Table(names=columns)
    return Table([[row[c] for row in rows] for c in columns], names=columns)


def summarize_points(points, ses, oracle, threshold):
    """Bias, spread and pass flag of a set of replicated estimates

    The pass threshold folds the oracle's own standard error into the
    standard error of the mean.
    """
    points = np.asarray(points, dtype=float)
    ses = np.asarray(ses, dtype=float)
    R = len(points)
    mean = float(np.mean(points))
    sd = float(np.std(points, ddof=1)) if R > 1 else 0.0
    se_mean = sd / np.sqrt(R) if R > 1 else float(ses[0])
    bias = mean - oracle.value
    tolerance = threshold * float(np.hypot(se_mean, oracle.se)) + \
        EXACT_TOLERANCE
    return {"replications": R, "mean": mean, "bias": bias, "sd": sd,
            "se_mean": float(se_mean),
            "rmse": float(np.sqrt(np.mean((points - oracle.value) ** 2))),
            "mean_se": float(np.mean(ses)),
            "tolerance": tolerance,
            "passed": bool(abs(bias) <= tolerance)}


def aggregate(estimates, oracle, threshold):
    """Aggregate rows, one per (estimator, nuisance), from the
    per-replication table"""
    rows = []
    seen = []
    for row in estimates:
        key = (str(row["estimator"]), str(row["nuisance"]))
        if key not in seen:
            seen.append(key)
    for name, provenance in seen:
        mask = (np.asarray(estimates["estimator"]).astype(str) == name) & \
               (np.asarray(estimates["nuisance"]).astype(str) == provenance)
        summary = summarize_points(estimates["point"][mask],
                                   estimates["se"][mask], oracle, threshold)
        summary.update(estimator=name, nuisance=provenance,
                       coverage=float(np.mean(estimates["covered"][mask])))
        rows.append(summary)
    return rows_to_table(rows, AGGREGATE_COLUMNS)


def low_ess_estimators(estimates):
    """Estimators with a replication whose effective sample size fell below
    LOW_ESS_FRACTION of its cohort"""
    low = set()
    for name, ess, n in zip(estimates["estimator"], estimates["ess"],
                            estimates["n"]):
        if ess < LOW_ESS_FRACTION * n:
            low.add(str(name))
    return sorted(low)


@dataclass
class ReportBundle(object):
    """Tables, oracle and config echo of one run.

    ``estimates`` holds one row per replication and estimator (or grid cell,
    or check), ``aggregates`` the rows derived from it.
    """

    kind: str
    estimates: Table
    aggregates: Table
    oracle: OracleValue = None
    config: dict = field(default_factory=dict)
    skipped: list = field(default_factory=list)
    passed: bool = True
    extra: dict = field(default_factory=dict)

    @property
    def protocol_deviation(self):
        return "capped" in self.estimates.colnames and \
            bool(np.any(np.asarray(self.estimates["capped"]) > 0))

    def summary(self):
        summary = {"kind": self.kind, "passed": self.passed,
                   "protocol_deviation": self.protocol_deviation,
                   "config": self.config,
                   "skipped": [list(s) for s in self.skipped],
                   "aggregates": [jsonable(dict(zip(row.colnames, row)))
                                  for row in self.aggregates]}
        if self.oracle is not None:
            summary["oracle"] = self.oracle.to_dict()
        summary.update(self.extra)
        return summary

    def write(self, out_dir):
        """Writes <kind>_estimates.csv, <kind>_aggregates.csv and
        <kind>_report.json into out_dir

        :return list of written paths
        """
        os.makedirs(out_dir, exist_ok=True)
        paths = []
        for name, table in (("estimates", self.estimates),
                            ("aggregates", self.aggregates)):
            path = os.path.join(out_dir, "%s_%s.csv" % (self.kind, name))
            write_table(table, path)
            paths.append(path)
        path = os.path.join(out_dir, "%s_report.json" % self.kind)
        with open(path, "w") as handle:
            json.dump(self.summary(), handle, indent=2, sort_keys=True)
            handle.write("\n")
        paths.append(path)
        logger.info("wrote %s", ", ".join(paths))
        return paths


def jsonable(value):
    if isinstance(value, dict):
        return dict((str(k), jsonable(v)) for k, v in value.items())
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.str_):
        return str(value)
    return value


def write_table(table, path):
    formats = dict((name, FLOAT_FORMAT) for name in table.colnames
                   if table[name].dtype.kind == "f")
    table.write(path, format="ascii.csv", formats=formats, overwrite=True)


def run_experiment(cfg):
    """Runs cfg.replications replications of every configured estimator

    Each replication simulates a fresh observed cohort from its own keyed
    seed. Estimators outside their scope (dependent regime for dr, missing
    density ratio for ipw and dr) are skipped with a warning.

    :param cfg: ExperimentConfig
    :return ReportBundle
    """
    oracle = attach_oracle(cfg)
    runner = EstimatorRunner(cfg)
    skipped = []

    def replication(r):
        seed = replication_seed(cfg, r)
        cohort = simulate_observed(cfg.dgp, runner.decisions, cfg.n, seed)
        rows, lost = [], []
        for name in cfg.estimators:
            try:
                estimate = runner.run(name, cohort)
            except (ScopeError, PositivityError) as error:
                lost.append((name, error.msg))
                continue
            rows.append(_estimate_row(r, seed, name, cfg.provenance(name),
                                      estimate, oracle))
        logger.debug("replication %d done", r)
        return rows, lost

    # exact value processes are shared, build them before fanning out
    for name in cfg.estimators:
        if name != "ipw" and cfg.provenance(name) != "fitted" and \
                not (name == "dr" and cfg.regime.depends_on_actual):
            runner.value_process(runner.nuisance(cfg.provenance(name), None),
                                 None)
    results = Parallel(n_jobs=cfg.n_jobs, prefer="threads")(
        delayed(replication)(r) for r in range(cfg.replications))
    rows = [row for part, _ in results for row in part]
    for _, lost in results:
        for item in lost:
            if item not in skipped:
                skipped.append(item)
    for name, reason in skipped:
        logger.warning("skipped %s: %s", name, reason)
    estimates = rows_to_table(rows, ESTIMATE_COLUMNS)
    aggregates = aggregate(estimates, oracle, cfg.threshold)
    bundle = ReportBundle(kind="experiment", estimates=estimates,
                          aggregates=aggregates, oracle=oracle,
                          config=jsonable(cfg.echo()), skipped=skipped)
    low = low_ess_estimators(estimates)
    if low:
        logger.warning("effective sample size below %g%% of n for %s at "
                       "K=%d; coarser decision grids (K <= 2) keep the "
                       "weights stable", 100 * LOW_ESS_FRACTION,
                       ", ".join(low), cfg.decisions)
        bundle.extra["low_ess"] = low
    bundle.passed = bool(np.all(np.asarray(aggregates["passed"]))) and \
        not bundle.protocol_deviation
    logger.info("experiment finished: %d rows, passed=%s", len(estimates),
                bundle.passed)
    return bundle
