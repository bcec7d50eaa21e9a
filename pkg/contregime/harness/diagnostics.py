"""Estimating-equation batteries and weight martingale checks."""
import logging

import numpy as np

from contregime.dgp.simulation import simulate_observed
from contregime.errors import PositivityError
from contregime.estimators.nuisance import make_nuisance
from contregime.estimators.panel import DecisionPanel
from contregime.estimators.residuals import ResidualCheck, gcomp_battery, \
    ipw_battery
from contregime.estimators.value_process import build_H
from contregime.estimators.weights import build_Q
from contregime.harness.experiment import ReportBundle, jsonable, \
    replication_seed, rows_to_table

logger = logging.getLogger(__name__)

DEFAULT_WRONG_TRANSITION = "misspec:transition_shift(0.15)"
CHECK_COLUMNS = ("battery", "case", "mean", "se", "z", "expect_zero",
                 "passed")


def martingale_checks(Q, threshold):
    """Q(t_k) has mean one at every decision index"""
    mean, se = Q.martingale_means()
    return [ResidualCheck("martingale", "Q(t_%d)" % k, float(mean[k] - 1.0),
                          float(se[k]), True, threshold)
            for k in range(len(mean))]


def diagnose(cfg):
    """Runs the residual batteries and martingale checks on one cohort

    The value process comes from the gcomp nuisance setting, the weights
    from the ipw one, so a misspecified propensity shows up in the IPW
    battery while the g-computation battery keeps passing. An empty
    estimator list gives an empty, passing report.

    :param cfg: ExperimentConfig
    :return ReportBundle
    """
    checks, skipped = [], []
    if cfg.estimators:
        g = cfg.regime
        decisions = cfg.partition
        cohort = simulate_observed(cfg.dgp, decisions, cfg.n,
                                   replication_seed(cfg, 0),
                                   n_jobs=cfg.n_jobs)
        panel = DecisionPanel(cohort, decisions)

        def nuisance(provenance):
            return make_nuisance(cfg.dgp, provenance, panel, cfg.link,
                                 cfg.degree)
        H = build_H(nuisance(cfg.provenance("gcomp")), g, decisions, cohort)
        wrong = cfg.dr_grid.transition_knob
        H_wrong = build_H(nuisance("misspec:%s" % wrong if wrong else
                                   DEFAULT_WRONG_TRANSITION),
                          g, decisions, cohort)
        try:
            Q = build_Q(nuisance(cfg.provenance("ipw")), g, decisions, panel,
                        cfg.weight_cap)
        except PositivityError as error:
            Q = None
            skipped.append(("ipw", error.msg))
            logger.warning("weight checks skipped: %s", error.msg)
        wants_gcomp = bool({"gcomp", "dr"} & set(cfg.estimators))
        wants_ipw = bool({"ipw", "dr"} & set(cfg.estimators))
        if wants_gcomp:
            checks += gcomp_battery(H, Q if Q is not None else 1.0, g,
                                    decisions, panel, cfg.threshold)
        if wants_ipw and Q is not None:
            checks += ipw_battery(Q, H, H_wrong, g, decisions, panel,
                                  cfg.threshold)
            checks += martingale_checks(Q, cfg.threshold)
    rows = [{"battery": c.battery, "case": c.case, "mean": c.mean,
             "se": c.se, "z": c.z, "expect_zero": c.expect_zero,
             "passed": c.passed} for c in checks]
    table = rows_to_table(rows, CHECK_COLUMNS)
    failed = [c for c in checks if not c.passed]
    for c in failed:
        logger.warning("check %s/%s failed: mean %.5g, se %.3g", c.battery,
                       c.case, c.mean, c.se)
    summary = rows_to_table(
        [{"battery": name,
          "checks": sum(1 for c in checks if c.battery == name),
          "failed": sum(1 for c in failed if c.battery == name)}
         for name in sorted(set(c.battery for c in checks))],
        ("battery", "checks", "failed"))
    return ReportBundle(kind="diagnose", estimates=table, aggregates=summary,
                        config=jsonable(cfg.echo()), skipped=skipped,
                        passed=not failed)
