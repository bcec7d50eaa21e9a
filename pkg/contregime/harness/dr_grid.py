"""Doubly robust misspecification grid."""
import logging

import numpy as np
from joblib import Parallel, delayed

from contregime.dgp.base_dgp import parse_knob
from contregime.dgp.simulation import simulate_observed
from contregime.errors import ConfigError, ScopeError
from contregime.estimators.functionals import dr_estimate
from contregime.estimators.nuisance import KNOB_COMPONENT, NuisanceSet
from contregime.estimators.panel import DecisionPanel
from contregime.estimators.value_process import build_H
from contregime.estimators.weights import build_Q
from contregime.harness.experiment import Z95, ReportBundle, \
    attach_oracle, jsonable, replication_seed, rows_to_table, \
    summarize_points

logger = logging.getLogger(__name__)

CELLS = (("correct", "correct"), ("wrong", "correct"), ("correct", "wrong"),
         ("wrong", "wrong"))
CELL_COLUMNS = ("replication", "seed", "H", "Q", "point", "se", "covered")
GRID_COLUMNS = ("H", "Q", "replications", "mean", "bias", "sd", "se_mean",
                "rmse", "coverage", "tolerance", "unbiased", "status")


def _perturbed(spec, knob, role):
    knob = parse_knob(knob)
    component = None if knob.name in KNOB_COMPONENT else role
    return NuisanceSet.exact(spec).with_knob(spec, knob, component)


def dr_grid(cfg):
    """2 x 2 grid of doubly robust estimates, H and Q each correct or wrong

    The H side is perturbed by cfg.dr_grid.transition_knob, the Q side by
    cfg.dr_grid.propensity_knob. The grid passes when the three cells with
    at least one correct nuisance are unbiased at the configured threshold;
    the both-wrong cell is reported as ``biased`` when it exceeds it.

    :param cfg: ExperimentConfig
    :return ReportBundle with one aggregate row per cell
    """
    problems = [("dr_grid.%s" % key, "required for the doubly robust grid")
                for key in ("transition_knob", "propensity_knob")
                if getattr(cfg.dr_grid, key) is None]
    if problems:
        raise ConfigError(problems)
    g = cfg.regime
    if g.depends_on_actual:
        raise ScopeError("the doubly robust grid needs a prespecified regime, "
                         "%s depends on the observed treatment" % g)
    spec = cfg.dgp
    decisions = cfg.partition
    exact = NuisanceSet.exact(spec)
    values = {"correct": build_H(exact, g, decisions),
              "wrong": build_H(_perturbed(spec, cfg.dr_grid.transition_knob,
                                          "transition"), g, decisions)}
    weights = {"correct": exact,
               "wrong": _perturbed(spec, cfg.dr_grid.propensity_knob,
                                   "propensity")}
    oracle = attach_oracle(cfg)

    def replication(r):
        seed = replication_seed(cfg, r)
        panel = DecisionPanel(simulate_observed(spec, decisions, cfg.n, seed),
                              decisions)
        Q = dict((side, build_Q(nuis, g, decisions, panel, cfg.weight_cap))
                 for side, nuis in weights.items())
        rows = []
        for h_side, q_side in CELLS:
            estimate = dr_estimate(values[h_side], Q[q_side], g, decisions,
                                   panel)
            rows.append({"replication": r, "seed": seed, "H": h_side,
                         "Q": q_side, "point": estimate.point,
                         "se": estimate.se,
                         "covered": bool(abs(estimate.point - oracle.value)
                                         <= Z95 * estimate.se)})
        return rows

    results = Parallel(n_jobs=cfg.n_jobs, prefer="threads")(
        delayed(replication)(r) for r in range(cfg.replications))
    estimates = rows_to_table([row for part in results for row in part],
                              CELL_COLUMNS)
    cells = []
    for h_side, q_side in CELLS:
        mask = (np.asarray(estimates["H"]).astype(str) == h_side) & \
               (np.asarray(estimates["Q"]).astype(str) == q_side)
        summary = summarize_points(estimates["point"][mask],
                                   estimates["se"][mask], oracle,
                                   cfg.threshold)
        summary.update(H=h_side, Q=q_side, unbiased=summary["passed"],
                       coverage=float(np.mean(estimates["covered"][mask])),
                       status="ok" if summary["passed"] else "biased")
        cells.append(summary)
        logger.info("cell H=%s Q=%s: bias %.5f (tolerance %.5f) %s", h_side,
                    q_side, summary["bias"], summary["tolerance"],
                    summary["status"])
    aggregates = rows_to_table(cells, GRID_COLUMNS)
    passed = all(cell["unbiased"] for cell in cells
                 if (cell["H"], cell["Q"]) != ("wrong", "wrong"))
    return ReportBundle(kind="dr_grid", estimates=estimates,
                        aggregates=aggregates, oracle=oracle,
                        config=jsonable(cfg.echo()), passed=passed,
                        extra={"pattern": [cell["status"] for cell in cells]})
