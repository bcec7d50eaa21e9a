"""Command line interface: contregime <command> --config FILE"""
import argparse
import json
import logging
import os
import sys
from dataclasses import replace

from contregime.dgp.simulation import simulate_observed, simulate_paths
from contregime.errors import ConfigError, ContRegimeError
from contregime.harness.config import ESTIMATORS, read_config
from contregime.harness.diagnostics import diagnose
from contregime.harness.dr_grid import dr_grid
from contregime.harness.experiment import EstimatorRunner, jsonable, \
    replication_seed, run_experiment, write_table
from contregime.oracle.counterfactual import mesh_convergence
from contregime.regimes import parse_regime
from contregime.timegrid.cohort_io import read_cohort_csv, write_cohort_csv

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_ERROR = 1
EXIT_FAILED = 2


def _common(parser):
    parser.add_argument("--config", required=True,
                        help="experiment config, .toml or .json")
    parser.add_argument("--seed", type=int, default=None,
                        help="overrides the config seed")
    parser.add_argument("--out", default=None,
                        help="output directory, overrides output_dir")
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="-v for INFO, -vv for DEBUG")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="contregime",
        description="Simulation and estimation of treatment regimes on "
                    "continuous-time longitudinal data")
    commands = parser.add_subparsers(dest="command", required=True)

    simulate = commands.add_parser("simulate",
                                   help="write a simulated cohort CSV")
    _common(simulate)
    simulate.add_argument("--counterfactual", action="store_true",
                          help="simulate under the configured regime with "
                               "censoring off")

    estimate = commands.add_parser("estimate",
                                   help="one estimate as JSON")
    _common(estimate)
    estimate.add_argument("--estimator", choices=ESTIMATORS, default="dr")
    estimate.add_argument("--nuisance", default=None,
                          help="exact, fitted or misspec:<knob>")
    estimate.add_argument("--regime", default=None,
                          help='e.g. "shift(delta=0.5)" or always_treat')
    estimate.add_argument("--decisions", type=int, default=None,
                          help="number of decision intervals K")
    source = estimate.add_mutually_exclusive_group()
    source.add_argument("--input", default=None, help="cohort CSV")
    source.add_argument("--simulate", action="store_true",
                        help="simulate the cohort (default)")

    for name, text in (("run", "replicated experiment with oracle"),
                       ("converge", "mesh refinement of the oracle"),
                       ("dr-grid", "doubly robust misspecification grid"),
                       ("diagnose", "estimating-equation batteries")):
        _common(commands.add_parser(name, help=text))
    return parser


def _configure_logging(verbosity):
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity,
                                                      logging.DEBUG)
    logging.basicConfig(level=level,
                        format="%(asctime)s %(name)s %(levelname)s "
                               "%(message)s")


def _simulate(cfg, args):
    seed = replication_seed(cfg, 0)
    if args.counterfactual:
        cohort = simulate_paths(cfg.dgp, cfg.partition, cfg.n, seed,
                                regime=cfg.regime, censoring=False,
                                n_jobs=cfg.n_jobs)
    else:
        cohort = simulate_observed(cfg.dgp, cfg.partition, cfg.n, seed,
                                   n_jobs=cfg.n_jobs)
    os.makedirs(cfg.output_dir, exist_ok=True)
    write_cohort_csv(cohort, os.path.join(cfg.output_dir, "cohort.csv"))
    return EXIT_PASS


def _estimate(cfg, args):
    changes = {}
    if args.regime:
        changes["regime"] = parse_regime(args.regime)
        changes["regime"].validate(cfg.dgp)
    if args.decisions:
        changes["decisions"] = args.decisions
    if args.nuisance:
        changes["nuisance"] = dict(cfg.nuisance,
                                   **{args.estimator: args.nuisance})
    cfg = replace(cfg, **changes)
    cfg.partition.indices_in(cfg.dgp.fine_grid)
    if args.input:
        cohort = read_cohort_csv(args.input, cfg.partition)
    else:
        cohort = simulate_observed(cfg.dgp, cfg.partition, cfg.n,
                                   replication_seed(cfg, 0),
                                   n_jobs=cfg.n_jobs)
    estimate = EstimatorRunner(cfg).run(args.estimator, cohort)
    if estimate.diagnostics.get("low_ess"):
        logger.warning("effective sample size %.0f of %d at K=%d; coarser "
                       "decision grids (K <= 2) keep the weights stable",
                       estimate.diagnostics["ess"], estimate.n, estimate.K)
    result = jsonable(estimate.to_dict())
    text = json.dumps(result, indent=2, sort_keys=True)
    os.makedirs(cfg.output_dir, exist_ok=True)
    with open(os.path.join(cfg.output_dir, "estimate.json"), "w") as handle:
        handle.write(text + "\n")
    print(text)
    return EXIT_PASS


def _converge(cfg, args):
    schedule = cfg.k_schedule or (cfg.decisions,)
    table = mesh_convergence(cfg.dgp, cfg.regime, schedule, cfg.n, cfg.seed,
                             threshold=cfg.threshold, n_jobs=cfg.n_jobs)
    os.makedirs(cfg.output_dir, exist_ok=True)
    monotone = table.meta.pop("monotone")
    table.meta.clear()
    write_table(table, os.path.join(cfg.output_dir, "converge.csv"))
    if not monotone:
        logger.warning("successive differences grow beyond Monte-Carlo "
                       "noise")
    return EXIT_PASS if monotone else EXIT_FAILED


def _report(bundle_fn):
    def run(cfg, args):
        bundle = bundle_fn(cfg)
        bundle.write(cfg.output_dir)
        print(json.dumps(jsonable({"kind": bundle.kind,
                                   "passed": bundle.passed}),
                         sort_keys=True))
        return EXIT_PASS if bundle.passed else EXIT_FAILED
    return run


COMMANDS = {
    "simulate": _simulate,
    "estimate": _estimate,
    "converge": _converge,
    "run": _report(run_experiment),
    "dr-grid": _report(dr_grid),
    "diagnose": _report(diagnose),
}


def main(argv=None):
    """Entry point; returns the process exit code

    0 when every acceptance flag passes, 2 when one fails, 1 on errors.
    """
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        cfg = read_config(args.config, seed=args.seed, output_dir=args.out)
        return COMMANDS[args.command](cfg, args)
    except ConfigError as error:
        sys.stderr.write("contregime: %s\n" % error.msg)
        return EXIT_ERROR
    except (ContRegimeError, OSError) as error:
        sys.stderr.write("contregime: %s\n" % (error,))
        return EXIT_ERROR
