"""Experiment configuration read from TOML or JSON."""
import json
import logging
import os
try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field
from typing import Any, Optional

from contregime.dgp.base_dgp import parse_knob
from contregime.dgp.canonical import dgp_from_config
from contregime.errors import ConfigError, ContRegimeError
from contregime.estimators.nuisance import LINKS
from contregime.regimes import regime_from_config
from contregime.timegrid.partition import make_partition

logger = logging.getLogger(__name__)

ESTIMATORS = ("gcomp", "ipw", "dr")
ORACLE_METHODS = ("auto", "exact", "simulate")
DEFAULT_THRESHOLD = 3.0
DEFAULT_MULTIPLIER = 10
_KEYS = {"dgp", "regime", "decisions", "k_schedule", "n", "replications",
         "seed", "estimators", "nuisance", "oracle", "dr_grid", "threshold",
         "weight_cap", "n_jobs", "output_dir"}


@dataclass(frozen=True)
class OracleConfig(object):
    method: str = "auto"
    multiplier: int = DEFAULT_MULTIPLIER
    n: Optional[int] = None
    budget: int = 4096


@dataclass(frozen=True)
class GridConfig(object):
    transition_knob: Optional[str] = None
    propensity_knob: Optional[str] = None


@dataclass(frozen=True)
class ExperimentConfig(object):
    """Validated experiment. ``raw`` echoes the parsed file."""

    dgp: Any
    regime: Any
    decisions: int
    n: int
    replications: int = 1
    seed: int = 0
    estimators: tuple = ESTIMATORS
    nuisance: dict = field(default_factory=dict)
    link: str = "identity"
    degree: Optional[int] = None
    k_schedule: tuple = ()
    oracle: OracleConfig = OracleConfig()
    dr_grid: GridConfig = GridConfig()
    threshold: float = DEFAULT_THRESHOLD
    weight_cap: Optional[float] = None
    n_jobs: int = 1
    output_dir: str = "."
    raw: dict = field(default_factory=dict)

    @property
    def partition(self):
        return make_partition(self.dgp.fine_grid.horizon, self.decisions)

    def provenance(self, estimator):
        return self.nuisance.get(estimator, "exact")

    def echo(self):
        """Config as run, for reports"""
        echo = dict(self.raw)
        echo["seed"] = self.seed
        echo["output_dir"] = self.output_dir
        return echo


def load_config(path):
    """Reads a TOML or JSON file into a dict, chosen by suffix"""
    suffix = os.path.splitext(path)[1].lower()
    try:
        if suffix == ".toml":
            with open(path, "rb") as handle:
                return tomllib.load(handle)
        if suffix == ".json":
            with open(path) as handle:
                return json.load(handle)
    except (OSError, ValueError) as error:
        raise ConfigError([(path, str(error))])
    raise ConfigError([(path, "config files must end in .toml or .json")])


class _Problems(object):
    """Collects (field path, message) pairs"""

    def __init__(self):
        self.items = []

    def add(self, path, message):
        self.items.append((path, message))

    def check(self, path, fn, *args):
        try:
            return fn(*args)
        except ContRegimeError as error:
            self.add(path, error.msg)
        except (TypeError, ValueError, KeyError) as error:
            self.add(path, str(error))
        return None


def _integer(problems, raw, key, minimum, default=None):
    value = raw.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, int) or \
            value < minimum:
        problems.add(key, "must be an integer >= %d, got %r"
                     % (minimum, value))
        return None
    return value


def _positive(problems, raw, key, default):
    value = raw.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)) or \
            not value > 0:
        problems.add(key, "must be a positive number, got %r" % (value,))
        return None
    return float(value)


def _nuisance(problems, block):
    provenance = {}
    options = {"link": "identity", "degree": None}
    for key, value in block.items():
        path = "nuisance.%s" % key
        if key == "link":
            if value not in LINKS:
                problems.add(path, "unknown link %r" % (value,))
            else:
                options["link"] = value
        elif key == "degree":
            if not isinstance(value, int) or value < 1:
                problems.add(path, "must be a positive integer")
            else:
                options["degree"] = value
        elif key not in ESTIMATORS:
            problems.add(path, "unknown estimator")
        elif value in ("exact", "fitted"):
            provenance[key] = value
        elif isinstance(value, str) and value.startswith("misspec:"):
            if problems.check(path, parse_knob,
                              value[len("misspec:"):]) is not None:
                provenance[key] = value
        else:
            problems.add(path, "expected exact, fitted or misspec:<knob>, "
                               "got %r" % (value,))
    return provenance, options


def _oracle(problems, block):
    unknown = set(block) - {"method", "multiplier", "n", "budget"}
    for key in sorted(unknown):
        problems.add("oracle.%s" % key, "unknown key")
    method = block.get("method", "auto")
    if method not in ORACLE_METHODS:
        problems.add("oracle.method", "must be one of %s, got %r"
                     % ("|".join(ORACLE_METHODS), method))
        method = "auto"
    values = {}
    for key, default, minimum in (("multiplier", DEFAULT_MULTIPLIER, 1),
                                  ("n", None, 1), ("budget", 4096, 1)):
        value = block.get(key, default)
        if value is not None and (isinstance(value, bool) or
                                  not isinstance(value, int) or
                                  value < minimum):
            problems.add("oracle.%s" % key, "must be a positive integer")
            value = default
        values[key] = value
    return OracleConfig(method=method, **values)


def _grid(problems, block):
    unknown = set(block) - {"transition_knob", "propensity_knob"}
    for key in sorted(unknown):
        problems.add("dr_grid.%s" % key, "unknown key")
    knobs = {}
    for key in ("transition_knob", "propensity_knob"):
        if key in block:
            if problems.check("dr_grid.%s" % key, parse_knob,
                              block[key]) is not None:
                knobs[key] = block[key]
    return GridConfig(**knobs)


def parse_config(raw, seed=None, output_dir=None):
    """Validates a config dict

    Every problem is collected before raising.

    :param raw: dict read by load_config
    :param seed: overrides raw["seed"] when given
    :param output_dir: overrides raw["output_dir"] when given
    :return ExperimentConfig
    :raises ConfigError: listing (field path, message) for every problem
    """
    problems = _Problems()
    for key in sorted(set(raw) - _KEYS):
        problems.add(key, "unknown key")
    spec = regime = None
    if not isinstance(raw.get("dgp"), dict):
        problems.add("dgp", "missing dgp block")
    else:
        spec = problems.check("dgp", dgp_from_config, raw["dgp"])
    if not isinstance(raw.get("regime"), dict):
        problems.add("regime", "missing regime block")
    else:
        regime = problems.check("regime.variant", regime_from_config,
                                raw["regime"])
    if spec is not None and regime is not None:
        problems.check("regime", regime.validate, spec)

    decisions = _integer(problems, raw, "decisions", 1)
    schedule = raw.get("k_schedule", ())
    if not isinstance(schedule, (list, tuple)) or \
            not all(isinstance(k, int) and k >= 1 for k in schedule):
        problems.add("k_schedule", "must be a list of positive integers")
        schedule = ()
    if spec is not None:
        if decisions is None and "decisions" not in raw:
            decisions = schedule[0] if schedule else spec.fine_grid.K
        for path, K in [("decisions", decisions)] + [
                ("k_schedule[%d]" % i, k) for i, k in enumerate(schedule)]:
            if K is not None:
                problems.check(path, lambda k: make_partition(
                    spec.fine_grid.horizon, k).indices_in(spec.fine_grid), K)

    n = _integer(problems, raw, "n", 2, default=1000)
    replications = _integer(problems, raw, "replications", 1, default=1)
    if seed is None:
        seed = _integer(problems, raw, "seed", 0, default=0)
    estimators = raw.get("estimators", list(ESTIMATORS))
    if not isinstance(estimators, (list, tuple)):
        problems.add("estimators", "must be a list")
        estimators = []
    for i, name in enumerate(estimators):
        if name not in ESTIMATORS:
            problems.add("estimators[%d]" % i, "unknown estimator %r"
                         % (name,))
    provenance, options = _nuisance(problems, raw.get("nuisance", {}))
    oracle = _oracle(problems, raw.get("oracle", {}))
    grid = _grid(problems, raw.get("dr_grid", {}))
    threshold = _positive(problems, raw, "threshold", DEFAULT_THRESHOLD)
    weight_cap = _positive(problems, raw, "weight_cap", None)
    n_jobs = raw.get("n_jobs", 1)
    if isinstance(n_jobs, bool) or not isinstance(n_jobs, int) or \
            n_jobs == 0:
        problems.add("n_jobs", "must be a non-zero integer")
    if problems.items:
        raise ConfigError(problems.items)
    return ExperimentConfig(
        dgp=spec, regime=regime, decisions=decisions, n=n,
        replications=replications, seed=seed, estimators=tuple(estimators),
        nuisance=provenance, link=options["link"], degree=options["degree"],
        k_schedule=tuple(schedule), oracle=oracle, dr_grid=grid,
        threshold=threshold, weight_cap=weight_cap, n_jobs=n_jobs,
        output_dir=output_dir or raw.get("output_dir", "."), raw=dict(raw))


def read_config(path, seed=None, output_dir=None):
    """load_config followed by parse_config"""
    cfg = parse_config(load_config(path), seed=seed, output_dir=output_dir)
    logger.info("loaded %s: %s under %s, K=%d, n=%d, R=%d", path,
                cfg.dgp.kind, cfg.regime, cfg.decisions, cfg.n,
                cfg.replications)
    return cfg
