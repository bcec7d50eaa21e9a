from contregime.harness.config import ExperimentConfig, GridConfig, \
    OracleConfig, load_config, parse_config, read_config
from contregime.harness.diagnostics import diagnose
from contregime.harness.dr_grid import dr_grid
from contregime.harness.experiment import ReportBundle, aggregate, \
    attach_oracle, run_experiment

__all__ = ["ExperimentConfig", "GridConfig", "OracleConfig", "load_config",
           "parse_config", "read_config", "diagnose", "dr_grid",
           "ReportBundle", "aggregate", "attach_oracle", "run_experiment"]
