"""Simulation and estimation of treatment regimes on longitudinal data
observed on a fine time grid."""
__version__ = "0.1.0"
