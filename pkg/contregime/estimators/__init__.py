from contregime.estimators.functionals import Estimate, dr_estimate, \
    gcomp_estimate, ipw_estimate
from contregime.estimators.nuisance import NuisanceSet, make_nuisance
from contregime.estimators.panel import DecisionPanel
from contregime.estimators.residuals import ResidualCheck, \
    ee_residual_gcomp, ee_residual_ipw, gcomp_battery, ipw_battery
from contregime.estimators.value_process import ExactValueProcess, \
    FittedValueProcess, UserValueProcess, ValueProcess, build_H
from contregime.estimators.weights import WeightProcess, build_Q

__all__ = ["Estimate", "dr_estimate", "gcomp_estimate", "ipw_estimate",
           "NuisanceSet", "make_nuisance", "DecisionPanel", "ResidualCheck",
           "ee_residual_gcomp", "ee_residual_ipw", "gcomp_battery",
           "ipw_battery", "ExactValueProcess", "FittedValueProcess",
           "UserValueProcess", "ValueProcess", "build_H", "WeightProcess",
           "build_Q"]
