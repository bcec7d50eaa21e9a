from contregime.dgp.base_dgp import Knob, OutcomeFunctional, parse_knob
from contregime.dgp.canonical import bin3, cens3, dgp_from_config, ou1
from contregime.dgp.discrete_chain import DiscreteChainDgp
from contregime.dgp.euler_diffusion import EulerDiffusionDgp
from contregime.dgp.hazards import CensoringHazard, DiscreteHazard
from contregime.dgp.simulation import simulate_observed, \
    simulate_outcomes, simulate_paths

__all__ = ["Knob", "OutcomeFunctional", "parse_knob", "bin3", "cens3", "ou1",
           "dgp_from_config", "DiscreteChainDgp", "EulerDiffusionDgp",
           "CensoringHazard", "DiscreteHazard", "simulate_observed",
           "simulate_outcomes", "simulate_paths"]
