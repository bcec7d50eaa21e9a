from contregime.oracle.counterfactual import CounterfactualSample, \
    mesh_convergence, simulate_counterfactual
from contregime.oracle.enumeration import count_paths, enumerate_exact

__all__ = ["CounterfactualSample", "mesh_convergence",
           "simulate_counterfactual", "count_paths", "enumerate_exact"]
