"""Network-aided detection of a latent sentiment bit over an Ising prior."""

from .bounds import (BoundResult, ExponentPoint, beta_of_b, chernoff_iid_oracle,
                     exponent_iid, exponent_lower_bound, log_objective_A, pe_upper_bound)
from .channel import epsilon_from_pbsc, log_likelihood_y_given_x, pbsc_from_epsilon, transmit
from .detector import DetectionResult, log_likelihood_ratio, majority_detect, map_detect
from .graph import (GraphError, Network, from_edge_list, make_complete, make_network,
                    make_ring, make_star, make_topology)
from .ising import (ModelParams, SizeGuardError, edge_sum, energy, log_conditional_prob,
                    log_partition, log_Z_brute, log_Z_complete, log_Z_ring, log_Z_star)
from .mc import ErrorEstimate, compare_detectors, estimate_pe, exact_error_probability
from .sampler import SampleBatch, sample_exact, sample_gibbs, sample_t

__version__ = "0.1.0"

__all__ = [
    "BoundResult", "DetectionResult", "ErrorEstimate", "ExponentPoint", "GraphError",
    "ModelParams", "Network", "SampleBatch", "SizeGuardError",
    "beta_of_b", "chernoff_iid_oracle", "compare_detectors", "edge_sum", "energy",
    "epsilon_from_pbsc", "estimate_pe", "exact_error_probability", "exponent_iid",
    "exponent_lower_bound", "from_edge_list", "log_conditional_prob", "log_likelihood_ratio",
    "log_likelihood_y_given_x", "log_objective_A", "log_partition", "log_Z_brute",
    "log_Z_complete", "log_Z_ring", "log_Z_star", "majority_detect", "make_complete",
    "make_network", "make_ring", "make_star", "make_topology", "map_detect",
    "pbsc_from_epsilon", "pe_upper_bound", "sample_exact", "sample_gibbs", "sample_t",
    "transmit",
]
