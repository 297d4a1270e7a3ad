"""1-Wasserstein distance between persistence diagrams."""

from .bounds import (condensation_epsilon, rwmd_lower_bound, spanner_stretch,
                     theoretical_error_bound, wcd_lower_bound)
from .condense import CondensedPair, delta_condense
from .distance import (W1Report, approx_w1, approx_w1_report, exact_w1, exact_w1_report,
                       weighted_exact_w1)
from .network import TransshipmentNetwork, build_bipartite_network, build_transshipment_network
from .network_simplex import MCFResult, iteration_cap, network_simplex_mcf
from .wspd import SplitTree, WSPDSpanner, build_split_tree, build_wspd_spanner, wspd_pairs

__all__ = [
    "CondensedPair",
    "MCFResult",
    "SplitTree",
    "TransshipmentNetwork",
    "W1Report",
    "WSPDSpanner",
    "approx_w1",
    "approx_w1_report",
    "build_bipartite_network",
    "build_split_tree",
    "build_transshipment_network",
    "build_wspd_spanner",
    "condensation_epsilon",
    "delta_condense",
    "exact_w1",
    "exact_w1_report",
    "iteration_cap",
    "network_simplex_mcf",
    "rwmd_lower_bound",
    "spanner_stretch",
    "theoretical_error_bound",
    "wcd_lower_bound",
    "weighted_exact_w1",
    "wspd_pairs",
]
