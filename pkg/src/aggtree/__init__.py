"""Minimum-energy data aggregation trees for sensor networks, with and without relay nodes."""

from .algorithms import (
    ALGORITHMS,
    solve,
    solve_mecat_rn_alg2,
    solve_mecat_rn_alg3,
    solve_mecat_spt,
    solve_rn_spt,
    solve_spanning_baseline,
    solve_steiner,
)
from .cnd import CndInstance, CndRoute, cnd_cost, salman_route, shortest_paths_route
from .cost import CostParams, RoutingTree, check_budget, descendant_loads, packets_sent, tree_cost
from .graph import Network, WeightedGraph, hop_distances, metric_closure, minimum_spanning_tree, shortest_path
from .oracle import brute_force_mecat, brute_force_mecat_rn, exact_optimum_milp, lower_bound
from .trees import LastParams, last_tree, shortest_path_tree, steiner_tree_2approx

__version__ = "0.1.0"
