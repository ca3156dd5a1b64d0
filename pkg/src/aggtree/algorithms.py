"""Aggregation-tree solvers, with and without relay nodes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .cnd import CndInstance, get_cnd_solver, validate_route
from .cost import CostParams, RoutingTree
from .graph import Edge, Network, metric_closure, path_edges
from .trees import LastParams, last_tree, shortest_path_tree, steiner_tree_2approx


def _require_no_relays(net: Network) -> None:
    if net.relays:
        raise ValueError("network has relay nodes; use MECAT_RN solvers")


def solve_mecat_spt(net: Network, params: CostParams | None = None) -> RoutingTree:
    """Shortest-path tree over all nodes; within a factor 2 of optimal."""
    _require_no_relays(net)
    return shortest_path_tree(net, net.sink)


def solve_rn_spt(net: Network, params: CostParams | None = None) -> RoutingTree:
    """Shortest-path tree pruned to the sources' root paths."""
    return shortest_path_tree(net, net.sink, span=net.sources)


def solve_steiner(net: Network, params: CostParams | None = None) -> RoutingTree:
    """2-approximate Steiner tree over sources and sink, used as a routing tree."""
    return steiner_tree_2approx(net, net.sources | {net.sink}, net.sink)


def _spt_in_subgraph(net: Network, edges: list[Edge]) -> RoutingTree:
    if not net.sources:
        return RoutingTree(net.sink, {})
    return shortest_path_tree(net, net.sink, span=net.sources, edges=edges)


def union_of_last_paths(net: Network, last: LastParams = LastParams()) -> list[Edge]:
    """Edges of every witness path behind the LAST of the hop metric closure."""
    closure = metric_closure(net, net.sources | {net.sink})
    tree = last_tree(closure.graph, net.sink, last)
    edges: set[Edge] = set()
    for child, parent in tree.edges():
        edges.update(path_edges(closure.path(child, parent)))
    return sorted(edges)


def solve_mecat_rn_alg2(net: Network, params: CostParams | None = None) -> RoutingTree:
    """Hop-metric closure, (3,2)-LAST, expand, then a shortest-path tree inside.

    Within a factor 7 of optimal.  Independent of ``q`` and report sizes.
    """
    if not net.sources:
        raise ValueError("network has no sources")
    return _spt_in_subgraph(net, union_of_last_paths(net))


def solve_mecat_rn_alg3(net: Network, params: CostParams, solver="salman") -> RoutingTree:
    """Shortest-path tree inside the union of a CND solver's paths.

    Edge lengths are set to ``tx + rx``; a lambda-approximate solver gives a
    tree within ``2 * lambda`` of optimal.
    """
    cnd = get_cnd_solver(solver)
    inst = CndInstance.from_network(net, params)
    route = cnd.solve(inst)
    validate_route(route, inst)
    return _spt_in_subgraph(net, route.edges())


def solve_spanning_baseline(net: Network, params: CostParams | None = None, seed: int = 0) -> RoutingTree:
    """Randomised depth-first spanning tree from the sink.

    Neighbour order at each node is shuffled with a PCG64 stream seeded by
    ``seed``; the same seed always gives the same tree.
    """
    _require_no_relays(net)
    rng = np.random.Generator(np.random.PCG64(seed))
    parent: dict[int, int] = {}
    seen = {net.sink}

    def shuffled(v: int) -> list[int]:
        nbrs = list(net.neighbors(v))
        return [nbrs[i] for i in rng.permutation(len(nbrs))]

    stack = [(net.sink, shuffled(net.sink))]
    while stack:
        u, pending = stack[-1]
        while pending and pending[-1] in seen:
            pending.pop()
        if not pending:
            stack.pop()
            continue
        v = pending.pop()
        seen.add(v)
        parent[v] = u
        stack.append((v, shuffled(v)))
    return RoutingTree(net.sink, parent)


@dataclass(frozen=True)
class Algorithm:
    name: str
    run: Callable[[Network, CostParams, int], RoutingTree]
    relays: bool  # accepts networks with relay nodes
    description: str


ALGORITHMS: dict[str, Algorithm] = {
    a.name: a
    for a in [
        Algorithm("spt", lambda n, p, s: solve_mecat_spt(n, p), False, "shortest-path tree"),
        Algorithm("spanning", lambda n, p, s: solve_spanning_baseline(n, p, s), False, "randomised DFS spanning tree"),
        Algorithm("spt-rn", lambda n, p, s: solve_rn_spt(n, p), True, "shortest-path tree pruned to sources"),
        Algorithm("steiner", lambda n, p, s: solve_steiner(n, p), True, "2-approximate Steiner tree"),
        Algorithm("alg2", lambda n, p, s: solve_mecat_rn_alg2(n, p), True, "LAST-based 7-approximation"),
        Algorithm("alg3", lambda n, p, s: solve_mecat_rn_alg3(n, p, "salman"), True, "CND-based, Salman routing"),
        Algorithm("alg3-sp-only", lambda n, p, s: solve_mecat_rn_alg3(n, p, "sp-only"), True,
                  "CND-based, shortest-paths-only routing (baseline)"),
    ]
}


def solve(net: Network, params: CostParams, algorithm: str, seed: int = 0, cnd: str | None = None) -> RoutingTree:
    """Run a registered algorithm by name; ``cnd`` overrides alg3's CND solver."""
    if algorithm == "alg3" and cnd is not None:
        return solve_mecat_rn_alg3(net, params, cnd)
    try:
        alg = ALGORITHMS[algorithm]
    except KeyError:
        raise ValueError(f"unknown algorithm {algorithm!r}; choose from {sorted(ALGORITHMS)}") from None
    return alg.run(net, params, seed)
