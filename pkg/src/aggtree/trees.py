"""Shortest-path trees, 2-approximate Steiner trees and light approximate
shortest-path trees (LASTs)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .cost import RoutingTree, as_fraction, tree_from_edges
from .graph import (
    Edge,
    Network,
    WeightedGraph,
    bfs_distances,
    build_adjacency,
    canonical_edge,
    dijkstra,
    kruskal,
    metric_closure,
    minimum_spanning_tree,
    path_edges,
)


class InvariantViolation(RuntimeError):
    """A construction produced output that breaks its own guarantee."""


def shortest_path_tree(
    net: Network,
    root: int,
    span: Iterable[int] | None = None,
    edges: Iterable[Edge] | None = None,
    rank: Mapping[int, int] | None = None,
) -> RoutingTree:
    """Hop shortest-path tree rooted at ``root``.

    Each node picks, among its neighbours one hop closer to the root, the one
    with the smallest id (or smallest ``rank`` when a ranking is given).
    ``edges`` restricts the search to a subgraph of ``net``.  With ``span``
    the tree keeps only the root paths of the span nodes.
    """
    if edges is None:
        adj = net.adjacency
    else:
        edges = [canonical_edge(u, v) for u, v in edges]
        for e in edges:
            if e not in net.edges:
                raise ValueError(f"{e} is not a network edge")
        nodes = {root} | {v for e in edges for v in e}
        adj = build_adjacency(nodes, edges)
    dist = bfs_distances(adj, root)
    wanted = sorted(dist) if span is None else sorted(set(span) | {root})
    for v in wanted:
        if v not in dist:
            raise ValueError(f"disconnected: node {v} cannot reach {root}")
    key = (lambda v: v) if rank is None else (lambda v: rank[v])
    parent = {}
    for v in dist:
        if v != root:
            parent[v] = min((u for u in adj[v] if dist[u] == dist[v] - 1), key=key)
    tree = RoutingTree(root, parent)
    if span is not None:
        tree = tree.pruned(wanted)
    return tree


def steiner_tree_2approx(net: Network, terminals: Iterable[int], root: int | None = None) -> RoutingTree:
    """Steiner tree from the MST of the hop metric closure.

    Closure MST edges are expanded into their witness paths in Kruskal order;
    a path edge that would close a cycle is dropped, then non-terminal leaves
    are pruned until every leaf is a terminal.  The edge count is at most
    twice the optimum.
    """
    root = net.sink if root is None else root
    terms = set(terminals) | {root}
    if len(terms) == 1:
        return RoutingTree(root, {})
    closure = metric_closure(net, terms)
    expanded: list[Edge] = []
    for u, v, _ in minimum_spanning_tree(closure.graph):
        expanded.extend(path_edges(closure.path(u, v)))
    nodes = {x for e in expanded for x in e}
    kept = kruskal(nodes, expanded)
    adj = {v: set() for v in nodes}
    for u, v in kept:
        adj[u].add(v)
        adj[v].add(u)
    leaves = [v for v in sorted(adj) if len(adj[v]) == 1 and v not in terms]
    while leaves:
        v = leaves.pop()
        (u,) = adj.pop(v)
        adj[u].discard(v)
        if len(adj[u]) == 1 and u not in terms:
            leaves.append(u)
    tree_edges = [(u, v) for u in adj for v in adj[u] if u < v]
    return tree_from_edges(root, tree_edges)


@dataclass(frozen=True)
class LastParams:
    """Root-distance stretch ``alpha`` and weight ratio ``beta`` of a LAST."""

    alpha: Fraction = Fraction(3)
    beta: Fraction = Fraction(2)

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", as_fraction(self.alpha))
        object.__setattr__(self, "beta", as_fraction(self.beta))
        if self.alpha < 1 or self.beta < 1:
            raise ValueError("alpha and beta must be at least 1")


def _shortest_path_parents(g: WeightedGraph, root: int) -> tuple[dict, dict]:
    dist = dijkstra(g, root)
    parent = {}
    for v in g.nodes:
        if v != root:
            parent[v] = min(u for u in g.adjacency[v] if dist[u] + g.weight(u, v) == dist[v])
    return dist, parent


def tree_distances(g: WeightedGraph, tree: RoutingTree) -> dict:
    dist = {tree.root: 0}
    for v in tree.order()[1:]:
        p = tree.parent[v]
        dist[v] = dist[p] + g.weight(v, p)
    return dist


def last_tree(g: WeightedGraph, root: int, params: LastParams = LastParams()) -> RoutingTree:
    """(alpha, beta)-LAST by depth-first relaxation over the MST.

    The MST is walked depth first (smallest child id first) while keeping a
    tentative root distance per node.  Whenever a node's tentative distance
    exceeds ``alpha`` times its true distance, its shortest path to the root
    is grafted in.  Achievable for ``beta >= 1 + 2 / (alpha - 1)``; both
    guarantees are re-checked on the output.
    """
    alpha, beta = params.alpha, params.beta
    if alpha <= 1:
        raise ValueError("LAST construction needs alpha > 1")
    if beta < 1 + 2 / (alpha - 1):
        raise ValueError(f"beta={beta} is below 1 + 2/(alpha - 1) for alpha={alpha}")

    true_dist, sp_parent = _shortest_path_parents(g, root)
    mst = minimum_spanning_tree(g)
    mst_adj = build_adjacency(g.nodes, [(u, v) for u, v, _ in mst])

    est: dict[int, object] = {root: 0}
    parent: dict[int, int] = {}

    def relax(u: int, v: int) -> None:
        if u not in est:
            return
        cand = est[u] + g.weight(u, v)
        if v not in est or cand < est[v]:
            est[v] = cand
            parent[v] = u

    def graft(v: int) -> None:
        chain = []
        x = v
        while x != root and (x not in est or est[x] > true_dist[x]):
            chain.append(x)
            x = sp_parent[x]
        for x in reversed(chain):
            relax(sp_parent[x], x)

    def visit(u: int) -> None:
        if u not in est or est[u] > alpha * true_dist[u]:
            graft(u)

    visit(root)
    stack = [(root, iter(v for v in mst_adj[root]))]
    mst_parent = {root: None}
    while stack:
        u, it = stack[-1]
        v = next((c for c in it if c not in mst_parent), None)
        if v is None:
            stack.pop()
            if stack:
                relax(u, stack[-1][0])
            continue
        mst_parent[v] = u
        relax(u, v)
        visit(v)
        stack.append((v, iter(mst_adj[v])))

    tree = RoutingTree(root, parent)
    _check_last(g, tree, true_dist, sum(w for _, _, w in mst), params)
    return tree


def _check_last(g: WeightedGraph, tree: RoutingTree, true_dist, mst_weight, params: LastParams) -> None:
    try:
        in_tree = tree_distances(g, tree)
    except ValueError as exc:
        raise InvariantViolation(f"LAST invariant violated: {exc}") from exc
    if tree.members != set(g.nodes):
        raise InvariantViolation("LAST invariant violated: tree does not span the graph")
    for v in g.nodes:
        if in_tree[v] > params.alpha * true_dist[v]:
            raise InvariantViolation(f"LAST invariant violated: node {v} is stretched beyond alpha")
    weight = g.total_weight(tree.edges())
    if weight > params.beta * mst_weight:
        raise InvariantViolation("LAST invariant violated: tree weight exceeds beta * MST")


def check_last_conditions(g: WeightedGraph, tree: RoutingTree, params: LastParams = LastParams()) -> bool:
    """Independent check of both LAST conditions."""
    true_dist = dijkstra(g, tree.root)
    mst_weight = sum(w for _, _, w in minimum_spanning_tree(g))
    try:
        _check_last(g, tree, true_dist, mst_weight, params)
    except InvariantViolation:
        return False
    return True
