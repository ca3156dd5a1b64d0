"""Graph representation and the classical subroutines every solver builds on.

Node ids are dense integers.  Every search here breaks ties on the smallest
node id so that two runs over the same input produce the same structure.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Number = Union[int, Fraction]
Edge = tuple[int, int]


def canonical_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def build_adjacency(nodes: Iterable[int], edges: Iterable[Edge]) -> dict[int, tuple[int, ...]]:
    """Sorted neighbour tuples for each node."""
    adj: dict[int, list[int]] = {v: [] for v in nodes}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    return {v: tuple(sorted(nbrs)) for v, nbrs in adj.items()}


def bfs_distances(adj: Mapping[int, Sequence[int]], source: int) -> dict[int, int]:
    """Hop distances to every node reachable from ``source``."""
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def is_connected(adj: Mapping[int, Sequence[int]]) -> bool:
    if not adj:
        return True
    start = next(iter(adj))
    return len(bfs_distances(adj, start)) == len(adj)


@dataclass(frozen=True)
class Network:
    """A sensor network: connected graph, report sizes, sink and sources.

    Nodes that are neither the sink nor a source are relays and carry a
    zero-sized report.
    """

    node_count: int
    edges: frozenset[Edge]
    report_size: tuple[int, ...]
    sink: int
    sources: frozenset[int]
    coords: tuple[tuple[float, float], ...] | None = None
    adjacency: dict[int, tuple[int, ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        n = self.node_count
        if n < 1:
            raise ValueError("node_count must be positive")
        edges = frozenset(canonical_edge(u, v) for u, v in self.edges)
        if len(edges) != len(self.edges):
            raise ValueError("duplicate edges")
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) references an unknown node")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "sources", frozenset(self.sources))
        object.__setattr__(self, "report_size", tuple(int(s) for s in self.report_size))
        if len(self.report_size) != n:
            raise ValueError("report_size must list one entry per node")
        if not 0 <= self.sink < n:
            raise ValueError("sink is not a node")
        if self.sink in self.sources:
            raise ValueError("sink cannot be a source")
        for v, s in enumerate(self.report_size):
            if v in self.sources:
                if s < 1:
                    raise ValueError(f"source {v} must have a positive report size")
            elif s != 0:
                raise ValueError(f"non-source node {v} must have report size 0")
        if self.coords is not None and len(self.coords) != n:
            raise ValueError("coords must list one entry per node")
        adj = build_adjacency(range(n), edges)
        object.__setattr__(self, "adjacency", adj)
        if not is_connected(adj):
            raise ValueError("disconnected")

    @property
    def nodes(self) -> range:
        return range(self.node_count)

    @property
    def relays(self) -> frozenset[int]:
        return frozenset(v for v in self.nodes if v != self.sink and v not in self.sources)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        return canonical_edge(u, v) in self.edges

    def total_report_size(self) -> int:
        return sum(self.report_size)

    @classmethod
    def from_sizes(
        cls,
        node_count: int,
        edges: Iterable[Edge],
        sizes: Mapping[int, int],
        sink: int = 0,
        coords=None,
    ) -> "Network":
        """Build a network where every node with a positive size is a source."""
        report = [int(sizes.get(v, 0)) for v in range(node_count)]
        sources = frozenset(v for v, s in enumerate(report) if s > 0)
        return cls(node_count, frozenset(edges), tuple(report), sink, sources, coords)


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected graph with strictly positive edge lengths."""

    nodes: tuple[int, ...]
    weights: dict[Edge, Number]
    adjacency: dict[int, tuple[int, ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(sorted(self.nodes)))
        weights = {}
        for (u, v), w in self.weights.items():
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if w <= 0:
                raise ValueError(f"edge ({u}, {v}) has non-positive weight {w}")
            weights[canonical_edge(u, v)] = w
        object.__setattr__(self, "weights", weights)
        adj = build_adjacency(self.nodes, weights)
        object.__setattr__(self, "adjacency", adj)
        if not is_connected(adj):
            raise ValueError("disconnected")

    def weight(self, u: int, v: int) -> Number:
        return self.weights[canonical_edge(u, v)]

    def total_weight(self, edges: Iterable[Edge]) -> Number:
        return sum((self.weight(u, v) for u, v in edges), 0)

    @classmethod
    def from_network(cls, net: Network, edge_weight: Number = 1) -> "WeightedGraph":
        return cls(tuple(net.nodes), {e: edge_weight for e in net.edges})


def hop_distances(net: Network, source: int) -> dict[int, int]:
    """BFS layer index of every node, measured from ``source``."""
    if not 0 <= source < net.node_count:
        raise ValueError(f"unknown node {source}")
    dist = bfs_distances(net.adjacency, source)
    if len(dist) != net.node_count:
        raise ValueError("disconnected")
    return dist


def dijkstra(g: WeightedGraph, source: int) -> dict[int, Number]:
    dist: dict[int, Number] = {source: 0}
    heap: list[tuple[Number, int]] = [(0, source)]
    done: set[int] = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v in g.adjacency[u]:
            nd = d + g.weight(u, v)
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def _lex_smallest_path(
    adj: Mapping[int, Sequence[int]], start: int, dist_to_target: Mapping[int, Number], step
) -> tuple[int, ...]:
    # Greedy walk: at each node take the smallest-id neighbour that stays on a shortest path.
    path = [start]
    cur = start
    while dist_to_target[cur] != 0:
        for v in adj[cur]:
            if v in dist_to_target and dist_to_target[v] + step(cur, v) == dist_to_target[cur]:
                cur = v
                break
        path.append(cur)
    return tuple(path)


def shortest_path(g: WeightedGraph, source: int, target: int) -> tuple[int, ...]:
    """Minimum-weight path from ``source`` to ``target`` as a node sequence.

    Among several minimum-weight paths the lexicographically smallest node
    sequence is returned.  ``source == target`` gives the one-node path
    ``(source,)`` which has no edges and length 0.
    """
    dist = dijkstra(g, target)
    if source not in dist:
        raise ValueError("disconnected")
    return _lex_smallest_path(g.adjacency, source, dist, g.weight)


def path_length(g: WeightedGraph, path: Sequence[int]) -> Number:
    return sum((g.weight(a, b) for a, b in zip(path, path[1:])), 0)


def path_edges(path: Sequence[int]) -> list[Edge]:
    return [canonical_edge(a, b) for a, b in zip(path, path[1:])]


class _DisjointSet:
    def __init__(self, items: Iterable[int]):
        self.parent = {x: x for x in items}

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def kruskal(nodes: Iterable[int], ordered_edges: Iterable[Edge]) -> list[Edge]:
    """Keep each edge of ``ordered_edges`` that joins two components."""
    ds = _DisjointSet(nodes)
    return [(u, v) for u, v in ordered_edges if ds.union(u, v)]


def minimum_spanning_tree(g: WeightedGraph) -> list[tuple[int, int, Number]]:
    """Kruskal's algorithm with ties resolved on the smallest ``(w, u, v)``."""
    order = sorted((w, u, v) for (u, v), w in g.weights.items())
    kept = kruskal(g.nodes, ((u, v) for _, u, v in order))
    return [(u, v, g.weight(u, v)) for u, v in kept]


@dataclass(frozen=True)
class MetricClosure:
    """Complete graph over terminals plus one witness path per terminal pair."""

    graph: WeightedGraph
    paths: dict[Edge, tuple[int, ...]]

    def path(self, u: int, v: int) -> tuple[int, ...]:
        """Witness path oriented from ``u`` to ``v``."""
        p = self.paths[canonical_edge(u, v)]
        return p if p[0] == u else p[::-1]

    def weight(self, u: int, v: int) -> Number:
        return self.graph.weight(u, v)


def _closure(adj, terminals, distances_from, step, scale) -> MetricClosure:
    terms = sorted(set(terminals))
    if len(terms) < 2:
        raise ValueError("metric closure needs at least two terminals")
    dist = {t: distances_from(t) for t in terms}
    weights: dict[Edge, Number] = {}
    paths: dict[Edge, tuple[int, ...]] = {}
    for i, u in enumerate(terms):
        for v in terms[i + 1:]:
            if u not in dist[v]:
                raise ValueError("disconnected")
            weights[(u, v)] = dist[v][u] * scale
            paths[(u, v)] = _lex_smallest_path(adj, u, dist[v], step)
    return MetricClosure(WeightedGraph(tuple(terms), weights), paths)


def metric_closure(net: Network, terminals: Iterable[int], edge_weight: Number = 1) -> MetricClosure:
    """Closure of ``net`` over ``terminals`` where every edge has ``edge_weight``."""
    if edge_weight <= 0:
        raise ValueError("edge_weight must be positive")
    return _closure(
        net.adjacency,
        terminals,
        lambda t: hop_distances(net, t),
        lambda a, b: 1,
        edge_weight,
    )


def weighted_metric_closure(g: WeightedGraph, terminals: Iterable[int]) -> MetricClosure:
    return _closure(g.adjacency, terminals, lambda t: dijkstra(g, t), g.weight, 1)
