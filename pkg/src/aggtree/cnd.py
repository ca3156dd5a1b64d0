"""Capacitated network design: route every source's demand to the sink and
pay ``ceil(demand / capacity)`` facilities on each used edge, times its length.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from .cost import CostParams, RoutingTree, ceil_div
from .graph import (
    Edge,
    Network,
    WeightedGraph,
    dijkstra,
    path_length,
    shortest_path,
    weighted_metric_closure,
)
from .trees import InvariantViolation, LastParams, last_tree


@dataclass(frozen=True)
class CndInstance:
    graph: WeightedGraph
    demand: Mapping[int, int]
    sink: int
    capacity: int

    def __post_init__(self) -> None:
        if self.capacity < 1:
            raise ValueError("capacity must be a positive integer")
        if self.sink in self.demand:
            raise ValueError("sink cannot be a source")
        for u, d in self.demand.items():
            if d < 1:
                raise ValueError(f"source {u} has non-positive demand")
        object.__setattr__(self, "demand", dict(sorted(self.demand.items())))

    @property
    def sources(self) -> list[int]:
        return list(self.demand)

    @classmethod
    def from_network(cls, net: Network, params: CostParams, edge_length=None) -> "CndInstance":
        """CND view of a network; every edge gets ``edge_length`` (default tx + rx)."""
        length = params.per_packet if edge_length is None else edge_length
        if isinstance(length, Fraction) and length.denominator == 1:
            length = int(length)
        g = WeightedGraph.from_network(net, length)
        demand = {u: net.report_size[u] for u in sorted(net.sources)}
        return cls(g, demand, net.sink, params.q)


@dataclass(frozen=True)
class CndRoute:
    """One path per source, each a node sequence ending at the sink."""

    paths: Mapping[int, tuple[int, ...]]

    def __post_init__(self) -> None:
        object.__setattr__(self, "paths", {u: tuple(p) for u, p in sorted(self.paths.items())})

    def edge_users(self) -> dict[Edge, list[int]]:
        users: dict[Edge, list[int]] = {}
        for u, path in self.paths.items():
            for a, b in zip(path, path[1:]):
                users.setdefault((a, b) if a < b else (b, a), []).append(u)
        return users

    def edge_demand(self, inst: CndInstance) -> dict[Edge, int]:
        return {e: sum(inst.demand[u] for u in us) for e, us in sorted(self.edge_users().items())}

    def edges(self) -> list[Edge]:
        return sorted(self.edge_users())

    def nodes(self) -> set[int]:
        return {v for p in self.paths.values() for v in p}


def validate_route(route: CndRoute, inst: CndInstance) -> None:
    if set(route.paths) != set(inst.demand):
        raise ValueError("invalid route: sources and paths do not match")
    for u, path in route.paths.items():
        if path[0] != u or path[-1] != inst.sink:
            raise ValueError(f"invalid route: path of {u} must run from {u} to the sink")
        if len(set(path)) != len(path):
            raise ValueError(f"invalid route: path of {u} repeats a node")
        for a, b in zip(path, path[1:]):
            if (min(a, b), max(a, b)) not in inst.graph.weights:
                raise ValueError(f"invalid route: ({a}, {b}) is not an edge")


def cnd_cost_terms(route: CndRoute, inst: CndInstance) -> tuple[Fraction, Fraction]:
    """Fractional routing term and rounding slack of the facility cost.

    The first is the sum over sources of ``demand/capacity * path length``;
    the second sums ``(ceil(z) - z) * length`` over used edges, where ``z`` is
    the edge's fractional facility count.
    """
    q = inst.capacity
    routing = sum(
        (Fraction(inst.demand[u], q) * path_length(inst.graph, p) for u, p in route.paths.items()),
        Fraction(0),
    )
    slack = Fraction(0)
    for (a, b), users in route.edge_users().items():
        z = sum((Fraction(inst.demand[u], q) for u in users), Fraction(0))
        slack += (ceil_div(z.numerator, z.denominator) - z) * inst.graph.weight(a, b)
    return routing, slack


def cnd_cost(route: CndRoute, inst: CndInstance):
    validate_route(route, inst)
    cost = sum(
        (ceil_div(d, inst.capacity) * inst.graph.weight(a, b) for (a, b), d in route.edge_demand(inst).items()),
        Fraction(0),
    )
    routing, slack = cnd_cost_terms(route, inst)
    if routing + slack != cost:
        raise InvariantViolation("facility cost decomposition mismatch")
    return int(cost) if cost.denominator == 1 else cost


def route_from_tree(tree: RoutingTree, inst: CndInstance) -> CndRoute:
    return CndRoute({u: tree.path_to_root(u) for u in inst.demand})


def remove_loops(path: tuple[int, ...]) -> tuple[int, ...]:
    """Shortcut every revisit so the walk becomes a simple path."""
    out: list[int] = []
    pos: dict[int, int] = {}
    for v in path:
        if v in pos:
            for w in out[pos[v] + 1:]:
                del pos[w]
            del out[pos[v] + 1:]
        else:
            pos[v] = len(out)
            out.append(v)
    return tuple(out)


def salman_route(inst: CndInstance, params: LastParams = LastParams()) -> CndRoute:
    """Route each source along its LAST path in the metric closure.

    The LAST is built over the closure on sources plus sink, and each source's
    tree path to the sink is expanded through the closure's witness shortest
    paths.  Loops created by concatenation are shortcut.
    """
    sources = inst.sources
    if not sources:
        return CndRoute({})
    closure = weighted_metric_closure(inst.graph, sources + [inst.sink])
    tree = last_tree(closure.graph, inst.sink, params)
    dist = dijkstra(inst.graph, inst.sink)
    paths = {}
    for u in sources:
        hops = tree.path_to_root(u)
        walk = [u]
        for a, b in zip(hops, hops[1:]):
            walk.extend(closure.path(a, b)[1:])
        path = remove_loops(tuple(walk))
        if path_length(inst.graph, path) > params.alpha * dist[u]:
            raise InvariantViolation(f"route of source {u} exceeds alpha times its shortest distance")
        paths[u] = path
    return CndRoute(paths)


def shortest_paths_route(inst: CndInstance) -> CndRoute:
    """Each source on its own shortest path, ignoring the others."""
    return CndRoute({u: shortest_path(inst.graph, u, inst.sink) for u in inst.sources})


@dataclass(frozen=True)
class CndSolver:
    name: str
    solve: Callable[[CndInstance], CndRoute]
    factor: int | None  # approximation guarantee, None when unknown


CND_SOLVERS: dict[str, CndSolver] = {}


def register_cnd_solver(name: str, solve: Callable[[CndInstance], CndRoute], factor: int | None) -> CndSolver:
    if name in CND_SOLVERS:
        raise ValueError(f"CND solver {name!r} already registered")
    CND_SOLVERS[name] = CndSolver(name, solve, factor)
    return CND_SOLVERS[name]


def get_cnd_solver(solver) -> CndSolver:
    if isinstance(solver, CndSolver):
        return solver
    try:
        return CND_SOLVERS[solver]
    except KeyError:
        raise ValueError(f"unknown CND solver {solver!r}; choose from {sorted(CND_SOLVERS)}") from None


register_cnd_solver("salman", salman_route, 7)
register_cnd_solver("sp-only", shortest_paths_route, None)
