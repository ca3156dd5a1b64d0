"""Packetised energy cost of a routing tree.

A node carrying ``L`` units of report data (its own report plus everything
forwarded from below) sends ``ceil(L / q)`` packets to its parent, and every
packet is paid for once by the sender (``tx``) and once by the receiver
(``rx``).  All arithmetic is exact: costs are ``Fraction`` or ``int``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .graph import Network, canonical_edge


def as_fraction(x) -> Fraction:
    """Exact rational for ints, Fractions, decimal strings and floats."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _normalise(x: Fraction):
    return int(x) if x.denominator == 1 else x


@dataclass(frozen=True)
class CostParams:
    """Aggregation ratio ``q``, per-packet energies and an optional budget."""

    q: int
    tx: Fraction = Fraction(1)
    rx: Fraction = Fraction(1)
    budget: Fraction | None = None

    def __post_init__(self) -> None:
        if int(self.q) != self.q or self.q < 1:
            raise ValueError("q must be a positive integer")
        object.__setattr__(self, "q", int(self.q))
        object.__setattr__(self, "tx", as_fraction(self.tx))
        object.__setattr__(self, "rx", as_fraction(self.rx))
        if self.tx <= 0 or self.rx <= 0:
            raise ValueError("tx and rx must be positive")
        if self.budget is not None:
            object.__setattr__(self, "budget", as_fraction(self.budget))

    @property
    def per_packet(self) -> Fraction:
        return self.tx + self.rx

    def with_q(self, q: int) -> "CostParams":
        return CostParams(q, self.tx, self.rx, self.budget)


@dataclass(frozen=True)
class RoutingTree:
    """Directed tree towards ``root`` given by a child -> parent map."""

    root: int
    parent: Mapping[int, int]
    members: frozenset[int] = field(init=False)

    def __post_init__(self) -> None:
        parent = dict(sorted(self.parent.items()))
        if self.root in parent:
            raise ValueError("malformed tree: root has a parent")
        object.__setattr__(self, "parent", parent)
        object.__setattr__(self, "members", frozenset(parent) | {self.root})

    def __hash__(self) -> int:
        return hash((self.root, tuple(self.parent.items())))

    def edges(self) -> list[tuple[int, int]]:
        """(child, parent) pairs sorted by child id."""
        return list(self.parent.items())

    def children(self) -> dict[int, list[int]]:
        kids: dict[int, list[int]] = {v: [] for v in self.members}
        for c, p in self.parent.items():
            if p not in kids:
                raise ValueError(f"malformed tree: parent {p} of {c} is not a member")
            kids[p].append(c)
        return kids

    def order(self) -> list[int]:
        """Members in BFS order from the root; raises on cycles or strays."""
        kids = self.children()
        seen = [self.root]
        i = 0
        while i < len(seen):
            seen.extend(kids[seen[i]])
            i += 1
        if len(seen) != len(self.members):
            raise ValueError("malformed tree: cycle or member not reaching the root")
        return seen

    def depths(self) -> dict[int, int]:
        depth = {self.root: 0}
        for v in self.order()[1:]:
            depth[v] = depth[self.parent[v]] + 1
        return depth

    def path_to_root(self, v: int) -> tuple[int, ...]:
        path = [v]
        while path[-1] != self.root:
            path.append(self.parent[path[-1]])
            if len(path) > len(self.members):
                raise ValueError("malformed tree: cycle")
        return tuple(path)

    def pruned(self, keep: Iterable[int]) -> "RoutingTree":
        """Restrict to the root paths of ``keep``."""
        nodes: set[int] = set()
        for v in keep:
            nodes.update(self.path_to_root(v))
        return RoutingTree(self.root, {v: p for v, p in self.parent.items() if v in nodes})


def validate_tree(tree: RoutingTree, net: Network, spanning: bool | None = None) -> None:
    """Raise ``ValueError`` unless ``tree`` is a routing tree for ``net``.

    ``spanning`` demands all nodes as members; by default it is required only
    when the network has no relays.
    """
    if tree.root != net.sink:
        raise ValueError("malformed tree: root is not the sink")
    for c, p in tree.parent.items():
        if not net.has_edge(c, p):
            raise ValueError(f"malformed tree: ({c}, {p}) is not a network edge")
    tree.order()
    if spanning is None:
        spanning = not net.relays
    required = set(net.nodes) if spanning else set(net.sources) | {net.sink}
    missing = required - tree.members
    if missing:
        raise ValueError(f"tree misses required nodes {sorted(missing)}")


def descendant_loads(tree: RoutingTree, net: Network) -> dict[int, int]:
    """Total report size held strictly below each member."""
    des = {v: 0 for v in tree.members}
    for v in reversed(tree.order()):
        if v != tree.root:
            des[tree.parent[v]] += des[v] + net.report_size[v]
    return des


def packets_sent(tree: RoutingTree, net: Network, params: CostParams) -> dict[int, int]:
    des = descendant_loads(tree, net)
    q = params.q
    return {v: ceil_div(des[v] + net.report_size[v], q) for v in sorted(tree.members) if v != tree.root}


def packet_total(tree: RoutingTree, net: Network, q: int) -> int:
    des = descendant_loads(tree, net)
    return sum(ceil_div(des[v] + net.report_size[v], q) for v in tree.members if v != tree.root)


def tree_cost(tree: RoutingTree, net: Network, params: CostParams):
    return _normalise(params.per_packet * packet_total(tree, net, params.q))


def check_budget(tree: RoutingTree, net: Network, params: CostParams) -> bool:
    if params.budget is None:
        raise ValueError("no budget set")
    return tree_cost(tree, net, params) <= params.budget


def idle_relays(tree: RoutingTree, net: Network) -> list[int]:
    """Relay members that forward nothing; they cost nothing but can be pruned."""
    des = descendant_loads(tree, net)
    return sorted(v for v in tree.members if v != tree.root and des[v] + net.report_size[v] == 0)


def tree_from_edges(root: int, edges: Iterable[tuple[int, int]]) -> RoutingTree:
    """Orient an undirected tree edge set towards ``root``."""
    adj: dict[int, list[int]] = {root: []}
    unique = {canonical_edge(u, v) for u, v in edges}
    for u, v in unique:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    parent: dict[int, int] = {}
    stack = [root]
    seen = {root}
    while stack:
        u = stack.pop()
        for v in sorted(adj[u]):
            if v not in seen:
                seen.add(v)
                parent[v] = u
                stack.append(v)
    if len(seen) != len(adj) or len(unique) != len(adj) - 1:
        raise ValueError("malformed tree: edge set is not a tree containing the root")
    return RoutingTree(root, parent)
