"""Hardness-reduction gadgets and adversarial instance families.

Two reductions map decision instances onto aggregation-tree instances with a
budget: load-balanced semi-matching onto trees without relays, and dominating
set onto trees with relays.  Each gadget carries maps between solutions of
the source problem and trees within budget.

The two families show that a Steiner tree and a shortest-path tree can each
cost a factor growing with the number of sources more than the optimum once
relays are present.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .cost import CostParams, RoutingTree, ceil_div
from .graph import Network


@dataclass(frozen=True)
class LbsmInstance:
    """Bipartite graph with weighted left side and load bound ``k``.

    ``edges`` holds ``(i, j)`` pairs: left index ``i``, right index ``j``.
    """

    weights: tuple[int, ...]
    right_count: int
    edges: frozenset[tuple[int, int]]
    k: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "weights", tuple(self.weights))
        object.__setattr__(self, "edges", frozenset(self.edges))
        if any(w < 1 for w in self.weights):
            raise ValueError("left weights must be positive")
        if self.k < 1 or self.right_count < 1:
            raise ValueError("k and right_count must be positive")
        for i, j in self.edges:
            if not (0 <= i < len(self.weights) and 0 <= j < self.right_count):
                raise ValueError(f"edge ({i}, {j}) is out of range")

    def neighbours(self, i: int) -> list[int]:
        return sorted(j for a, j in self.edges if a == i)


def semi_matching_loads(inst: LbsmInstance, matching: dict[int, int]) -> list[int]:
    loads = [0] * inst.right_count
    for i, j in matching.items():
        loads[j] += inst.weights[i]
    return loads


def lbsm_solve(inst: LbsmInstance) -> dict[int, int] | None:
    """Any semi-matching with maximum right load at most ``k``, by enumeration."""
    choices = [inst.neighbours(i) for i in range(len(inst.weights))]
    for combo in itertools.product(*choices):
        matching = dict(enumerate(combo))
        if max(semi_matching_loads(inst, matching)) <= inst.k:
            return matching
    return None


@dataclass(frozen=True)
class LbsmGadget:
    net: Network
    params: CostParams
    left: tuple[int, ...]
    right: tuple[int, ...]
    padding: tuple[tuple[int, ...], ...]

    def tree_from_semi_matching(self, matching: dict[int, int]) -> RoutingTree:
        parent = {v: self.net.sink for v in self.right}
        for i, j in matching.items():
            parent[self.left[i]] = self.right[j]
        for i, pads in enumerate(self.padding):
            for w in pads:
                parent[w] = self.left[i]
        return RoutingTree(self.net.sink, parent)

    def semi_matching_from_tree(self, tree: RoutingTree) -> dict[int, int]:
        """Read the semi-matching off a tree, after hanging every right node on the sink.

        Re-hanging a right node removes its subtree load from the nodes above
        it, so the cost never increases.
        """
        index_of_right = {v: j for j, v in enumerate(self.right)}
        matching = {}
        for i, u in enumerate(self.left):
            p = tree.parent[u]
            if p not in index_of_right:
                raise ValueError(f"left node {u} is not attached to a right node")
            matching[i] = index_of_right[p]
        return matching


def gadget_lbsm_to_mecat(inst: LbsmInstance) -> LbsmGadget:
    """Sink joined to every right node; left node ``i`` gets ``w(i) - 1`` pendant padding nodes.

    Every gadget node has report size 1, ``q = k + 1`` and ``tx = rx = 1``.
    The budget is ``2 * (|W| + sum_i ceil((|W_i| + 1) / q) + |V|)``.
    """
    nl, nr = len(inst.weights), inst.right_count
    left = tuple(range(1, 1 + nl))
    right = tuple(range(1 + nl, 1 + nl + nr))
    nxt = 1 + nl + nr
    padding = []
    for w in inst.weights:
        padding.append(tuple(range(nxt, nxt + w - 1)))
        nxt += w - 1
    edges = {(left[i], right[j]) for i, j in inst.edges}
    edges |= {(0, v) for v in right}
    edges |= {(left[i], w) for i, pads in enumerate(padding) for w in pads}
    q = inst.k + 1
    n_pad = sum(len(p) for p in padding)
    budget = 2 * (n_pad + sum(ceil_div(len(p) + 1, q) for p in padding) + nr)
    net = Network.from_sizes(nxt, edges, {v: 1 for v in range(1, nxt)})
    return LbsmGadget(net, CostParams(q, 1, 1, budget), left, right, tuple(padding))


@dataclass(frozen=True)
class DsInstance:
    node_count: int
    edges: frozenset[tuple[int, int]]
    k: int

    def __post_init__(self) -> None:
        edges = frozenset((min(u, v), max(u, v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.node_count < 1 or self.k < 1:
            raise ValueError("node_count and k must be positive")
        for u, v in edges:
            if u == v or not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise ValueError(f"bad edge ({u}, {v})")

    def closed_neighbourhood(self, v: int) -> set[int]:
        return {v} | {b for a, b in self.edges if a == v} | {a for a, b in self.edges if b == v}

    def max_degree(self) -> int:
        return max(len(self.closed_neighbourhood(v)) - 1 for v in range(self.node_count))


def dominating_set_solve(inst: DsInstance) -> set[int] | None:
    """A smallest dominating set if it has at most ``k`` vertices, else ``None``."""
    nbhd = [inst.closed_neighbourhood(v) for v in range(inst.node_count)]
    everything = set(range(inst.node_count))
    for size in range(1, min(inst.k, inst.node_count) + 1):
        for cand in itertools.combinations(range(inst.node_count), size):
            if set().union(*(nbhd[v] for v in cand)) == everything:
                return set(cand)
    return None


@dataclass(frozen=True)
class DsGadget:
    net: Network
    params: CostParams
    hubs: tuple[int, ...]  # relay copy of each vertex, adjacent to the sink
    leaves: tuple[int, ...]  # source copy of each vertex

    def tree_from_dominating_set(self, dom: set[int]) -> RoutingTree:
        parent = {self.hubs[i]: self.net.sink for i in dom}
        chosen = {self.hubs[i] for i in dom}
        for u in self.leaves:
            parent[u] = next(w for w in self.net.neighbors(u) if w in chosen)
        return RoutingTree(self.net.sink, parent)

    def dominating_set_from_tree(self, tree: RoutingTree) -> set[int]:
        index_of_hub = {w: i for i, w in enumerate(self.hubs)}
        return {index_of_hub[tree.parent[u]] for u in self.leaves}


def gadget_ds_to_mecat_rn(inst: DsInstance) -> DsGadget:
    """Sink -- hub ``w_i`` -- leaf ``u_j`` whenever ``v_j`` lies in the closed
    neighbourhood of ``v_i``.  Hubs are relays, leaves sources of size 1,
    ``q`` is max degree plus one and the budget is ``2 * (|V| + k)``."""
    n = inst.node_count
    hubs = tuple(range(1, 1 + n))
    leaves = tuple(range(1 + n, 1 + 2 * n))
    edges = {(0, w) for w in hubs}
    for i in range(n):
        for j in inst.closed_neighbourhood(i):
            edges.add((hubs[i], leaves[j]))
    net = Network.from_sizes(1 + 2 * n, edges, {u: 1 for u in leaves})
    params = CostParams(inst.max_degree() + 1, 1, 1, 2 * (n + inst.k))
    return DsGadget(net, params, hubs, leaves)


@dataclass(frozen=True)
class FamilyInstance:
    net: Network
    params: CostParams
    sources: tuple[int, ...]  # u_1 .. u_n in order
    reference: RoutingTree  # the cheap tree the construction is built around
    adversary: RoutingTree  # the expensive tree a naive algorithm returns


def family_theorem4(size: int) -> FamilyInstance:
    """Chain ``r - u_1 - ... - u_n`` plus relays ``s_i`` bridging ``r`` and ``u_i`` for ``i >= 3``.

    With ``q = 2`` the chain is the unique minimum Steiner tree, yet it costs
    quadratically in ``n`` while routing ``u_i`` through ``s_i`` is linear.
    Ids: sink 0, ``u_i = i``, ``s_i = n + i - 2``.
    """
    if size < 3:
        raise ValueError("size must be at least 3")
    n = size
    u = {i: i for i in range(1, n + 1)}
    s = {i: n + i - 2 for i in range(3, n + 1)}
    edges = {(0, u[1])} | {(u[i], u[i + 1]) for i in range(1, n)}
    edges |= {(0, s[i]) for i in s} | {(s[i], u[i]) for i in s}
    net = Network.from_sizes(2 * n - 1, edges, {u[i]: 1 for i in u})
    chain = RoutingTree(0, {u[1]: 0, **{u[i + 1]: u[i] for i in range(1, n)}})
    detour = {u[2]: u[1], u[1]: 0}
    for i in s:
        detour[u[i]] = s[i]
        detour[s[i]] = 0
    return FamilyInstance(net, CostParams(2, 1, 1), tuple(u.values()), RoutingTree(0, detour), chain)


def family_theorem5(size: int) -> FamilyInstance:
    """Chain ``r - u_1 - ... - u_n`` plus, for ``i >= 3``, a relay path of
    ``i - 2`` nodes from ``r`` to ``u_i``.

    With ``q = n`` the chain costs ``2n`` while a shortest-path tree that uses
    the relay paths is quadratic.  Relay ids come first (sink 0, then
    ``s_{i,j}`` in order of ``i`` then ``j``, then ``u_i``) so that the
    smallest-id tie-break picks relay parents wherever two shortest paths tie.
    """
    if size < 3:
        raise ValueError("size must be at least 3")
    n = size
    s = {}
    nxt = 1
    for i in range(3, n + 1):
        for j in range(1, i - 1):
            s[i, j] = nxt
            nxt += 1
    u = {i: nxt + i - 1 for i in range(1, n + 1)}
    edges = {(0, u[1])} | {(u[i], u[i + 1]) for i in range(1, n)}
    for i in range(3, n + 1):
        edges.add((0, s[i, 1]))
        edges.add((s[i, i - 2], u[i]))
        edges |= {(s[i, j], s[i, j + 1]) for j in range(1, i - 2)}
    net = Network.from_sizes(nxt + n, edges, {u[i]: 1 for i in u})
    chain = RoutingTree(0, {u[1]: 0, **{u[i + 1]: u[i] for i in range(1, n)}})
    spt = {u[2]: u[1], u[1]: 0}
    for i in range(3, n + 1):
        spt[s[i, 1]] = 0
        spt[u[i]] = s[i, i - 2]
        for j in range(1, i - 2):
            spt[s[i, j + 1]] = s[i, j]
    return FamilyInstance(net, CostParams(n, 1, 1), tuple(u.values()), chain, RoutingTree(0, spt))
