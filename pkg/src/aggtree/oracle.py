"""Exact optimal trees for small instances, and the cost lower bound.

``brute_force_mecat`` and ``brute_force_mecat_rn`` enumerate rooted spanning
arborescences with branch-and-bound pruning; they are the ground truth for
the approximation-ratio tests.  ``exact_optimum_milp`` solves the same problem
as a mixed-integer program and reaches the larger adversarial families.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .cost import CostParams, RoutingTree, ceil_div, packet_total, tree_cost
from .graph import Network, bfs_distances, hop_distances, is_connected
from .trees import shortest_path_tree, steiner_tree_2approx

DEFAULT_MECAT_CAP = 9
DEFAULT_RN_CAP = 10


class OracleTooLarge(ValueError):
    pass


def _cap(default: int, cap: int | None) -> int:
    if cap is not None:
        return cap
    env = os.environ.get("AGGTREE_ORACLE_CAP")
    return int(env) if env else default


def _min_packet_tree(adj, members, sizes, root: int, q: int, limit: int):
    """First arborescence (in search order) with fewest packets below ``limit``.

    Returns ``(packets, parent)`` or ``None`` when no tree beats ``limit``.
    """
    dist = bfs_distances(adj, root)
    order = sorted((v for v in members if v != root), key=lambda v: (dist[v], v))
    cand = {v: [u for u in adj[v]] for v in order}
    par = {v: None for v in order}
    load = {v: sizes[v] for v in members}
    state = {"S": sum(ceil_div(sizes[v], q) for v in order), "best": limit, "tree": None}

    def assign(i: int) -> None:
        if state["S"] >= state["best"]:
            return
        if i == len(order):
            state["best"] = state["S"]
            state["tree"] = dict(par)
            return
        v = order[i]
        for p in cand[v]:
            x = p
            while x != v and x != root and par[x] is not None:
                x = par[x]
            if x == v:
                continue
            delta = load[v]
            chain = []
            x = p
            while x != root:
                old = load[x]
                load[x] = old + delta
                state["S"] += ceil_div(old + delta, q) - ceil_div(old, q)
                chain.append(x)
                if par[x] is None:
                    break
                x = par[x]
            par[v] = p
            assign(i + 1)
            par[v] = None
            for x in chain:
                old = load[x]
                load[x] = old - delta
                state["S"] += ceil_div(old - delta, q) - ceil_div(old, q)

    assign(0)
    if state["tree"] is None:
        return None
    return state["best"], state["tree"]


def _induced(net: Network, members) -> dict[int, tuple[int, ...]]:
    ms = set(members)
    return {v: tuple(u for u in net.adjacency[v] if u in ms) for v in sorted(ms)}


def _scaled(params: CostParams, packets: int):
    cost = params.per_packet * packets
    return int(cost) if cost.denominator == 1 else cost


def _packet_limit(params: CostParams, budget) -> int:
    # exclusive packet bound equivalent to cost <= budget
    return int(Fraction(budget) / params.per_packet) + 1


def brute_force_mecat(net: Network, params: CostParams, cap: int | None = None) -> tuple[RoutingTree, object]:
    """Minimum-cost tree spanning every node, by exhaustive search."""
    if net.node_count > _cap(DEFAULT_MECAT_CAP, cap):
        raise OracleTooLarge("instance too large for oracle")
    spt = shortest_path_tree(net, net.sink)
    limit = packet_total(spt, net, params.q) + 1
    packets, parent = _min_packet_tree(net.adjacency, net.nodes, net.report_size, net.sink, params.q, limit)
    return RoutingTree(net.sink, parent), _scaled(params, packets)


def _rn_search(net: Network, q: int, limit: int):
    relays = sorted(net.relays)
    core = set(net.sources) | {net.sink}
    base = sum(ceil_div(net.report_size[u], q) for u in net.sources)
    best = None
    for size in range(len(relays) + 1):
        # an optimal pruned tree sends at least one packet from each relay it keeps
        if base + size >= limit:
            break
        for subset in itertools.combinations(relays, size):
            members = core | set(subset)
            adj = _induced(net, members)
            if any(len(adj[r]) < 2 for r in subset) or not is_connected(adj):
                continue
            found = _min_packet_tree(adj, members, net.report_size, net.sink, q, limit)
            if found is not None:
                limit, best = found[0], found
    return best


def brute_force_mecat_rn(net: Network, params: CostParams, cap: int | None = None) -> tuple[RoutingTree, object]:
    """Minimum-cost tree spanning sources and sink, trying every relay subset.

    Subsets where some chosen relay has fewer than two chosen neighbours are
    skipped: dropping that relay keeps the subgraph connected and costs nothing.
    Subset sizes stop once the sources' own packets plus one packet per relay
    cannot beat the best tree found.
    """
    if net.node_count > _cap(DEFAULT_RN_CAP, cap):
        raise OracleTooLarge("instance too large for oracle")
    spt = shortest_path_tree(net, net.sink, span=net.sources)
    packets, parent = _rn_search(net, params.q, packet_total(spt, net, params.q) + 1)
    tree = RoutingTree(net.sink, parent).pruned(net.sources)
    return tree, _scaled(params, packets)


def oracle_within_budget(net: Network, params: CostParams, cap: int | None = None) -> RoutingTree | None:
    """A tree costing at most ``params.budget``, or ``None`` if none exists.

    Spans every node when the network has no relays, else only sources and sink.
    """
    if params.budget is None:
        raise ValueError("no budget set")
    limit = _packet_limit(params, params.budget)
    if net.relays:
        if net.node_count > _cap(DEFAULT_RN_CAP, cap):
            raise OracleTooLarge("instance too large for oracle")
        found = _rn_search(net, params.q, limit)
        return None if found is None else RoutingTree(net.sink, found[1]).pruned(net.sources)
    if net.node_count > _cap(DEFAULT_MECAT_CAP, cap):
        raise OracleTooLarge("instance too large for oracle")
    found = _min_packet_tree(net.adjacency, net.nodes, net.report_size, net.sink, params.q, limit)
    return None if found is None else RoutingTree(net.sink, found[1])


def enumerate_arborescences(net: Network) -> Iterator[RoutingTree]:
    """Every spanning tree of ``net`` oriented towards the sink (no pruning)."""
    order = [v for v in net.nodes if v != net.sink]
    par: dict[int, int | None] = {v: None for v in order}

    def rec(i: int):
        if i == len(order):
            yield RoutingTree(net.sink, dict(par))
            return
        v = order[i]
        for p in net.neighbors(v):
            x = p
            while x != v and x != net.sink and par[x] is not None:
                x = par[x]
            if x == v:
                continue
            par[v] = p
            yield from rec(i + 1)
            par[v] = None

    # Only complete assignments without cycles reach the sink from every node.
    for tree in rec(0):
        try:
            tree.order()
        except ValueError:
            continue
        yield tree


def kirchhoff_count(net: Network) -> int:
    """Number of spanning trees via the matrix-tree theorem, in exact arithmetic."""
    keep = [v for v in net.nodes if v != net.sink]
    idx = {v: i for i, v in enumerate(keep)}
    m = [[Fraction(0)] * len(keep) for _ in keep]
    for v in keep:
        m[idx[v]][idx[v]] = Fraction(len(net.neighbors(v)))
        for u in net.neighbors(v):
            if u in idx:
                m[idx[v]][idx[u]] -= 1
    det = Fraction(1)
    n = len(keep)
    for c in range(n):
        pivot = next((r for r in range(c, n) if m[r][c] != 0), None)
        if pivot is None:
            return 0
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                for k in range(c, n):
                    m[r][k] -= f * m[c][k]
    return int(det)


@dataclass(frozen=True)
class LowerBound:
    """The q-independent ingredients of the energy lower bound.

    ``weighted_hops`` is the sum of ``s(u) * hop(u, sink)`` over sources and
    ``steiner_edges`` is ``max(|E_ST| / 2, |U|)`` for a 2-approximate Steiner
    tree ``E_ST``.  The bound at ratio ``q`` is
    ``(tx + rx) * max(weighted_hops / q, steiner_edges)``.
    """

    weighted_hops: int
    steiner_edges: Fraction

    @classmethod
    def of(cls, net: Network) -> "LowerBound":
        hops = hop_distances(net, net.sink)
        weighted = sum(net.report_size[u] * hops[u] for u in net.sources)
        st = steiner_tree_2approx(net, net.sources | {net.sink}, net.sink)
        est = max(Fraction(len(st.parent), 2), Fraction(len(net.sources)))
        return cls(weighted, est)

    def value(self, params: CostParams):
        lb = params.per_packet * max(Fraction(self.weighted_hops, params.q), self.steiner_edges)
        return int(lb) if lb.denominator == 1 else lb


def lower_bound(net: Network, params: CostParams):
    return LowerBound.of(net).value(params)


def exact_optimum_milp(net: Network, params: CostParams) -> tuple[RoutingTree, object]:
    """Optimal tree from a flow-based mixed-integer program (HiGHS).

    Arc indicators pick one parent per member, report flow rides on chosen
    arcs, and an integer packet count per node covers its outgoing flow
    divided by ``q``.  Relays are optional members.
    """
    from scipy.optimize import Bounds, LinearConstraint, milp
    from scipy.sparse import lil_matrix

    root = net.sink
    others = [v for v in net.nodes if v != root]
    arcs = [(u, v) for u in others for v in net.neighbors(u)]
    na, nn = len(arcs), len(others)
    node_ix = {v: i for i, v in enumerate(others)}
    # variable layout: x arcs | f arcs | y nodes | p nodes
    X, F, Y, P = 0, na, 2 * na, 2 * na + nn
    nvar = 2 * na + 2 * nn
    total = net.total_report_size()
    rows: list[tuple[dict[int, float], float, float]] = []
    out_arcs: dict[int, list[int]] = {v: [] for v in others}
    in_arcs: dict[int, list[int]] = {v: [] for v in others}
    for a, (u, v) in enumerate(arcs):
        out_arcs[u].append(a)
        if v != root:
            in_arcs[v].append(a)
    for u in others:
        i = node_ix[u]
        row = {X + a: 1.0 for a in out_arcs[u]}
        row[Y + i] = -1.0
        rows.append((row, 0.0, 0.0))
        row = {F + a: 1.0 for a in out_arcs[u]}
        for a in in_arcs[u]:
            row[F + a] = -1.0
        rows.append((row, float(net.report_size[u]), float(net.report_size[u])))
        row = {F + a: -1.0 for a in out_arcs[u]}
        row[P + i] = float(params.q)
        rows.append((row, 0.0, np.inf))
    for a, (u, v) in enumerate(arcs):
        rows.append(({F + a: 1.0, X + a: -float(total)}, -np.inf, 0.0))
        if v != root:
            rows.append(({X + a: 1.0, Y + node_ix[v]: -1.0}, -np.inf, 0.0))
    A = lil_matrix((len(rows), nvar))
    lo, hi = np.empty(len(rows)), np.empty(len(rows))
    for r, (row, l, h) in enumerate(rows):
        for c, val in row.items():
            A[r, c] = val
        lo[r], hi[r] = l, h
    lb = np.zeros(nvar)
    ub = np.concatenate([np.ones(na), np.full(na, float(total)), np.ones(nn), np.full(nn, float(total))])
    relays = net.relays
    for v in others:
        if v not in relays:
            lb[Y + node_ix[v]] = 1.0
    integrality = np.concatenate([np.ones(na), np.zeros(na), np.ones(nn), np.ones(nn)])
    c = np.zeros(nvar)
    c[P:] = 1.0
    res = milp(c, constraints=LinearConstraint(A.tocsr(), lo, hi), integrality=integrality, bounds=Bounds(lb, ub))
    if not res.success:
        raise RuntimeError(f"MILP solver failed: {res.message}")
    x = res.x
    parent = {}
    for a, (u, v) in enumerate(arcs):
        if x[X + a] > 0.5 and x[Y + node_ix[u]] > 0.5:
            parent[u] = v
    tree = RoutingTree(root, parent).pruned(net.sources)
    cost = tree_cost(tree, net, params)
    if cost != _scaled(params, round(res.fun)):
        raise RuntimeError("MILP objective disagrees with the extracted tree")
    return tree, cost
