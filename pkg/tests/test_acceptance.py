"""Exit criteria, one test (or a small group) per criterion.

Each test carries ``@pytest.mark.acceptance(number, title)``; conftest prints
one PASS/FAIL line per criterion at the end of the run, together with the
measured values the tests report.
"""

from __future__ import annotations

import itertools
import time
from fractions import Fraction

import numpy as np
import pytest

from aggtree.algorithms import solve_mecat_rn_alg2, solve_mecat_rn_alg3, solve_mecat_spt, solve_rn_spt, solve_steiner
from aggtree.cli import main
from aggtree.cost import CostParams, RoutingTree, check_budget, descendant_loads, packets_sent, tree_cost
from aggtree.gadgets import (
    DsInstance,
    LbsmInstance,
    dominating_set_solve,
    family_theorem4,
    family_theorem5,
    gadget_ds_to_mecat_rn,
    gadget_lbsm_to_mecat,
    lbsm_solve,
    semi_matching_loads,
)
from aggtree.graph import weighted_metric_closure
from aggtree.oracle import brute_force_mecat, brute_force_mecat_rn, exact_optimum_milp, oracle_within_budget
from aggtree.rgg import RggConfig
from aggtree.sweep import MECAT_ALGORITHMS, RN_ALGORITHMS, SweepConfig, run_sweep, summarize
from aggtree.trees import check_last_conditions, last_tree, shortest_path_tree

from _instances import (
    EXAMPLE1_TREE,
    EXAMPLE1_VARIANT,
    example1_network,
    last_conditions_hold,
    random_network,
    random_weighted_graph,
)

acceptance = pytest.mark.acceptance


# 1 -------------------------------------------------------------------------


@acceptance(1, "worked example: 11 packets / cost 22, variant 9 packets / cost 18")
def test_ac1_worked_example(report):
    net = example1_network()
    params = CostParams(3, 1, 1)
    tree, variant = RoutingTree(0, EXAMPLE1_TREE), RoutingTree(0, EXAMPLE1_VARIANT)
    start = time.perf_counter()
    sent = packets_sent(tree, net, params)
    cost = tree_cost(tree, net, params)
    alt_packets = sum(packets_sent(variant, net, params).values())
    alt_cost = tree_cost(variant, net, params)
    elapsed = time.perf_counter() - start
    assert sorted(sent.values(), reverse=True) == [3, 2, 2, 1, 1, 1, 1]
    assert (sum(sent.values()), cost) == (11, 22)
    assert (alt_packets, alt_cost) == (9, 18)
    assert elapsed < 1e-3
    report(f"{elapsed * 1e6:.0f} us")


# 2 -------------------------------------------------------------------------


@acceptance(2, "shortest-path tree < 2 x optimum on 500 random instances")
def test_ac2_spt_within_two(report):
    rng = np.random.default_rng(20240302)
    start = time.perf_counter()
    worst = Fraction(0)
    violations = 0
    for _ in range(500):
        n = int(rng.integers(3, 9))
        net = random_network(rng, n, p=float(rng.uniform(0.15, 0.6)), max_size=5)
        params = CostParams(int(rng.integers(1, 9)), 1, 1)
        _, opt = brute_force_mecat(net, params)
        ratio = Fraction(tree_cost(solve_mecat_spt(net), net, params)) / opt
        violations += ratio >= 2
        worst = max(worst, ratio)
    elapsed = time.perf_counter() - start
    report(f"worst ratio {float(worst):.3f}, {elapsed:.1f} s")
    assert violations == 0
    assert elapsed <= 60


# 3 -------------------------------------------------------------------------


@acceptance(3, "descendant sum identical across shortest-path-tree tie-breaks")
def test_ac3_descendant_sum_invariant(report):
    rng = np.random.default_rng(31)
    instances = 0
    differing_trees = 0
    while instances < 100:
        net = random_network(rng, int(rng.integers(6, 12)), p=0.45, max_size=5)
        perms = {tuple(rng.permutation(net.node_count).tolist()) for _ in range(40)}
        perms = sorted(perms)[:5]
        if len(perms) < 5:
            continue
        trees = [shortest_path_tree(net, 0, rank=dict(enumerate(p))) for p in perms]
        sums = {sum(descendant_loads(t, net).values()) for t in trees}
        assert len(sums) == 1
        differing_trees += len(set(trees)) > 1
        instances += 1
    report(f"{instances} instances x 5 tie-breaks; {differing_trees} had distinct trees")
    assert differing_trees > 0


# 4 -------------------------------------------------------------------------


@acceptance(4, "(3,2)-LAST conditions on 1000 metric-closure graphs")
def test_ac4_last_contract(report):
    rng = np.random.default_rng(4)
    violations = 0
    for _ in range(1000):
        n = int(rng.integers(2, 31))
        g = random_weighted_graph(rng, n, p=float(rng.uniform(0.05, 0.4)), max_w=20)
        k = int(rng.integers(2, n + 1))
        terms = [0] + sorted(rng.choice(np.arange(1, n), size=k - 1, replace=False).tolist())
        closure = weighted_metric_closure(g, terms)
        tree = last_tree(closure.graph, 0)
        ok = check_last_conditions(closure.graph, tree) and last_conditions_hold(closure.graph, tree)
        violations += not ok
    report(f"{violations} violations")
    assert violations == 0


# 5 -------------------------------------------------------------------------


@acceptance(5, "relay algorithms: alg2 <= 7 x optimum, alg3 < 14 x optimum")
def test_ac5_relay_approximation(report):
    rng = np.random.default_rng(55)
    ratios2, ratios3 = [], []
    while len(ratios2) < 200:
        n = int(rng.integers(4, 10))
        net = random_network(rng, n, p=float(rng.uniform(0.15, 0.45)), relay_prob=0.4)
        if not net.relays:
            continue
        params = CostParams(int(rng.integers(1, 9)), int(rng.integers(1, 3)), 1)
        _, opt = brute_force_mecat_rn(net, params)
        ratios2.append(Fraction(tree_cost(solve_mecat_rn_alg2(net), net, params)) / opt)
        ratios3.append(Fraction(tree_cost(solve_mecat_rn_alg3(net, params, "salman"), net, params)) / opt)
    report(
        f"alg2 mean {float(np.mean(ratios2)):.3f} max {float(max(ratios2)):.3f}; "
        f"alg3 mean {float(np.mean(ratios3)):.3f} max {float(max(ratios3)):.3f}"
    )
    assert all(r <= 7 for r in ratios2)
    assert all(r < 14 for r in ratios3)


# 6 -------------------------------------------------------------------------


@acceptance(6, "adversarial families")
def test_ac6_detour_family_steiner_cost():
    fam = family_theorem4(5)
    assert tree_cost(solve_steiner(fam.net), fam.net, fam.params) == 18


@acceptance(6, "adversarial families")
def test_ac6_detour_family_optimum(report):
    fam = family_theorem4(5)
    _, opt = brute_force_mecat_rn(fam.net, fam.params)
    report(f"detour family |U|=5 optimum {opt}")
    assert opt == 16


@acceptance(6, "adversarial families")
def test_ac6_relay_chain_family_costs():
    fam = family_theorem5(5)
    assert tree_cost(solve_rn_spt(fam.net), fam.net, fam.params) == 22
    assert brute_force_mecat_rn(fam.net, fam.params, cap=fam.net.node_count)[1] == 10


@acceptance(6, "adversarial families")
def test_ac6_ratios_grow_with_size(report):
    steiner, spt = [], []
    for size in range(4, 11):
        f4 = family_theorem4(size)
        steiner.append(Fraction(tree_cost(solve_steiner(f4.net), f4.net, f4.params)) / exact_optimum_milp(f4.net, f4.params)[1])
        f5 = family_theorem5(size)
        spt.append(Fraction(tree_cost(solve_rn_spt(f5.net), f5.net, f5.params)) / exact_optimum_milp(f5.net, f5.params)[1])
    report("Steiner/opt " + " ".join(f"{float(r):.2f}" for r in steiner))
    report("SPT/opt " + " ".join(f"{float(r):.2f}" for r in spt))
    assert all(a <= b for a, b in zip(steiner, steiner[1:]))
    assert all(a <= b for a, b in zip(spt, spt[1:]))
    assert steiner[-1] > steiner[1] and spt[-1] > spt[1]


# 7 -------------------------------------------------------------------------


def _lbsm_instances(max_nodes: int = 6, max_weight: int = 3):
    for nl in range(1, max_nodes):
        for nr in range(1, max_nodes + 1 - nl):
            pairs = [(i, j) for i in range(nl) for j in range(nr)]
            for mask in range(1 << len(pairs)):
                edges = frozenset(p for b, p in enumerate(pairs) if mask >> b & 1)
                for weights in itertools.product(range(1, max_weight + 1), repeat=nl):
                    for k in range(1, sum(weights) + 1):
                        yield LbsmInstance(weights, nr, edges, k)


def _ds_instances(max_nodes: int = 5):
    for n in range(1, max_nodes + 1):
        pairs = list(itertools.combinations(range(n), 2))
        for mask in range(1 << len(pairs)):
            edges = frozenset(p for b, p in enumerate(pairs) if mask >> b & 1)
            for k in range(1, n + 1):
                yield DsInstance(n, edges, k)


@pytest.fixture(scope="module")
def reduction_clock():
    return {"seconds": 0.0}


@acceptance(7, "reduction soundness, exhaustive at small sizes")
def test_ac7_semi_matching_reduction(report, reduction_clock):
    start = time.perf_counter()
    count = mismatches = 0
    for inst in _lbsm_instances():
        matching = lbsm_solve(inst)
        if any(not inst.neighbours(i) for i in range(len(inst.weights))):
            # an uncovered left node leaves the gadget disconnected
            with pytest.raises(ValueError, match="disconnected"):
                gadget_lbsm_to_mecat(inst)
            feasible = False
        else:
            g = gadget_lbsm_to_mecat(inst)
            tree = oracle_within_budget(g.net, g.params, cap=64)
            feasible = tree is not None
            if feasible:
                back = g.semi_matching_from_tree(tree)
                assert max(semi_matching_loads(inst, back)) <= inst.k
            if matching is not None:
                assert check_budget(g.tree_from_semi_matching(matching), g.net, g.params)
        mismatches += feasible != (matching is not None)
        count += 1
    reduction_clock["seconds"] += time.perf_counter() - start
    report(f"semi-matching: {count} instances, {mismatches} mismatches")
    assert mismatches == 0


@acceptance(7, "reduction soundness, exhaustive at small sizes")
def test_ac7_dominating_set_reduction(report, reduction_clock):
    start = time.perf_counter()
    count = mismatches = 0
    for inst in _ds_instances():
        dom = dominating_set_solve(inst)
        g = gadget_ds_to_mecat_rn(inst)
        tree = oracle_within_budget(g.net, g.params, cap=64)
        if tree is not None:
            assert len(g.dominating_set_from_tree(tree)) <= inst.k
        if dom is not None:
            assert check_budget(g.tree_from_dominating_set(dom), g.net, g.params)
        mismatches += (tree is not None) != (dom is not None)
        count += 1
    reduction_clock["seconds"] += time.perf_counter() - start
    report(f"dominating set: {count} instances, {mismatches} mismatches; total {reduction_clock['seconds']:.0f} s")
    assert mismatches == 0
    assert reduction_clock["seconds"] <= 300


# 8 -------------------------------------------------------------------------


def _sweep(mode: str, sizes: str, q_values):
    algs = RN_ALGORITHMS if mode == "rn" else MECAT_ALGORITHMS
    cfg = SweepConfig(q_values=tuple(q_values), trials=30, algorithms=algs)
    return run_sweep(cfg, RggConfig(relays=mode == "rn", size_mode=sizes))


@pytest.fixture(scope="session")
def full_sweeps():
    return {
        ("mecat", "uniform"): _sweep("mecat", "uniform", [*range(2, 51), 99, 100]),
        ("mecat", "nonuniform"): _sweep("mecat", "nonuniform", range(2, 101)),
        ("rn", "uniform"): _sweep("rn", "uniform", range(2, 51)),
        ("rn", "nonuniform"): _sweep("rn", "nonuniform", range(2, 101)),
    }


def _means(rows):
    return {(m.q, m.algorithm): m for m in summarize(rows)}


@acceptance(8, "full-scale simulation trends")
def test_ac8a_spt_below_spanning_baseline(full_sweeps, report):
    means = _means(full_sweeps["mecat", "uniform"])
    gaps = [means[q, "spanning"].mean_cost - means[q, "spt"].mean_cost for q in range(2, 51)]
    report(f"(a) spanning minus SPT mean cost: {float(min(gaps)):.1f} .. {float(max(gaps)):.1f}")
    assert all(g >= 0 for g in gaps)


@acceptance(8, "full-scale simulation trends")
def test_ac8b_spt_one_packet_per_node(full_sweeps):
    rows = [r for r in full_sweeps["mecat", "uniform"] if r.algorithm == "spt" and r.q >= 99]
    assert len(rows) == 60
    assert {r.cost for r in rows} == {297}


@acceptance(8, "full-scale simulation trends")
def test_ac8c_means_above_lower_bound(full_sweeps):
    for rows in full_sweeps.values():
        assert all(r.status == "ok" for r in rows)
        for m in summarize(rows):
            assert m.mean_cost >= m.mean_lower_bound, (m.q, m.algorithm)


@acceptance(8, "full-scale simulation trends")
def test_ac8d_relay_trees_approach_bound(full_sweeps, report):
    means = _means(full_sweeps["rn", "uniform"])
    for alg in ("alg2", "alg3"):
        ratio = {q: means[q, alg].mean_cost / means[q, alg].mean_lower_bound for q in (2, 50)}
        report(f"(d) {alg} cost/LB q=2 {float(ratio[2]):.3f}, q=50 {float(ratio[50]):.3f}")
        assert ratio[50] <= Fraction(13, 10)
        assert ratio[50] < ratio[2]


# 9 -------------------------------------------------------------------------


@acceptance(9, "default sweep is byte-for-byte reproducible")
def test_ac9_default_sweep_deterministic(tmp_path, report):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["sweep", "-o", str(first)]) == 0
    assert main(["sweep", "-o", str(second)]) == 0
    data = first.read_bytes()
    assert data == second.read_bytes()
    report(f"{len(data.splitlines()) - 1} rows identical")
