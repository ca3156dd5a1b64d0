from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aggtree.cost import CostParams, RoutingTree
from aggtree.io import FormatError, read_network, read_tree, write_network, write_tree
from aggtree.rgg import RggConfig, draw_rgg, generate_rgg

from _instances import EXAMPLE1_TREE, example1_network, random_network


def test_example1_round_trip():
    net = example1_network()
    params = CostParams(3, 1, 1, 22)
    text = write_network(net, params, ["example"])
    assert text.startswith("# example\nnet 8\nparam q 3 tx 1 rx 1 budget 22\n")
    back, bp = read_network(text)
    assert back == net and bp == params
    tree = RoutingTree(0, EXAMPLE1_TREE)
    assert read_tree(write_tree(tree)) == tree


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_random_round_trip(seed):
    net = random_network(np.random.default_rng(seed), 9, relay_prob=0.3)
    params = CostParams(4, Fraction(1, 3), Fraction(5, 2))
    back, bp = read_network(write_network(net, params))
    assert back == net and bp == params


def test_coordinates_survive_round_trip():
    net = generate_rgg(RggConfig(n=15, range=40, seed=3))
    back, params = read_network(write_network(net))
    assert back.coords == net.coords and params is None


def test_hand_written_file_with_comments():
    text = """
    # a relay in the middle
    net 3
    node 0 0 sink
    node 1 0 relay   # forwards only
    node 2 4 source
    edge 0 1
    edge 1 2
    """
    net, params = read_network(text)
    assert net.relays == {1} and net.report_size == (0, 0, 4) and params is None


@pytest.mark.parametrize(
    "text, msg",
    [
        ("node 0 0 sink\n", "missing 'net'"),
        ("net 2\nnode 0 0 sink\nnode 1 1 sink\nedge 0 1\n", "exactly one sink"),
        ("net 2\nnode 0 0 sink\nedge 0 1\n", "cover ids"),
        ("net 2\nnode 0 0 sink\nnode 1 1 leaf\nedge 0 1\n", "unknown role"),
        ("net 2\nnode 0 0 sink\nnode 0 1 source\n", "declared twice"),
        ("net 2\nvertex 0\n", "unknown declaration"),
        ("net 2\nparam tx 1\n", "line 2"),
    ],
)
def test_malformed_networks(text, msg):
    with pytest.raises(FormatError, match=msg):
        read_network(text)


def test_invariants_checked_on_read():
    with pytest.raises(ValueError, match="disconnected"):
        read_network("net 3\nnode 0 0 sink\nnode 1 1 source\nnode 2 1 source\nedge 0 1\n")


def test_malformed_trees():
    with pytest.raises(FormatError, match="missing 'root'"):
        read_tree("parent 1 0\n")
    with pytest.raises(FormatError, match="two parents"):
        read_tree("root 0\nparent 1 0\nparent 1 2\n")


def test_rgg_two_nodes_in_range_always_connect():
    for seed in range(10):
        net, offset = draw_rgg(RggConfig(n=2, field=10, range=15, sink_at=(5, 5), seed=seed))
        assert net.edges == {(0, 1)} and offset == 0


def test_rgg_is_deterministic():
    cfg = RggConfig(n=60, relays=True, size_mode="nonuniform", seed=12345)
    assert write_network(generate_rgg(cfg)) == write_network(generate_rgg(cfg))
    assert write_network(generate_rgg(cfg)) != write_network(generate_rgg(RggConfig(n=60, seed=12346)))


def test_rgg_roles_and_sizes():
    net = generate_rgg(RggConfig(relays=True, size_mode="nonuniform", seed=5))
    assert net.node_count == 100 and net.sink == 0 and net.coords[0] == (50.0, 50.0)
    assert set(net.report_size[v] for v in net.sources) <= {1, 2, 3, 4, 5}
    assert 0 < len(net.relays) < 99
    plain = generate_rgg(RggConfig(seed=5))
    assert not plain.relays and set(plain.report_size[1:]) == {1}


def test_rgg_mean_degree_near_analytic_value():
    degrees = []
    for seed in range(30):
        net = generate_rgg(RggConfig(seed=seed))
        degrees.append(2 * len(net.edges) / net.node_count)
    expected = 100 * np.pi * 20**2 / 100**2
    assert abs(np.mean(degrees) - expected) <= 0.2 * expected


def test_rgg_retries_with_logged_offset(caplog):
    caplog.set_level("INFO", logger="aggtree.rgg")
    offsets = [draw_rgg(RggConfig(n=40, range=18, seed=s))[1] for s in range(20)]
    assert any(offsets)
    assert "offset" in caplog.text


def test_rgg_gives_up():
    with pytest.raises(RuntimeError, match="generation failed"):
        draw_rgg(RggConfig(n=50, range=0.5, seed=0))


def test_rgg_config_validation():
    with pytest.raises(ValueError):
        RggConfig(n=1)
    with pytest.raises(ValueError):
        RggConfig(size_mode="gaussian")
