"""Line-based text formats for networks and routing trees.

Network file::

    # comment
    net <n>
    param q <int> tx <num> rx <num> [budget <num>]
    node <id> <size> <source|relay|sink> [<x> <y>]
    edge <u> <v>

Tree file::

    root <id>
    parent <child> <parent>

Numbers are integers, decimals or ``p/q`` fractions.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .cost import CostParams, RoutingTree, as_fraction
from .graph import Network


def format_number(x) -> str:
    x = as_fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_params(params: CostParams) -> str:
    line = f"param q {params.q} tx {format_number(params.tx)} rx {format_number(params.rx)}"
    if params.budget is not None:
        line += f" budget {format_number(params.budget)}"
    return line


def write_network(net: Network, params: CostParams | None = None, comments: list[str] | None = None) -> str:
    lines = [f"# {c}" for c in comments or []]
    lines.append(f"net {net.node_count}")
    if params is not None:
        lines.append(format_params(params))
    for v in net.nodes:
        role = "sink" if v == net.sink else "source" if v in net.sources else "relay"
        line = f"node {v} {net.report_size[v]} {role}"
        if net.coords is not None:
            x, y = net.coords[v]
            line += f" {x!r} {y!r}"
        lines.append(line)
    lines.extend(f"edge {u} {v}" for u, v in sorted(net.edges))
    return "\n".join(lines) + "\n"


class FormatError(ValueError):
    pass


def read_network(text: str) -> tuple[Network, CostParams | None]:
    n = None
    params = None
    sizes: dict[int, int] = {}
    roles: dict[int, str] = {}
    coords: dict[int, tuple[float, float]] = {}
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0] == "net":
                n = int(tok[1])
            elif tok[0] == "param":
                kv = dict(zip(tok[1::2], tok[2::2]))
                params = CostParams(
                    int(kv["q"]),
                    Fraction(kv.get("tx", "1")),
                    Fraction(kv.get("rx", "1")),
                    Fraction(kv["budget"]) if "budget" in kv else None,
                )
            elif tok[0] == "node":
                v = int(tok[1])
                if v in sizes:
                    raise FormatError(f"node {v} declared twice")
                sizes[v] = int(tok[2])
                roles[v] = tok[3]
                if roles[v] not in ("source", "relay", "sink"):
                    raise FormatError(f"unknown role {tok[3]!r}")
                if len(tok) >= 6:
                    coords[v] = (float(tok[4]), float(tok[5]))
            elif tok[0] == "edge":
                edges.append((int(tok[1]), int(tok[2])))
            else:
                raise FormatError(f"unknown declaration {tok[0]!r}")
        except (IndexError, KeyError, ValueError) as exc:
            raise FormatError(f"line {lineno}: {exc}") from exc
    if n is None:
        raise FormatError("missing 'net' declaration")
    sinks = [v for v, r in roles.items() if r == "sink"]
    if len(sinks) != 1:
        raise FormatError("exactly one sink is required")
    if set(sizes) != set(range(n)):
        raise FormatError("node declarations must cover ids 0..n-1")
    sources = frozenset(v for v, r in roles.items() if r == "source")
    coord_tuple = tuple(coords[v] for v in range(n)) if len(coords) == n else None
    net = Network(n, frozenset(edges), tuple(sizes[v] for v in range(n)), sinks[0], sources, coord_tuple)
    return net, params


def write_tree(tree: RoutingTree, comments: list[str] | None = None) -> str:
    lines = [f"# {c}" for c in comments or []]
    lines.append(f"root {tree.root}")
    lines.extend(f"parent {c} {p}" for c, p in tree.edges())
    return "\n".join(lines) + "\n"


def read_tree(text: str) -> RoutingTree:
    root = None
    parent: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0] == "root":
                root = int(tok[1])
            elif tok[0] == "parent":
                c = int(tok[1])
                if c in parent:
                    raise FormatError(f"node {c} has two parents")
                parent[c] = int(tok[2])
            else:
                raise FormatError(f"unknown declaration {tok[0]!r}")
        except (IndexError, ValueError) as exc:
            raise FormatError(f"line {lineno}: {exc}") from exc
    if root is None:
        raise FormatError("missing 'root' declaration")
    return RoutingTree(root, parent)


def load_network(path) -> tuple[Network, CostParams | None]:
    return read_network(Path(path).read_text(encoding="utf-8"))


def load_tree(path) -> RoutingTree:
    return read_tree(Path(path).read_text(encoding="utf-8"))
