"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 infeasible or failed instance.
"""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import algorithms, gadgets, io, oracle
from .cnd import CND_SOLVERS
from .cost import CostParams, check_budget, idle_relays, packets_sent, tree_cost, validate_tree
from .rgg import RggConfig, draw_rgg
from .sweep import MECAT_ALGORITHMS, RN_ALGORITHMS, SweepConfig, default_q_values, rows_to_csv, run_sweep
from .sweep import summarize, summary_to_csv

EXIT_USAGE = 1
EXIT_INFEASIBLE = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _params(args, file_params: CostParams | None) -> CostParams:
    base = file_params or CostParams(1)
    q = args.q if args.q is not None else (file_params.q if file_params else None)
    if q is None:
        raise UsageError("no aggregation ratio: pass --q or add a 'param' line to the network file")
    tx = Fraction(args.tx) if args.tx is not None else base.tx
    rx = Fraction(args.rx) if args.rx is not None else base.rx
    budget = Fraction(args.budget) if getattr(args, "budget", None) is not None else base.budget
    return CostParams(q, tx, rx, budget)


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--q", type=int, help="aggregation ratio (overrides the file)")
    p.add_argument("--tx", help="energy per packet sent")
    p.add_argument("--rx", help="energy per packet received")


def _parse_q_values(spec: str) -> tuple[int, ...]:
    """'2:50:2' (inclusive range) or a comma list."""
    if ":" in spec:
        parts = [int(x) for x in spec.split(":")]
        start, stop = parts[0], parts[1]
        step = parts[2] if len(parts) > 2 else 1
        return tuple(range(start, stop + 1, step))
    return tuple(int(x) for x in spec.split(","))


def _pairs(spec: str, sep: str) -> set[tuple[int, int]]:
    if not spec:
        return set()
    out = set()
    for item in spec.split(","):
        a, b = item.split(sep)
        out.add((int(a), int(b)))
    return out


def cmd_gen_rgg(args) -> int:
    cfg = RggConfig(
        n=args.n,
        field=args.field,
        range=args.range,
        sink_at=(args.sink_x, args.sink_y),
        relay_prob=args.relay_prob,
        relays=args.relays,
        size_mode=args.sizes,
        seed=args.seed,
    )
    net, offset = draw_rgg(cfg)
    params = CostParams(args.q, Fraction(args.tx), Fraction(args.rx))
    comments = [f"rgg seed {args.seed} offset {offset} n {args.n} range {args.range} sizes {args.sizes}"]
    _emit(io.write_network(net, params, comments), args.out)
    return 0


def cmd_solve(args) -> int:
    net, fp = io.load_network(args.net)
    params = _params(args, fp)
    tree = algorithms.solve(net, params, args.alg, seed=args.seed, cnd=args.cnd)
    validate_tree(tree, net, spanning=not net.relays)
    cost = tree_cost(tree, net, params)
    comments = [f"algorithm {args.alg}" + (f" cnd {args.cnd}" if args.cnd else ""), f"seed {args.seed}",
                f"cost {io.format_number(cost)}"]
    _emit(io.write_tree(tree, comments), args.out)
    if args.out:
        print(f"cost {io.format_number(cost)}")
    return 0


def cmd_eval(args) -> int:
    net, fp = io.load_network(args.net)
    params = _params(args, fp)
    tree = io.load_tree(args.tree)
    validate_tree(tree, net, spanning=not net.relays)
    for v, k in packets_sent(tree, net, params).items():
        print(f"packets {v} {k}")
    cost = tree_cost(tree, net, params)
    print(f"cost {io.format_number(cost)}")
    idle = idle_relays(tree, net)
    if idle:
        print(f"# lint: idle relays {' '.join(map(str, idle))} can be pruned")
    if params.budget is not None:
        ok = check_budget(tree, net, params)
        print(f"budget {io.format_number(params.budget)} {'feasible' if ok else 'exceeded'}")
        return 0 if ok else EXIT_INFEASIBLE
    return 0


def cmd_lb(args) -> int:
    net, fp = io.load_network(args.net)
    params = _params(args, fp)
    print(f"lower_bound {io.format_number(oracle.lower_bound(net, params))}")
    return 0


def cmd_oracle(args) -> int:
    net, fp = io.load_network(args.net)
    params = _params(args, fp)
    try:
        if args.milp:
            tree, cost = oracle.exact_optimum_milp(net, params)
        elif net.relays:
            tree, cost = oracle.brute_force_mecat_rn(net, params, cap=args.cap)
        else:
            tree, cost = oracle.brute_force_mecat(net, params, cap=args.cap)
    except oracle.OracleTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    _emit(io.write_tree(tree, [f"optimal cost {io.format_number(cost)}"]), args.out)
    if args.out:
        print(f"cost {io.format_number(cost)}")
    if params.budget is not None:
        ok = cost <= params.budget
        print(f"budget {io.format_number(params.budget)} {'feasible' if ok else 'infeasible'}", file=sys.stderr)
        return 0 if ok else EXIT_INFEASIBLE
    return 0


def cmd_gadget(args) -> int:
    if args.kind == "lbsm":
        weights = tuple(int(w) for w in args.weights.split(","))
        inst = gadgets.LbsmInstance(weights, args.right, frozenset(_pairs(args.edges, ":")), args.k)
        g = gadgets.gadget_lbsm_to_mecat(inst)
        comments = [f"LBSM gadget: left ids {list(g.left)}, right ids {list(g.right)}"]
    else:
        inst = gadgets.DsInstance(args.nodes, frozenset(_pairs(args.edges, "-")), args.k)
        g = gadgets.gadget_ds_to_mecat_rn(inst)
        comments = [f"dominating-set gadget: hub ids {list(g.hubs)}, leaf ids {list(g.leaves)}"]
    _emit(io.write_network(g.net, g.params, comments), args.out)
    return 0


def cmd_family(args) -> int:
    fam = gadgets.family_theorem4(args.size) if args.which == "t4" else gadgets.family_theorem5(args.size)
    comments = [f"family {args.which} size {args.size}; sources {list(fam.sources)}"]
    _emit(io.write_network(fam.net, fam.params, comments), args.out)
    return 0


def cmd_sweep(args) -> int:
    algs = tuple(args.algorithms.split(",")) if args.algorithms else (
        RN_ALGORITHMS if args.mode == "rn" else MECAT_ALGORITHMS)
    q_values = _parse_q_values(args.q) if args.q else default_q_values(args.sizes)
    cfg = SweepConfig(q_values, args.trials, algs, args.base_seed, Fraction(args.tx), Fraction(args.rx), args.timing)
    rgg = RggConfig(n=args.n, range=args.range, relays=args.mode == "rn", relay_prob=args.relay_prob,
                    size_mode=args.sizes)
    rows = run_sweep(cfg, rgg)
    text = rows_to_csv(rows)
    _emit(text, args.out)
    if args.summary:
        Path(args.summary).write_text(summary_to_csv(summarize(rows)), encoding="utf-8")
    if args.chart:
        from .plotting import emit_chart

        emit_chart(text, args.chart, title=f"{args.mode}, {args.sizes} report size")
    failed = sum(r.status != "ok" for r in rows)
    return EXIT_INFEASIBLE if failed else 0


def cmd_chart(args) -> int:
    from .plotting import emit_chart_file

    emit_chart_file(args.csv, args.out, args.title)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="aggtree", description="Minimum-energy data aggregation trees.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen-rgg", help="generate a random geometric network")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--field", type=float, default=100.0)
    p.add_argument("--range", type=float, default=20.0)
    p.add_argument("--sink-x", type=float, default=50.0)
    p.add_argument("--sink-y", type=float, default=50.0)
    p.add_argument("--relays", action="store_true", help="draw relay roles")
    p.add_argument("--relay-prob", type=float, default=0.3)
    p.add_argument("--sizes", choices=("uniform", "nonuniform"), default="uniform")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--tx", default="2")
    p.add_argument("--rx", default="1")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_gen_rgg)

    p = sub.add_parser("solve", help="build a routing tree")
    p.add_argument("--net", required=True)
    p.add_argument("--alg", choices=sorted(algorithms.ALGORITHMS), default="spt")
    p.add_argument("--cnd", choices=sorted(CND_SOLVERS), help="CND solver for alg3")
    p.add_argument("--seed", type=int, default=0)
    _add_param_flags(p)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("eval", help="price a tree and check the budget")
    p.add_argument("--net", required=True)
    p.add_argument("--tree", required=True)
    p.add_argument("--budget")
    _add_param_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("lb", help="energy lower bound")
    p.add_argument("--net", required=True)
    _add_param_flags(p)
    p.set_defaults(func=cmd_lb)

    p = sub.add_parser("oracle", help="exact optimum of a small instance")
    p.add_argument("--net", required=True)
    p.add_argument("--cap", type=int, help="node cap (default 9 / 10, or AGGTREE_ORACLE_CAP)")
    p.add_argument("--milp", action="store_true", help="use the mixed-integer program instead of enumeration")
    p.add_argument("--budget", help="report whether the optimum fits this budget")
    _add_param_flags(p)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gadget", help="emit a reduction gadget")
    p.add_argument("kind", choices=("lbsm", "ds"))
    p.add_argument("--weights", default="1", help="lbsm: left weights, e.g. 2,1")
    p.add_argument("--right", type=int, default=1, help="lbsm: number of right nodes")
    p.add_argument("--nodes", type=int, default=1, help="ds: number of vertices")
    p.add_argument("--edges", default="", help="lbsm: i:j,...  ds: u-v,...")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_gadget)

    p = sub.add_parser("family", help="emit an adversarial relay instance")
    p.add_argument("which", choices=("t4", "t5"))
    p.add_argument("--size", type=int, required=True)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("sweep", help="run the random-network experiment")
    p.add_argument("--mode", choices=("mecat", "rn"), default="mecat")
    p.add_argument("--sizes", choices=("uniform", "nonuniform"), default="uniform")
    p.add_argument("--trials", type=int, default=30)
    p.add_argument("--q", help="q values: start:stop:step (inclusive) or comma list")
    p.add_argument("--algorithms", help="comma-separated algorithm names")
    p.add_argument("--base-seed", type=int, default=0)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--range", type=float, default=20.0)
    p.add_argument("--relay-prob", type=float, default=0.3)
    p.add_argument("--tx", default="2")
    p.add_argument("--rx", default="1")
    p.add_argument("--timing", action="store_true", help="record runtime_ms (output no longer byte-stable)")
    p.add_argument("-o", "--out", help="per-row CSV (stdout if omitted)")
    p.add_argument("--summary", help="write per-(q, algorithm) means here")
    p.add_argument("--chart", help="render a cost-vs-q figure (svg, png or pdf)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("chart", help="render a sweep CSV")
    p.add_argument("--csv", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--title")
    p.set_defaults(func=cmd_chart)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (io.FormatError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
