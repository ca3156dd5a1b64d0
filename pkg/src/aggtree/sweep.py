"""Experiment sweep over random networks and aggregation ratios.

Each trial draws one network, builds every algorithm's tree once (the
constructions do not depend on ``q``) and then prices it at every ``q``.
Output rows are exact: costs and bounds are written as integers or ``p/q``.
"""

from __future__ import annotations

import csv
import io
import logging
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .algorithms import ALGORITHMS
from .cost import CostParams, RoutingTree, ceil_div, descendant_loads
from .graph import Network
from .io import format_number
from .oracle import LowerBound
from .rgg import RggConfig, draw_rgg

log = logging.getLogger(__name__)

MECAT_ALGORITHMS = ("spt", "spanning")
RN_ALGORITHMS = ("spt-rn", "steiner", "alg2", "alg3", "alg3-sp-only")
COLUMNS = ("trial", "seed", "offset", "q", "algorithm", "cost", "lower_bound", "runtime_ms", "status")


def default_q_values(size_mode: str = "uniform") -> tuple[int, ...]:
    return tuple(range(2, 51 if size_mode == "uniform" else 101, 2))


@dataclass(frozen=True)
class SweepConfig:
    q_values: tuple[int, ...] = field(default_factory=default_q_values)
    trials: int = 30
    algorithms: tuple[str, ...] = MECAT_ALGORITHMS
    base_seed: int = 0
    tx: Fraction = Fraction(2)
    rx: Fraction = Fraction(1)
    timing: bool = False  # runtime_ms left blank unless set, keeping output byte-stable

    def __post_init__(self) -> None:
        if any(int(q) != q or q < 1 for q in self.q_values):
            raise ValueError("q values must be positive integers")
        for name in self.algorithms:
            if name not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {name!r}")


@dataclass(frozen=True)
class SweepRow:
    trial: int
    seed: int
    offset: int
    q: int
    algorithm: str
    cost: object
    lower_bound: object
    runtime_ms: float | None
    status: str = "ok"

    def as_csv(self) -> list[str]:
        return [
            str(self.trial),
            str(self.seed),
            str(self.offset),
            str(self.q),
            self.algorithm,
            "" if self.cost is None else format_number(self.cost),
            format_number(self.lower_bound),
            "" if self.runtime_ms is None else f"{self.runtime_ms:.3f}",
            self.status,
        ]


def trial_seeds(base_seed: int, trials: int) -> list[int]:
    children = np.random.SeedSequence(base_seed).spawn(trials)
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in children]


def packet_totals(tree: RoutingTree, net: Network, q_values) -> dict[int, int]:
    des = descendant_loads(tree, net)
    loads = [des[v] + net.report_size[v] for v in tree.members if v != tree.root]
    return {q: sum(ceil_div(x, q) for x in loads) for q in q_values}


def run_trial(trial: int, seed: int, cfg: SweepConfig, rgg: RggConfig) -> list[SweepRow]:
    net, offset = draw_rgg(replace(rgg, seed=seed))
    params = CostParams(1, cfg.tx, cfg.rx)
    bound = LowerBound.of(net)
    lbs = {q: bound.value(params.with_q(q)) for q in cfg.q_values}
    rows = []
    for name in cfg.algorithms:
        start = time.perf_counter()
        try:
            tree = ALGORITHMS[name].run(net, params, seed)
            totals = packet_totals(tree, net, cfg.q_values)
        except Exception as exc:  # a failing solver marks its rows and the sweep goes on
            log.warning("trial %d: %s failed: %s", trial, name, exc)
            rows.extend(SweepRow(trial, seed, offset, q, name, None, lbs[q], None, "failed") for q in cfg.q_values)
            continue
        elapsed = (time.perf_counter() - start) * 1000 if cfg.timing else None
        for q in cfg.q_values:
            cost = params.per_packet * totals[q]
            rows.append(SweepRow(trial, seed, offset, q, name, cost, lbs[q], elapsed))
    return rows


def run_sweep(cfg: SweepConfig, rgg: RggConfig = RggConfig()) -> list[SweepRow]:
    rows: list[SweepRow] = []
    for trial, seed in enumerate(trial_seeds(cfg.base_seed, cfg.trials)):
        rows.extend(run_trial(trial, seed, cfg, rgg))
    order = {name: i for i, name in enumerate(cfg.algorithms)}
    return sorted(rows, key=lambda r: (r.trial, r.q, order[r.algorithm]))


def rows_to_csv(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    writer.writerows(r.as_csv() for r in rows)
    return buf.getvalue()


@dataclass(frozen=True)
class MeanRow:
    q: int
    algorithm: str
    mean_cost: Fraction
    mean_lower_bound: Fraction
    trials: int


def summarize(rows) -> list[MeanRow]:
    """Mean cost and mean bound per (q, algorithm) over successful trials.

    Accepts ``SweepRow`` objects or dicts read back from a sweep CSV.
    """
    groups: dict[tuple[int, str], list[tuple[Fraction, Fraction]]] = {}
    seen_algs: list[str] = []
    for r in rows:
        if isinstance(r, dict):
            q, alg, status = int(r["q"]), r["algorithm"], r["status"]
            cost = Fraction(r["cost"]) if r["cost"] else None
            lb = Fraction(r["lower_bound"])
        else:
            q, alg, status, cost, lb = r.q, r.algorithm, r.status, r.cost, Fraction(r.lower_bound)
        if alg not in seen_algs:
            seen_algs.append(alg)
        if status != "ok":
            continue
        groups.setdefault((q, alg), []).append((Fraction(cost), lb))
    out = []
    for (q, alg), vals in sorted(groups.items(), key=lambda kv: (kv[0][0], seen_algs.index(kv[0][1]))):
        n = len(vals)
        out.append(MeanRow(q, alg, sum(c for c, _ in vals) / n, sum(b for _, b in vals) / n, n))
    return out


def summary_to_csv(means: list[MeanRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("q", "algorithm", "mean_cost", "mean_lower_bound", "trials"))
    for m in means:
        writer.writerow((m.q, m.algorithm, f"{float(m.mean_cost):.6f}", f"{float(m.mean_lower_bound):.6f}", m.trials))
    return buf.getvalue()


def read_rows(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))
