"""Random geometric sensor networks.

Nodes are dropped uniformly on a square field with the sink pinned at a
fixed point; two nodes are linked when their distance is at most the radio
range.  All randomness comes from numpy's PCG64 seeded with the configured
64-bit seed, so an instance is a pure function of its config.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .graph import Network, build_adjacency, is_connected

log = logging.getLogger(__name__)

MAX_ATTEMPTS = 1000


@dataclass(frozen=True)
class RggConfig:
    n: int = 100  # including the sink
    field: float = 100.0
    range: float = 20.0
    sink_at: tuple[float, float] = (50.0, 50.0)
    relay_prob: float = 0.3
    relays: bool = False  # draw relay roles (MECAT_RN mode)
    size_mode: str = "uniform"  # or "nonuniform": sizes uniform on 1..5
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if not 0 <= self.relay_prob < 1:
            raise ValueError("relay_prob must lie in [0, 1)")
        if self.range <= 0 or self.field <= 0:
            raise ValueError("range and field must be positive")
        if self.size_mode not in ("uniform", "nonuniform"):
            raise ValueError("size_mode must be 'uniform' or 'nonuniform'")


def _draw(cfg: RggConfig, seed: int) -> Network | None:
    rng = np.random.Generator(np.random.PCG64(seed))
    pts = rng.uniform(0.0, cfg.field, size=(cfg.n - 1, 2))
    coords = [tuple(map(float, cfg.sink_at))] + [(float(x), float(y)) for x, y in pts]
    xy = np.array(coords)
    d2 = ((xy[:, None, :] - xy[None, :, :]) ** 2).sum(axis=-1)
    iu, ju = np.nonzero(np.triu(d2 <= cfg.range**2, k=1))
    edges = frozenset(zip(iu.tolist(), ju.tolist()))
    if not is_connected(build_adjacency(range(cfg.n), edges)):
        return None
    if cfg.relays:
        is_relay = rng.random(cfg.n - 1) < cfg.relay_prob
    else:
        is_relay = np.zeros(cfg.n - 1, dtype=bool)
    if cfg.size_mode == "uniform":
        drawn = np.ones(cfg.n - 1, dtype=np.int64)
    else:
        drawn = rng.integers(1, 6, size=cfg.n - 1)
    sizes = [0] + [0 if r else int(s) for r, s in zip(is_relay, drawn)]
    if not any(sizes):
        return None
    sources = frozenset(v for v, s in enumerate(sizes) if s > 0)
    return Network(cfg.n, edges, tuple(sizes), 0, sources, tuple(coords))


def draw_rgg(cfg: RggConfig) -> tuple[Network, int]:
    """Network plus the seed offset that was needed to get a connected draw."""
    for offset in range(MAX_ATTEMPTS):
        net = _draw(cfg, (cfg.seed + offset) % 2**64)
        if net is not None:
            if offset:
                log.info("seed %d: connected draw after offset %d", cfg.seed, offset)
            return net, offset
    raise RuntimeError("generation failed; lower n or raise range")


def generate_rgg(cfg: RggConfig) -> Network:
    return draw_rgg(cfg)[0]
