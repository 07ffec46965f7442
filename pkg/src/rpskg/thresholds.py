"""Monte Carlo checks of the G(n, p) isolated-vertex and connectivity thresholds."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from . import rng
from .analysis import (
    DiscretePmf,
    component_labels,
    expected_isolated,
    tv_distance,
    vertex_degrees,
)
from .errors import KronError, TooLarge
from .generators import GenConfig, Model, generate, generate_bernoulli


class Mode(str, Enum):
    ISOLATED = "isolated"
    CONNECTED = "connected"


class Side(str, Enum):
    ABOVE = "above"
    BELOW = "below"


@dataclass(frozen=True)
class ThresholdConfig:
    n: int
    alpha: float
    trials: int
    mode: Mode
    side: Side
    rng_seed: int = 0
    p: Optional[float] = None  # overrides the regime's link probability

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        object.__setattr__(self, "side", Side(self.side))
        if self.n < 2 or self.trials < 1:
            raise KronError("need n >= 2 and trials >= 1")

    @property
    def p_used(self) -> float:
        if self.p is not None:
            return float(self.p)
        log_n = math.log(self.n)
        if self.side is Side.BELOW:
            p = (log_n - self.alpha) / self.n
        elif self.mode is Mode.CONNECTED:
            p = max(9 * math.e / self.n, (log_n + self.alpha) / self.n)
        else:
            p = (log_n + self.alpha) / self.n
        return min(1.0, max(0.0, p))


@dataclass(frozen=True)
class ThresholdReport:
    config: ThresholdConfig
    fraction_with_property: float
    theoretical_bound: float
    p_used: float


def _chebyshev_no_isolated(n: int, p: float) -> float:
    """Upper bound ``1/E[X] + p/(1-p)`` on the chance of no isolated vertex."""
    if p >= 1.0:
        return 1.0
    mean = expected_isolated(n, p)
    return math.inf if mean == 0 else 1.0 / mean + p / (1.0 - p)


def isolated_bound(cfg: ThresholdConfig) -> float:
    p = cfg.p_used
    if cfg.side is Side.ABOVE:
        return math.exp(p) * math.exp(-cfg.alpha)
    return _chebyshev_no_isolated(cfg.n, p)


def connectivity_bound(cfg: ThresholdConfig) -> float:
    """ABOVE: bound on P[disconnected]; BELOW: bound on P[connected]."""
    p = cfg.p_used
    if cfg.side is Side.ABOVE:
        a = cfg.alpha
        return math.exp(p) * math.exp(-a) + math.exp(4 - 2 * a) + math.exp(3 - a)
    return _chebyshev_no_isolated(cfg.n, p)


def _run_trials(cfg: ThresholdConfig, has_property, workers: int) -> float:
    p = cfg.p_used

    def trial(t):
        edges = generate_bernoulli(cfg.n, p, rng.derive_seed(cfg.rng_seed, t))
        return bool(has_property(edges))

    if workers <= 1:
        hits = [trial(t) for t in range(cfg.trials)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = list(pool.map(trial, range(cfg.trials)))
    return sum(hits) / cfg.trials


def _has_isolated(edges) -> bool:
    return bool((vertex_degrees(edges, "undirected") == 0).any())


def _is_connected(edges) -> bool:
    labels = component_labels(edges.node_count, edges.src, edges.dst)
    return bool((labels == 0).all())


def isolated_threshold_experiment(cfg: ThresholdConfig, workers: int = 1) -> ThresholdReport:
    """Fraction of G(n, p) draws with at least one isolated vertex."""
    if cfg.mode is not Mode.ISOLATED:
        raise KronError("config mode must be isolated")
    frac = _run_trials(cfg, _has_isolated, workers)
    return ThresholdReport(cfg, frac, isolated_bound(cfg), cfg.p_used)


def connectivity_threshold_experiment(cfg: ThresholdConfig, workers: int = 1) -> ThresholdReport:
    """Fraction of G(n, p) draws that are connected."""
    if cfg.mode is not Mode.CONNECTED:
        raise KronError("config mode must be connected")
    frac = _run_trials(cfg, _is_connected, workers)
    return ThresholdReport(cfg, frac, connectivity_bound(cfg), cfg.p_used)


def run_threshold(cfg: ThresholdConfig, workers: int = 1) -> ThresholdReport:
    if cfg.mode is Mode.ISOLATED:
        return isolated_threshold_experiment(cfg, workers)
    return connectivity_threshold_experiment(cfg, workers)


# --------------------------------------------------------------------------
# exhaustive oracle


def brute_force_graph_stats(n: int, p: float) -> tuple[float, float]:
    """Exact ``(E[isolated], P[connected])`` for G(n, p) by enumerating every labelled graph."""
    if n > 5:
        raise TooLarge(f"n={n}: enumeration is limited to n <= 5")
    if n < 1:
        raise KronError("n must be >= 1")
    pairs = list(itertools.combinations(range(n), 2))
    mean_isolated = 0.0
    p_connected = 0.0
    for mask in range(1 << len(pairs)):
        present = [pair for i, pair in enumerate(pairs) if mask >> i & 1]
        k = len(present)
        weight = p**k * (1 - p) ** (len(pairs) - k)
        adj = [set() for _ in range(n)]
        for a, b in present:
            adj[a].add(b)
            adj[b].add(a)
        mean_isolated += weight * sum(1 for nb in adj if not nb)
        seen = {0}
        stack = [0]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) == n:
            p_connected += weight
    return mean_isolated, p_connected


def monte_carlo_isolated(n: int, p: float, trials: int, rng_seed: int) -> np.ndarray:
    """Isolated-vertex counts of ``trials`` small G(n, p) graphs, drawn pair by pair."""
    pairs = np.array(list(itertools.combinations(range(n), 2)), dtype=np.int64).reshape(-1, 2)
    u = rng.uniforms(rng_seed, rng.PAIRS, np.arange(trials)[:, None], np.arange(len(pairs))[None, :])
    present = u < p
    deg = np.zeros((trials, n), dtype=np.int64)
    for j, (a, b) in enumerate(pairs):
        deg[:, a] += present[:, j]
        deg[:, b] += present[:, j]
    return (deg == 0).sum(axis=1)


# --------------------------------------------------------------------------
# separation probe


def pooled_degree_pmf(cfg: GenConfig, trials: int, rng_seed: int, workers: int = 1) -> DiscretePmf:
    """Degree pmf pooled over ``trials`` graphs of one configuration.

    Out-degree for the directed models, undirected degree for G(n, p).
    """
    direction = "undirected" if cfg.model is Model.BERNOULLI else "out"
    tally = np.zeros(1, dtype=np.int64)
    for t in range(trials):
        trial_cfg = GenConfig(**{**cfg.__dict__, "rng_seed": rng.derive_seed(rng_seed, t)})
        counts = np.bincount(vertex_degrees(generate(trial_cfg, workers), direction))
        if len(counts) > len(tally):
            tally = np.pad(tally, (0, len(counts) - len(tally)))
        tally[: len(counts)] += counts
    return DiscretePmf.from_counts(tally)


def identifiability_separation_probe(
    cfg_a: GenConfig, cfg_b: GenConfig, trials: int, rng_seed: int = 0, workers: int = 1
) -> float:
    """TV distance between the pooled degree laws of two configurations.

    Each side draws from its own derived seed, so identical configurations
    give a sampling-noise-sized value rather than zero.
    """
    if trials < 1:
        raise KronError("trials must be >= 1")
    pa = pooled_degree_pmf(cfg_a, trials, rng.derive_seed(rng_seed, 0), workers)
    pb = pooled_degree_pmf(cfg_b, trials, rng.derive_seed(rng_seed, 1), workers)
    return tv_distance(pa, pb)
