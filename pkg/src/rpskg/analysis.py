"""Degree statistics, pmfs, connectivity and the oscillation score."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, NamedTuple

import numpy as np
from scipy import signal, stats

from .errors import IdOutOfRange, InsufficientData, KronError
from .generators import EdgeList

PMF_TOL = 1e-9
TAIL_MASS = 1e-12


class Direction(str, Enum):
    OUT = "out"
    IN = "in"
    UNDIRECTED = "undirected"


def _check_ids(edges: EdgeList) -> None:
    if len(edges) == 0:
        return
    lo = min(edges.src.min(), edges.dst.min())
    hi = max(edges.src.max(), edges.dst.max())
    if lo < 0 or hi >= edges.node_count:
        raise IdOutOfRange(f"vertex ids span [{lo}, {hi}] but node_count is {edges.node_count}")


# --------------------------------------------------------------------------
# degree histograms


@dataclass
class DegreeHistogram:
    direction: Direction
    dedup: bool
    counts: dict[int, int]

    @property
    def node_count(self) -> int:
        return sum(self.counts.values())

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        degs = np.array(sorted(self.counts), dtype=np.int64)
        return degs, np.array([self.counts[d] for d in degs], dtype=np.float64)

    @classmethod
    def from_degrees(cls, degrees: np.ndarray, direction=Direction.OUT, dedup=False) -> "DegreeHistogram":
        tally = np.bincount(np.asarray(degrees, dtype=np.int64))
        nz = np.flatnonzero(tally)
        return cls(Direction(direction), dedup, {int(d): int(tally[d]) for d in nz})


def vertex_degrees(edges: EdgeList, direction=Direction.OUT, dedup: bool = False) -> np.ndarray:
    """Per-vertex degree array of length ``node_count``.

    Undirected degree counts a self-loop twice; ``dedup`` collapses repeated
    edges (unordered pairs in the undirected view).
    """
    _check_ids(edges)
    direction = Direction(direction)
    src, dst = edges.src, edges.dst
    n = edges.node_count
    if direction is Direction.UNDIRECTED:
        if dedup and len(src):
            pairs = np.unique(np.column_stack([np.minimum(src, dst), np.maximum(src, dst)]), axis=0)
            src, dst = pairs[:, 0], pairs[:, 1]
        return np.bincount(src, minlength=n) + np.bincount(dst, minlength=n)
    if dedup and len(src):
        pairs = np.unique(np.column_stack([src, dst]), axis=0)
        src, dst = pairs[:, 0], pairs[:, 1]
    ends = src if direction is Direction.OUT else dst
    return np.bincount(ends, minlength=n)


def degree_histogram(edges: EdgeList, direction=Direction.OUT, dedup: bool = False) -> DegreeHistogram:
    return DegreeHistogram.from_degrees(vertex_degrees(edges, direction, dedup), direction, dedup)


def ccdf(hist: DegreeHistogram) -> tuple[np.ndarray, np.ndarray]:
    """``P[deg >= d]`` at every observed degree."""
    degs, counts = hist.arrays()
    tail = np.cumsum(counts[::-1])[::-1]
    return degs, tail / counts.sum()


# --------------------------------------------------------------------------
# pmfs


@dataclass
class DiscretePmf:
    """Probabilities over ``0..len(probs)-1``."""

    probs: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.probs = np.asarray(self.probs, dtype=np.float64)
        if self.probs.ndim != 1 or len(self.probs) == 0:
            raise KronError("pmf needs a non-empty 1-d probability vector")
        if (self.probs < 0).any():
            raise KronError("pmf has negative mass")
        if abs(self.probs.sum() - 1.0) > PMF_TOL:
            raise KronError(f"pmf mass is {self.probs.sum()!r}")

    def __getitem__(self, d: int) -> float:
        return float(self.probs[d]) if 0 <= d < len(self.probs) else 0.0

    @classmethod
    def from_mapping(cls, mass: Mapping[int, float]) -> "DiscretePmf":
        top = max(mass)
        probs = np.zeros(top + 1)
        for d, w in mass.items():
            probs[d] += w
        return cls(probs)

    @classmethod
    def from_counts(cls, counts) -> "DiscretePmf":
        if isinstance(counts, DegreeHistogram):
            counts = counts.counts
        if isinstance(counts, Mapping):
            total = sum(counts.values())
            return cls.from_mapping({d: c / total for d, c in counts.items()})
        counts = np.asarray(counts, dtype=np.float64)
        return cls(counts / counts.sum())


def tv_distance(P: DiscretePmf, Q: DiscretePmf) -> float:
    """Half the L1 distance over the union support."""
    size = max(len(P.probs), len(Q.probs))
    p = np.zeros(size)
    q = np.zeros(size)
    p[: len(P.probs)] = P.probs
    q[: len(Q.probs)] = Q.probs
    return float(min(1.0, 0.5 * np.abs(p - q).sum()))


class PmfMode(str, Enum):
    EXACT_BINOMIAL = "exact_binomial"
    POISSON = "poisson"


def theoretical_degree_pmf(p_slice: float, m: int, mode=PmfMode.EXACT_BINOMIAL) -> DiscretePmf:
    """Out-degree law of one vertex hit with probability ``p_slice`` per edge.

    The support is cut where the cumulative mass first reaches ``1 - 1e-12``.
    For the Poisson form ``meta['precondition_ok']`` records whether
    ``p_slice <= 1/sqrt(m)``.
    """
    mode = PmfMode(mode)
    if not 0.0 <= p_slice <= 1.0:
        raise KronError(f"p_slice={p_slice} outside [0, 1]")
    dist = stats.binom(m, p_slice) if mode is PmfMode.EXACT_BINOMIAL else stats.poisson(m * p_slice)
    top = int(dist.isf(TAIL_MASS)) + 1
    if mode is PmfMode.EXACT_BINOMIAL:
        top = min(top, m)
    support = np.arange(top + 1)
    probs = dist.pmf(support)
    cut = int(np.searchsorted(np.cumsum(probs), 1.0 - TAIL_MASS)) + 1
    meta = {"mode": mode.value, "p": p_slice, "m": m}
    if mode is PmfMode.POISSON:
        meta["precondition_ok"] = p_slice <= 1.0 / math.sqrt(m)
    return DiscretePmf(probs[: min(cut, len(probs))], meta)


# --------------------------------------------------------------------------
# isolated vertices and components


def expected_isolated(n: int, p: float) -> float:
    if n < 1 or not 0.0 <= p < 1.0:
        raise KronError("need n >= 1 and 0 <= p < 1")
    return n * (1.0 - p) ** (n - 1)


class IsolatedVariance(NamedTuple):
    exact: float
    bound: float


def variance_isolated(n: int, p: float) -> IsolatedVariance:
    """Exact variance of the isolated-vertex count and the ``E + E^2 p/(1-p)`` bound."""
    mean = expected_isolated(n, p)
    q = (1.0 - p) ** (n - 1)
    both = (1.0 - p) ** (2 * n - 3) if n >= 2 else 0.0
    exact = n * q * (1.0 - q) + n * (n - 1) * (both - q * q)
    return IsolatedVariance(exact, mean + mean * mean * p / (1.0 - p))


def connected_probability(n: int, p: float) -> float:
    """Exact P[G(n, p) is connected].

    Recurrence on the component of vertex 0: it has size ``k`` with
    probability ``C(n-1, k-1) P_k (1-p)^(k(n-k))``.
    """
    if n < 1:
        raise KronError("n must be >= 1")
    q = 1.0 - p
    conn = [0.0, 1.0]
    for size in range(2, n + 1):
        split = sum(math.comb(size - 1, k - 1) * conn[k] * q ** (k * (size - k)) for k in range(1, size))
        conn.append(1.0 - split)
    return conn[n]


@dataclass(frozen=True)
class ComponentSummary:
    component_count: int
    largest_size: int
    isolated_count: int


def component_labels(node_count: int, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """Smallest vertex id of each vertex's component.

    Union-find over all edges at once: each round hooks every root onto the
    smallest root it shares an edge with, then pointer-jumps to full
    compression. Parent ids only ever decrease, so the forest stays acyclic.
    """
    parent = np.arange(node_count, dtype=np.int64)
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    while len(src):
        ru, rv = parent[src], parent[dst]
        live = ru != rv
        if not live.any():
            break
        ru, rv = ru[live], rv[live]
        src, dst = src[live], dst[live]
        np.minimum.at(parent, np.maximum(ru, rv), np.minimum(ru, rv))
        while True:
            jumped = parent[parent]
            if np.array_equal(jumped, parent):
                break
            parent = jumped
    return parent


def component_summary(edges: EdgeList) -> ComponentSummary:
    _check_ids(edges)
    labels = component_labels(edges.node_count, edges.src, edges.dst)
    sizes = np.bincount(labels, minlength=edges.node_count)
    undirected = np.bincount(edges.src, minlength=edges.node_count) + np.bincount(edges.dst, minlength=edges.node_count)
    return ComponentSummary(
        component_count=int(np.count_nonzero(sizes)),
        largest_size=int(sizes.max()) if edges.node_count else 0,
        isolated_count=int(np.count_nonzero(undirected == 0)),
    )


# --------------------------------------------------------------------------
# oscillation


@dataclass(frozen=True)
class BinnedSeries:
    lo: np.ndarray
    hi: np.ndarray
    avg_frequency: np.ndarray

    @property
    def log_frequency(self) -> np.ndarray:
        return np.log10(self.avg_frequency)


def log_binned(hist: DegreeHistogram, ratio: float = 1.3) -> BinnedSeries:
    """Average vertex count per integer degree in geometric bins ``[ratio^i, ratio^(i+1))``.

    Degree 0 is dropped. Bins holding no integer, or no vertex, are skipped.
    """
    degs, counts = hist.arrays()
    keep = degs > 0
    degs, counts = degs[keep], counts[keep]
    if len(degs) == 0:
        return BinnedSeries(np.empty(0), np.empty(0), np.empty(0))
    top = int(math.floor(math.log(degs.max()) / math.log(ratio))) + 1
    edges = ratio ** np.arange(top + 1)
    ints_lo = np.ceil(edges[:-1]).astype(np.int64)
    ints_hi = np.ceil(edges[1:]).astype(np.int64)  # exclusive
    which = np.searchsorted(edges, degs, side="right") - 1
    sums = np.bincount(which, weights=counts, minlength=top)
    width = ints_hi - ints_lo
    keep = (width > 0) & (sums > 0)
    return BinnedSeries(ints_lo[keep], ints_hi[keep] - 1, sums[keep] / width[keep])


def _strict_extrema(y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    mid = y[1:-1]
    peaks = np.flatnonzero((mid > y[:-2]) & (mid > y[2:])) + 1
    troughs = np.flatnonzero((mid < y[:-2]) & (mid < y[2:])) + 1
    return peaks, troughs


def oscillation_score(hist: DegreeHistogram, ratio: float = 1.3, prominence: float = 0.15) -> float:
    """Share of log-binned points that are prominent interior extrema.

    The binned log10 frequency of a smooth (log-normal or power-law like)
    distribution is unimodal, so it scores near zero; bumps from slice
    structure add one peak and one trough each.
    """
    nonzero = sum(c for d, c in hist.counts.items() if d > 0)
    if nonzero < 10:
        raise InsufficientData(f"only {nonzero} vertices with nonzero degree")
    y = log_binned(hist, ratio).log_frequency
    if len(y) < 3:
        return 0.0
    peaks, troughs = _strict_extrema(y)
    count = 0
    if len(peaks):
        count += int(np.count_nonzero(signal.peak_prominences(y, peaks)[0] > prominence))
    if len(troughs):
        count += int(np.count_nonzero(signal.peak_prominences(-y, troughs)[0] > prominence))
    return count / len(y)
