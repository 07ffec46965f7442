"""Edge generators: SKG, relative-prime SKG, noisy SKG, G(n, p) and Chung-Lu.

All generators are vectorised over fixed-size chunks of edge indices. Edge
``i`` consumes only the counter-based stream ``(rng_seed, i)``, so the output
does not depend on chunking or on the number of worker threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np

from . import rng
from .errors import DegreeSumMismatch, KronError, MissingSeed3, NoiseBoundViolated
from .seeds import GRAPH500, StochasticSeed, as_seed, sample_3x3_from_2x2

CHUNK = 1 << 16
PAIR_BLOCK = 1 << 22


class Model(str, Enum):
    SKG = "skg"
    RPSKG = "rpskg"
    NSKG = "nskg"
    BERNOULLI = "bernoulli"
    CHUNGLU = "chunglu"


@dataclass
class EdgeList:
    """Directed multigraph as two parallel id arrays; duplicates are kept."""

    node_count: int
    src: np.ndarray
    dst: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.src = np.asarray(self.src, dtype=np.int64)
        self.dst = np.asarray(self.dst, dtype=np.int64)
        if self.src.shape != self.dst.shape or self.src.ndim != 1:
            raise KronError("src and dst must be 1-d arrays of equal length")

    def __len__(self) -> int:
        return len(self.src)

    @property
    def edges(self) -> np.ndarray:
        return np.column_stack([self.src, self.dst])

    def same_edges(self, other: "EdgeList") -> bool:
        return (
            self.node_count == other.node_count
            and np.array_equal(self.src, other.src)
            and np.array_equal(self.dst, other.dst)
        )


@dataclass(frozen=True)
class NoiseRecord:
    """Per-level noise factors of one NSKG graph, most significant level first."""

    mu: tuple[float, ...]
    b: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "mu", tuple(float(x) for x in self.mu))
        if any(abs(x) > self.b for x in self.mu):
            raise NoiseBoundViolated(f"noise factor outside [-{self.b}, {self.b}]")


# --------------------------------------------------------------------------
# sampling helpers


class _CellTable:
    """Inverse-CDF lookup over the row-major cells of a seed."""

    def __init__(self, seed: StochasticSeed):
        flat = seed.matrix.ravel()
        self.rows, self.cols = seed.shape
        self.cum = np.cumsum(flat)
        self.last = int(np.flatnonzero(flat > 0)[-1])

    def draw(self, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        cell = np.searchsorted(self.cum, u, side="right")
        np.minimum(cell, self.last, out=cell)
        return np.divmod(cell, self.cols)


def _run_chunks(fn: Callable[[int, int], tuple[np.ndarray, np.ndarray]], total: int, workers: int):
    bounds = [(lo, min(lo + CHUNK, total)) for lo in range(0, total, CHUNK)]
    if not bounds:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    if workers <= 1 or len(bounds) == 1:
        parts = [fn(lo, hi) for lo, hi in bounds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: fn(*b), bounds))
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def _levels_chunk(tables: Sequence[_CellTable], rng_seed: int, lo: int, hi: int):
    idx = np.arange(lo, hi, dtype=np.uint64)
    u = np.zeros(hi - lo, dtype=np.int64)
    v = np.zeros(hi - lo, dtype=np.int64)
    for j, table in enumerate(tables):
        mu, nu = table.draw(rng.uniforms(rng_seed, rng.LEVELS, idx, j))
        u = u * table.rows + mu
        v = v * table.cols + nu
    return u, v


def _check_2x2(T) -> StochasticSeed:
    T = as_seed(T)
    if T.shape != (2, 2):
        raise KronError(f"expected a 2x2 initiator, got {T.shape}")
    return T


# --------------------------------------------------------------------------
# generators


def generate_skg(T, ell: int, m: int, rng_seed: int, workers: int = 1) -> EdgeList:
    """``m`` edges, each built from ``ell`` independent quadrant choices."""
    T = _check_2x2(T)
    if ell < 1:
        raise KronError("ell must be >= 1")
    tables = [_CellTable(T)] * ell
    src, dst = _run_chunks(lambda lo, hi: _levels_chunk(tables, rng_seed, lo, hi), m, workers)
    return EdgeList(2**ell, src, dst, {"model": "skg", "ell": ell, "m": m, "rng_seed": rng_seed})


def generate_rpskg(T, M, ell: int, k: int, m: int, rng_seed: int, workers: int = 1) -> EdgeList:
    """Interleave ``k`` 3x3 levels with ``ell`` 2x2 levels at per-edge random positions.

    ``M=None`` derives the 3x3 seed from ``T`` in closed form. With ``k=0``
    the draws coincide exactly with :func:`generate_skg`.
    """
    T = _check_2x2(T)
    if ell < 0 or k < 0 or ell + k < 1:
        raise KronError("need ell >= 0, k >= 0 and ell + k >= 1")
    if k > 0:
        if M is None:
            try:
                M = sample_3x3_from_2x2(T)
            except KronError as exc:
                raise MissingSeed3(f"no 3x3 seed given and none derivable: {exc}") from exc
        M = as_seed(M)
        if M.shape != (3, 3):
            raise KronError(f"expected a 3x3 seed, got {M.shape}")
    meta = {"model": "rpskg", "ell": ell, "k": k, "m": m, "rng_seed": rng_seed}
    n = 3**k * 2**ell
    if k == 0:
        tables = [_CellTable(T)] * ell
        src, dst = _run_chunks(lambda lo, hi: _levels_chunk(tables, rng_seed, lo, hi), m, workers)
        return EdgeList(n, src, dst, meta)

    t2, t3 = _CellTable(T), _CellTable(M)
    width = ell + k

    def chunk(lo, hi):
        idx = np.arange(lo, hi, dtype=np.uint64)
        # k smallest of width uniform keys = uniformly random k-subset, fresh per edge
        keys = rng.uniforms(rng_seed, rng.POSITIONS, idx[:, None], np.arange(width)[None, :])
        ternary = np.zeros(keys.shape, dtype=bool)
        np.put_along_axis(ternary, np.argsort(keys, axis=1, kind="stable")[:, :k], True, axis=1)
        u = np.zeros(hi - lo, dtype=np.int64)
        v = np.zeros(hi - lo, dtype=np.int64)
        for j in range(width):
            r = rng.uniforms(rng_seed, rng.LEVELS, idx, j)
            mu2, nu2 = t2.draw(r)
            mu3, nu3 = t3.draw(r)
            flag = ternary[:, j]
            u = np.where(flag, 3 * u + mu3, 2 * u + mu2)
            v = np.where(flag, 3 * v + nu3, 2 * v + nu2)
        return u, v

    src, dst = _run_chunks(chunk, m, workers)
    return EdgeList(n, src, dst, meta)


def nskg_noise_bound(T) -> float:
    T = _check_2x2(T)
    (t1, t2), (t3, t4) = T.matrix.tolist()
    return min(t2, t3, (t1 + t4) / 2)


def nskg_level_matrix(T, mu: float) -> np.ndarray:
    """Perturbed initiator for one level; preserves the total mass."""
    (t1, t2), (t3, t4) = _check_2x2(T).matrix.tolist()
    diag = t1 + t4
    shrink = 2 * mu / diag if diag > 0 else 0.0
    return np.array([[t1 - shrink * t1, t2 + mu], [t3 + mu, t4 - shrink * t4]])


def draw_noise(T, ell: int, b: float, rng_seed: int) -> NoiseRecord:
    bound = nskg_noise_bound(T)
    if b < 0 or b > bound + 1e-15:
        raise NoiseBoundViolated(f"noise bound b={b} outside [0, {bound}]")
    u = rng.uniforms(rng_seed, rng.NOISE, 0, np.arange(ell))
    mu = np.clip(b * (2.0 * u - 1.0), -b, b)
    return NoiseRecord(tuple(mu.tolist()), b)


def generate_nskg(
    T,
    ell: int,
    m: int,
    noise_b: float,
    rng_seed: int,
    workers: int = 1,
    noise: Optional[NoiseRecord] = None,
) -> tuple[EdgeList, NoiseRecord]:
    """SKG with one perturbed initiator per level.

    Passing a previously emitted ``noise`` record replays that graph's levels
    instead of drawing new factors.
    """
    T = _check_2x2(T)
    if ell < 1:
        raise KronError("ell must be >= 1")
    if noise is None:
        noise = draw_noise(T, ell, noise_b, rng_seed)
    elif len(noise.mu) != ell:
        raise KronError(f"noise record has {len(noise.mu)} levels, expected {ell}")
    else:
        bound = nskg_noise_bound(T)
        if noise.b > bound + 1e-15:
            raise NoiseBoundViolated(f"noise bound b={noise.b} exceeds {bound}")
    tables = []
    for mu in noise.mu:
        level = nskg_level_matrix(T, mu)
        # exact zero noise must reproduce the SKG tables bit for bit
        tables.append(_CellTable(T if mu == 0.0 else StochasticSeed(np.clip(level, 0.0, None))))
    src, dst = _run_chunks(lambda lo, hi: _levels_chunk(tables, rng_seed, lo, hi), m, workers)
    meta = {"model": "nskg", "ell": ell, "m": m, "noise_b": noise.b, "rng_seed": rng_seed}
    return EdgeList(2**ell, src, dst, meta), noise


def pair_from_index(t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Invert the enumeration (0,1), (0,2), (1,2), (0,3), ... of pairs ``u < v``."""
    t = np.asarray(t, dtype=np.int64)
    v = ((1.0 + np.sqrt(1.0 + 8.0 * t.astype(np.float64))) / 2.0).astype(np.int64)
    # float sqrt can be off by one for large t
    v -= (v * (v - 1) // 2 > t).astype(np.int64)
    v += ((v + 1) * v // 2 <= t).astype(np.int64)
    return t - v * (v - 1) // 2, v


def _skip_sample_block(p: float, rng_seed: int, block: int, lo: int, hi: int) -> np.ndarray:
    span = hi - lo
    log_q = math.log1p(-p) if p < 1.0 else -math.inf
    hits = []
    pos = lo - 1
    drawn = 0
    while True:
        expect = (hi - pos) * p
        batch = int(expect + 6 * math.sqrt(expect) + 16)
        u = rng.open_uniforms(rng_seed, rng.PAIRS, block, np.arange(drawn, drawn + batch))
        drawn += batch
        gaps = np.floor(np.log(u) / log_q) + 1.0
        np.minimum(gaps, span + 1, out=gaps)
        steps = pos + np.cumsum(gaps.astype(np.int64))
        inside = steps[steps < hi]
        hits.append(inside)
        if len(inside) < batch:
            break
        pos = int(steps[-1])
    return np.concatenate(hits)


def generate_bernoulli(n: int, p: float, rng_seed: int, workers: int = 1) -> EdgeList:
    """Undirected G(n, p) as pairs ``u < v``, via geometric skips over the pair index."""
    if n < 1:
        raise KronError("n must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise KronError(f"p={p} outside [0, 1]")
    total = n * (n - 1) // 2
    meta = {"model": "bernoulli", "n": n, "p": p, "rng_seed": rng_seed}
    if p == 0.0 or total == 0:
        return EdgeList(n, np.empty(0, np.int64), np.empty(0, np.int64), meta)
    blocks = [(b, b * PAIR_BLOCK, min(total, (b + 1) * PAIR_BLOCK)) for b in range((total + PAIR_BLOCK - 1) // PAIR_BLOCK)]

    def run(block):
        return _skip_sample_block(p, rng_seed, *block)

    if workers <= 1 or len(blocks) == 1:
        parts = [run(b) for b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, blocks))
    u, v = pair_from_index(np.concatenate(parts))
    return EdgeList(n, u, v, meta)


def generate_chunglu(d_out, d_in, m: int, rng_seed: int, workers: int = 1) -> EdgeList:
    """``m`` edges with source ``∝ d_out`` and target ``∝ d_in``."""
    d_out = np.asarray(d_out, dtype=np.int64)
    d_in = np.asarray(d_in, dtype=np.int64)
    if d_out.shape != d_in.shape or d_out.ndim != 1 or len(d_out) == 0:
        raise KronError("degree sequences must be non-empty and of equal length")
    if (d_out < 0).any() or (d_in < 0).any():
        raise KronError("degrees must be nonnegative")
    if d_out.sum() != m or d_in.sum() != m:
        raise DegreeSumMismatch(f"sum(d_out)={d_out.sum()}, sum(d_in)={d_in.sum()}, m={m}")
    cum_out = np.cumsum(d_out)
    cum_in = np.cumsum(d_in)

    def chunk(lo, hi):
        idx = np.arange(lo, hi, dtype=np.uint64)
        a = np.floor(rng.uniforms(rng_seed, rng.LEVELS, idx, 0) * m).astype(np.int64)
        b = np.floor(rng.uniforms(rng_seed, rng.LEVELS, idx, 1) * m).astype(np.int64)
        return np.searchsorted(cum_out, a, side="right"), np.searchsorted(cum_in, b, side="right")

    src, dst = _run_chunks(chunk, m, workers)
    return EdgeList(len(d_out), src, dst, {"model": "chunglu", "m": m, "rng_seed": rng_seed})


# --------------------------------------------------------------------------
# configuration


@dataclass
class GenConfig:
    model: Model
    edges_m: int = 0
    ell: int = 0
    k: int = 0
    seed2: StochasticSeed = GRAPH500
    seed3: Optional[StochasticSeed] = None
    noise_b: Optional[float] = None
    p: Optional[float] = None
    n: Optional[int] = None
    degree_seqs: Optional[tuple[Sequence[int], Sequence[int]]] = None
    rng_seed: int = 0

    def __post_init__(self):
        self.model = Model(self.model)
        self.seed2 = as_seed(self.seed2)
        if self.seed3 is not None:
            self.seed3 = as_seed(self.seed3)

    @property
    def node_count(self) -> int:
        if self.model is Model.RPSKG:
            return 3**self.k * 2**self.ell
        if self.model in (Model.SKG, Model.NSKG):
            return 2**self.ell
        if self.model is Model.BERNOULLI:
            return int(self.n)
        return len(self.degree_seqs[0])


def generate(cfg: GenConfig, workers: int = 1) -> EdgeList:
    """Dispatch on ``cfg.model``; NSKG noise ends up in ``meta['noise']``."""
    if cfg.model is Model.SKG:
        return generate_skg(cfg.seed2, cfg.ell, cfg.edges_m, cfg.rng_seed, workers)
    if cfg.model is Model.RPSKG:
        return generate_rpskg(cfg.seed2, cfg.seed3, cfg.ell, cfg.k, cfg.edges_m, cfg.rng_seed, workers)
    if cfg.model is Model.NSKG:
        edges, noise = generate_nskg(cfg.seed2, cfg.ell, cfg.edges_m, cfg.noise_b or 0.0, cfg.rng_seed, workers)
        edges.meta["noise"] = list(noise.mu)
        return edges
    if cfg.model is Model.BERNOULLI:
        if cfg.n is None or cfg.p is None:
            raise KronError("bernoulli needs n and p")
        return generate_bernoulli(cfg.n, cfg.p, cfg.rng_seed, workers)
    if cfg.degree_seqs is None:
        raise KronError("chunglu needs degree sequences")
    d_out, d_in = cfg.degree_seqs
    return generate_chunglu(d_out, d_in, cfg.edges_m, cfg.rng_seed, workers)
