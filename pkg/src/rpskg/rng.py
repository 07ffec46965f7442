"""Counter-based random streams.

Every random number used by the generators is a pure function of
``(rng_seed, domain, index, counter)``: a SplitMix64 finaliser applied to a
Weyl-sequence combination of the four. Edge ``i`` draws its level choices
from ``index=i`` and counters ``0, 1, ...``; nothing depends on which worker
produced the edge or in which order.
"""

from __future__ import annotations

import numpy as np

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_GAMMA2 = np.uint64(0xD1B54A32D192ED03)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0  # 2**-53

# stream domains; each purpose gets its own so counters never collide
LEVELS = 0
POSITIONS = 1
NOISE = 2
PAIRS = 3
TRIALS = 4

U64_MASK = (1 << 64) - 1


def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def _key(rng_seed: int, domain: int) -> np.ndarray:
    seed = np.array([rng_seed & U64_MASK], dtype=np.uint64)
    dom = np.array([domain & U64_MASK], dtype=np.uint64)
    return _mix(_mix(seed) ^ (dom * _GAMMA2 + _GAMMA))


def random_bits(rng_seed: int, domain: int, index, counter) -> np.ndarray:
    """Raw 64-bit words for broadcastable ``index`` and ``counter`` arrays."""
    key = _key(rng_seed, domain)
    idx = np.asarray(index).astype(np.uint64)
    ctr = np.asarray(counter).astype(np.uint64)
    shape = np.broadcast_shapes(idx.shape, ctr.shape)
    # 1-d views keep numpy on its wrapping array path; scalars warn on overflow
    idx, ctr = np.atleast_1d(idx), np.atleast_1d(ctr)
    h = _mix(key + (idx + np.uint64(1)) * _GAMMA)
    return _mix(h ^ ((ctr + np.uint64(1)) * _GAMMA2)).reshape(shape)


def uniforms(rng_seed: int, domain: int, index, counter) -> np.ndarray:
    """Doubles in ``[0, 1)`` with 53 random bits."""
    return (random_bits(rng_seed, domain, index, counter) >> _S11).astype(np.float64) * _INV53


def open_uniforms(rng_seed: int, domain: int, index, counter) -> np.ndarray:
    """Doubles in ``(0, 1]``, safe to take the log of."""
    bits = random_bits(rng_seed, domain, index, counter) >> _S11
    return (bits.astype(np.float64) + 1.0) * _INV53


class EdgeStream:
    """Sequential view of the stream owned by one edge (or one trial)."""

    def __init__(self, rng_seed: int, index: int, domain: int = LEVELS):
        self.rng_seed = int(rng_seed)
        self.index = int(index)
        self.domain = int(domain)
        self.position = 0

    def random(self, size: int | None = None):
        n = 1 if size is None else int(size)
        out = uniforms(self.rng_seed, self.domain, self.index, np.arange(self.position, self.position + n))
        self.position += n
        return float(out[0]) if size is None else out

    def __iter__(self):
        return self

    def __next__(self) -> float:
        return self.random()


def per_edge_randomness(rng_seed: int, edge_index: int, domain: int = LEVELS) -> EdgeStream:
    return EdgeStream(rng_seed, edge_index, domain)


def derive_seed(rng_seed: int, *path: int) -> int:
    """Child seed for a sub-experiment, e.g. ``derive_seed(seed, trial)``."""
    word = rng_seed & U64_MASK
    for step in path:
        word = int(random_bits(word, TRIALS, step, 0))
    return word
