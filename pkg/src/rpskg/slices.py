"""Slice decomposition of vertex ids and per-slice out-edge probabilities.

For a symmetric initiator ``[[t1, t2], [t2, t3]]`` every vertex whose ``ell``
digit id has the same digit composition has the same chance of receiving a
given edge as its source. Binary slices are keyed by the number of zero
bits; ternary slices by the counts of 0 and 1 digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from scipy import stats

from .analysis import DiscretePmf, PmfMode, theoretical_degree_pmf, tv_distance, vertex_degrees
from .errors import AsymmetricSeed, IdOutOfRange, KronError
from .generators import EdgeList
from .seeds import SkgParams


class Radix(str, Enum):
    BINARY = "binary"
    TERNARY = "ternary"

    @property
    def base(self) -> int:
        return 2 if self is Radix.BINARY else 3


@dataclass(frozen=True)
class SliceId:
    """Digit composition of an ``ell``-digit vertex id.

    ``alpha`` counts zeros and ``beta`` ones; in binary ``beta`` is
    ``ell - alpha`` and ``r`` is only defined for even ``ell``.
    """

    radix: Radix
    ell: int
    alpha: int
    beta: int

    @property
    def r(self) -> int:
        if self.radix is not Radix.BINARY or self.ell % 2:
            raise KronError("r is only defined for binary slices with even ell")
        return self.alpha - self.ell // 2

    @property
    def zeros(self) -> int:
        return self.alpha

    def label(self) -> str:
        if self.radix is Radix.TERNARY:
            return f"a={self.alpha};b={self.beta}"
        if self.ell % 2 == 0:
            return f"r={self.r}"
        return f"z={self.alpha}"


def digit_counts(ids: np.ndarray, ell: int, radix: Radix) -> tuple[np.ndarray, np.ndarray]:
    """Counts of 0 and 1 digits in the ``ell``-digit representation of each id."""
    radix = Radix(radix)
    ids = np.asarray(ids, dtype=np.int64)
    if len(ids) and (ids.min() < 0 or ids.max() >= radix.base**ell):
        raise IdOutOfRange(f"ids must lie in [0, {radix.base}**{ell})")
    zeros = np.zeros(ids.shape, dtype=np.int64)
    ones = np.zeros(ids.shape, dtype=np.int64)
    rest = ids.copy()
    for _ in range(ell):
        rest, digit = np.divmod(rest, radix.base)
        zeros += digit == 0
        ones += digit == 1
    return zeros, ones


def slice_of_vertex(v: int, ell: int, radix=Radix.BINARY) -> SliceId:
    radix = Radix(radix)
    if not 0 <= v < radix.base**ell:
        raise IdOutOfRange(f"vertex {v} outside [0, {radix.base}**{ell})")
    zeros, ones = digit_counts(np.array([v]), ell, radix)
    return SliceId(radix, ell, int(zeros[0]), int(ones[0]))


# --------------------------------------------------------------------------
# probabilities


def _require_symmetric(params: SkgParams) -> None:
    if not isinstance(params, SkgParams):
        raise AsymmetricSeed("slice probabilities need parameters of a symmetric 2x2 seed")


def slice_probability_binary(params: SkgParams, r: int) -> float:
    """``(1 - 4 sigma^2)^(ell/2) tau^r / 2^ell`` for even ``ell``."""
    _require_symmetric(params)
    ell = params.ell
    if ell % 2:
        raise KronError("the r-form needs even ell; use binary_slice_probability_direct")
    if abs(r) > ell // 2:
        raise KronError(f"|r|={abs(r)} exceeds ell/2={ell // 2}")
    return (1 - 4 * params.sigma**2) ** (ell / 2) * params.tau**r / 2**ell


def binary_slice_probability_direct(params: SkgParams, zeros: int) -> float:
    """Product of initiator row sums along the bits of the vertex id."""
    _require_symmetric(params)
    if not 0 <= zeros <= params.ell:
        raise KronError(f"zeros={zeros} outside [0, {params.ell}]")
    return (params.t1 + params.t2) ** zeros * (params.t2 + params.t3) ** (params.ell - zeros)


def ternary_row_probabilities(sigma: float) -> tuple[float, float, float]:
    """Row sums of the 3x3 seed sampled from a symmetric initiator with skew ``sigma``."""
    den = 0.75 + sigma**2
    return (0.5 + sigma) ** 2 / den, (0.25 - sigma**2) / den, (0.5 - sigma) ** 2 / den


def ternary_slice_probability_direct(params: SkgParams, alpha: int, beta: int) -> float:
    _require_symmetric(params)
    ell = params.ell
    if alpha < 0 or beta < 0 or alpha + beta > ell:
        raise KronError(f"(alpha, beta)=({alpha}, {beta}) invalid for ell={ell}")
    p0, p1, p2 = ternary_row_probabilities(params.sigma)
    return p0**alpha * p1**beta * p2 ** (ell - alpha - beta)


def slice_probability_ternary(params: SkgParams, alpha: int, beta: int) -> float:
    """``tau^(2 alpha + beta) Lambda / (Delta n)`` with ``n = 3^ell``."""
    _require_symmetric(params)
    ell = params.ell
    if alpha < 0 or beta < 0 or alpha + beta > ell:
        raise KronError(f"(alpha, beta)=({alpha}, {beta}) invalid for ell={ell}")
    return params.tau ** (2 * alpha + beta) * params.lambda_big / (params.delta_ternary * 3**ell)


def slice_probability(params: SkgParams, sid: SliceId) -> float:
    if sid.radix is Radix.TERNARY:
        return slice_probability_ternary(params, sid.alpha, sid.beta)
    if params.ell % 2 == 0:
        return slice_probability_binary(params, sid.r)
    return binary_slice_probability_direct(params, sid.zeros)


def all_slices(ell: int, radix=Radix.BINARY) -> list[tuple[SliceId, int]]:
    """Every slice with its vertex count."""
    radix = Radix(radix)
    out = []
    if radix is Radix.BINARY:
        for z in range(ell + 1):
            out.append((SliceId(radix, ell, z, ell - z), math.comb(ell, z)))
    else:
        for a in range(ell + 1):
            for b in range(ell - a + 1):
                size = math.factorial(ell) // (math.factorial(a) * math.factorial(b) * math.factorial(ell - a - b))
                out.append((SliceId(radix, ell, a, b), size))
    return out


# --------------------------------------------------------------------------
# empirical comparison


@dataclass(frozen=True)
class SliceRow:
    slice: SliceId
    vertices: int
    theoretical_p: float
    empirical_p: float
    tv_binomial: float


def slice_report(edges, params: SkgParams, radix=Radix.BINARY, dedup: bool = False) -> list[SliceRow]:
    """Pooled out-degree law of each slice against ``Binomial(m, p_slice)``.

    ``edges`` is one graph or a sequence of independent replicates with the
    same node and edge counts; degrees of every slice member in every replicate
    are pooled. ``params.ell`` is the number of digits.
    """
    radix = Radix(radix)
    graphs = [edges] if isinstance(edges, EdgeList) else list(edges)
    if not graphs:
        raise KronError("no graphs given")
    ell = params.ell
    n, m = graphs[0].node_count, len(graphs[0])
    if any(g.node_count != n or len(g) != m for g in graphs):
        raise KronError("replicates must share node and edge counts")
    if n != radix.base**ell:
        raise KronError(f"graph has {n} nodes, expected {radix.base}**{ell}")
    degrees = np.stack([vertex_degrees(g, "out", dedup) for g in graphs])
    zeros, ones = digit_counts(np.arange(n), ell, radix)
    rows = []
    for sid, size in all_slices(ell, radix):
        members = zeros == sid.alpha
        if radix is Radix.TERNARY:
            members &= ones == sid.beta
        degs = degrees[:, members].ravel()
        p = slice_probability(params, sid)
        empirical = DiscretePmf.from_counts(np.bincount(degs))
        tv = tv_distance(empirical, theoretical_degree_pmf(p, m, PmfMode.EXACT_BINOMIAL))
        rows.append(SliceRow(sid, int(size), p, float(degs.mean()) / m if m else 0.0, tv))
    return rows


@dataclass(frozen=True)
class TailReport:
    """Outcome of the off-resonance tail check over ``1 <= d <= d_max``."""

    constant: float
    d_max: int
    tau: float
    lambda_big: float
    worst: tuple[int, int]
    min_gap: float


def exponential_tail_check(
    tau: float, ell: int, d_max: int = 50, lambda_big: float = 1.0, offset: float = 1.0 / 3.0
) -> TailReport:
    """Poisson out-degree pmfs of ternary slices, indexed by ``s = 2 alpha + beta``.

    For each degree ``d`` the slices with ``|s - ln d| >= offset`` are far from
    resonance. ``constant`` is the smallest ``C`` with
    ``P[deg = d] <= C exp(-d/9)`` over all far slices and ``d <= d_max``;
    ``min_gap`` is the smallest ratio, over ``d``, of the best slice pmf to the
    best far-slice pmf.
    """
    s = np.arange(2 * ell + 1)
    means = tau**s * lambda_big
    constant, worst, min_gap = 0.0, (0, 0), math.inf
    for d in range(1, d_max + 1):
        pmf = stats.poisson.pmf(d, means)
        far = np.abs(s - math.log(d)) >= offset
        if not far.any():
            continue
        scaled = pmf[far] * math.exp(d / 9.0)
        i = int(np.argmax(scaled))
        if scaled[i] > constant:
            constant, worst = float(scaled[i]), (d, int(s[far][i]))
        min_gap = min(min_gap, float(pmf.max() / pmf[far].max()))
    return TailReport(constant, d_max, tau, lambda_big, worst, min_gap)


def sigma_for_tau(tau: float) -> float:
    """Skew whose ratio ``(1/2 + sigma)/(1/2 - sigma)`` equals ``tau``."""
    return (tau - 1) / (2 * (tau + 1))


def symmetric_seed_for_sigma(sigma: float, t2: Optional[float] = None) -> np.ndarray:
    lo = 0.5 - sigma
    if t2 is None:
        t2 = lo / 2
    if not 0 <= t2 <= lo:
        raise KronError(f"t2={t2} incompatible with sigma={sigma}")
    return np.array([[0.5 + sigma - t2, t2], [t2, lo - t2]])
