"""Initiator seeds, the relative-prime seed samplers and derived SKG scalars.

The self-similar measure of a seed ``S`` (shape ``s x t``) lives on the unit
square: the first coordinate indexes rows, the second columns. Cell ``(p, q)``
of the first subdivision, ``[p/s, (p+1)/s] x [q/t, (q+1)/t]``, carries mass
``S[p, q]`` and inside it the measure repeats itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Union

import numpy as np

from .errors import (
    AllZero,
    AsymmetricSeed,
    DegenerateSeed,
    KronError,
    NegativeEntry,
    NotNormalized,
)

MASS_TOL = 1e-12
DEFAULT_DEPTH = 40

Real = Union[float, int, Fraction]


@dataclass(frozen=True)
class StochasticSeed:
    """Nonnegative matrix with unit total mass.

    The wrapped array is read-only, so instances are safe to share.
    """

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.array(self.matrix, dtype=np.float64)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1)
        if arr.ndim != 2 or arr.size == 0:
            raise KronError(f"seed must be a non-empty 2-d matrix, got shape {arr.shape}")
        neg = np.argwhere(arr < 0)
        if len(neg):
            raise NegativeEntry(tuple(int(i) for i in neg[0]))
        total = float(arr.sum())
        if abs(total - 1.0) > MASS_TOL:
            raise NotNormalized(f"seed entries sum to {total!r}, expected 1")
        arr.setflags(write=False)
        object.__setattr__(self, "matrix", arr)

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    def __getitem__(self, idx):
        return self.matrix[idx]

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, StochasticSeed):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.matrix, other.matrix))

    def __hash__(self):
        return hash((self.shape, self.matrix.tobytes()))

    def __repr__(self):
        return f"StochasticSeed({self.matrix.tolist()})"

    @property
    def T(self) -> "StochasticSeed":
        return StochasticSeed(self.matrix.T.copy())

    def is_symmetric(self, tol: float = MASS_TOL) -> bool:
        return self.rows == self.cols and bool(np.allclose(self.matrix, self.matrix.T, rtol=0, atol=tol))


def validate_and_normalize(raw) -> StochasticSeed:
    """Scale a nonnegative matrix to unit mass.

    >>> validate_and_normalize([[9, 3], [3, 1]]).matrix.tolist()
    [[0.5625, 0.1875], [0.1875, 0.0625]]
    """
    arr = np.array(raw, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2 or arr.size == 0:
        raise KronError(f"seed must be a non-empty 2-d matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise KronError("seed entries must be finite")
    neg = np.argwhere(arr < 0)
    if len(neg):
        raise NegativeEntry(tuple(int(i) for i in neg[0]))
    total = arr.sum()
    if not total > 0:
        raise AllZero("seed has no positive entry")
    return StochasticSeed(arr / total)


def as_seed(seed) -> StochasticSeed:
    if isinstance(seed, StochasticSeed):
        return seed
    return StochasticSeed(seed)


GRAPH500 = validate_and_normalize([[9, 3], [3, 1]])


# --------------------------------------------------------------------------
# closed forms


def sample_3x1_from_2x1(v) -> StochasticSeed:
    """Three-cell seed from a two-cell seed ``[a, b]``; keeps orientation."""
    v = as_seed(v)
    if v.shape not in ((1, 2), (2, 1)):
        raise KronError(f"expected a 1x2 or 2x1 seed, got {v.shape}")
    a, b = (float(x) for x in v.matrix.ravel())
    if a <= 0.0 or b <= 0.0:
        raise DegenerateSeed("a two-cell seed with a zero entry collapses to a point mass")
    den = 1.0 - a * b
    out = np.array([a * a / den, (a - a * a) / den, b * b / den])
    return StochasticSeed(out.reshape((3, 1) if v.rows == 2 else (1, 3)))


def _check_den(name: str, value: float) -> float:
    if value <= MASS_TOL:
        raise DegenerateSeed(f"denominator {name} = {value!r} is not positive")
    return value


def sample_3x3_from_2x2(T) -> StochasticSeed:
    """Nine-cell seed carrying the self-similar mass of each third x third tile."""
    T = as_seed(T)
    if T.shape != (2, 2):
        raise KronError(f"expected a 2x2 seed, got {T.shape}")
    (a, b), (c, d) = T.matrix.tolist()
    if max(a, b, c, d) >= 1.0 - MASS_TOL:
        raise DegenerateSeed("a one-cell seed collapses to a point mass")

    # each denominator is at least 3/4 for a normalised seed; kept as a guard
    diag = _check_den("1-ad", 1.0 - a * d)
    anti = _check_den("1-bc", 1.0 - b * c)
    rows = _check_den("1-(a+b)(c+d)", 1.0 - (a + b) * (c + d))
    cols = _check_den("1-(a+c)(b+d)", 1.0 - (a + c) * (b + d))

    # first/last third of the row and column marginals
    row_top = (a + b) ** 2 / rows
    row_bot = (c + d) ** 2 / rows
    col_left = (a + c) ** 2 / cols
    col_right = (b + d) ** 2 / cols

    A = (a * a + a * b * col_left + a * c * row_top) / diag
    C = (b * b + a * b * col_right + b * d * row_top) / anti
    G = (c * c + c * d * col_left + a * c * row_bot) / anti
    I = (d * d + c * d * col_right + b * d * row_bot) / diag

    B = row_top - (A + C)
    H = row_bot - (G + I)
    D = col_left - (A + G)
    F = col_right - (C + I)
    E = 1.0 - (A + B + C + D + F + G + H + I)
    M = np.array([[A, B, C], [D, E, F], [G, H, I]])
    # rounding can leave -1e-17 on exactly-zero cells of degenerate seeds
    M[(M < 0) & (M > -MASS_TOL)] = 0.0
    return StochasticSeed(M)


# --------------------------------------------------------------------------
# numeric measure


@dataclass(frozen=True)
class Rect:
    """Axis-aligned box ``[x_lo, x_hi] x [y_lo, y_hi]`` inside the unit square.

    Coordinates are kept as exact fractions so that repeated rescaling by the
    seed dimensions never accumulates rounding.
    """

    x_lo: Real
    x_hi: Real
    y_lo: Real
    y_hi: Real

    def __post_init__(self):
        vals = [Fraction(v) for v in (self.x_lo, self.x_hi, self.y_lo, self.y_hi)]
        for name, v in zip(("x_lo", "x_hi", "y_lo", "y_hi"), vals):
            object.__setattr__(self, name, v)
        if not all(0 <= v <= 1 for v in vals):
            raise KronError(f"rectangle {vals} is not inside the unit square")
        if vals[0] > vals[1] or vals[2] > vals[3]:
            raise KronError(f"rectangle {vals} has inverted bounds")

    @classmethod
    def grid_cell(cls, i: int, j: int, rows: int, cols: int) -> "Rect":
        return cls(Fraction(i, rows), Fraction(i + 1, rows), Fraction(j, cols), Fraction(j + 1, cols))


def _mass_function(S: np.ndarray, den_x: int, den_y: int):
    """Memoised rectangle mass on integer coordinates ``x / den_x``, ``y / den_y``.

    Rescaling a sub-rectangle of cell ``p`` to the unit square maps ``x`` to
    ``s x - p``, which keeps the denominator fixed, so every coordinate met
    during the recursion stays an integer over the same denominator.
    """
    s, t = S.shape
    weights = S.tolist()
    full_area = den_x * den_y

    @lru_cache(maxsize=None)
    def mass(x0: int, x1: int, y0: int, y1: int, depth: int) -> float:
        if x0 >= x1 or y0 >= y1:
            return 0.0
        if x0 <= 0 and x1 >= den_x and y0 <= 0 and y1 >= den_y:
            return 1.0
        if depth == 0:
            return (x1 - x0) * (y1 - y0) / full_area
        total = 0.0
        for p in range(s):
            cx0 = max(x0 * s - p * den_x, 0)
            cx1 = min(x1 * s - p * den_x, den_x)
            if cx0 >= cx1:
                continue
            for q in range(t):
                w = weights[p][q]
                if w == 0.0:
                    continue
                cy0 = max(y0 * t - q * den_y, 0)
                cy1 = min(y1 * t - q * den_y, den_y)
                if cy0 >= cy1:
                    continue
                total += w * mass(cx0, cx1, cy0, cy1, depth - 1)
        return total

    return mass


def _integer_coords(values, den: int) -> list[int]:
    return [int(v * den) for v in values]


def kgd_rectangle_mass(S, r: Rect, depth: int = DEFAULT_DEPTH) -> float:
    """Mass the self-similar measure of ``S`` assigns to ``r``.

    Cells fully inside ``r`` contribute their whole mass and disjoint cells
    nothing; after ``depth`` subdivisions a partially covered cell is
    credited with its covered area fraction. Distinct sub-rectangles are
    memoised, so the cost grows linearly in ``depth``.
    """
    S = as_seed(S)
    if depth < 1:
        raise KronError("depth must be >= 1")
    den_x = math.lcm(r.x_lo.denominator, r.x_hi.denominator)
    den_y = math.lcm(r.y_lo.denominator, r.y_hi.denominator)
    mass = _mass_function(S.matrix, den_x, den_y)
    x0, x1 = _integer_coords((r.x_lo, r.x_hi), den_x)
    y0, y1 = _integer_coords((r.y_lo, r.y_hi), den_y)
    value = mass(x0, x1, y0, y1, depth)
    return min(1.0, max(0.0, value))


def sample_mxn(S, out_rows: int, out_cols: int, depth: int = DEFAULT_DEPTH) -> StochasticSeed:
    """Resample ``S`` onto an ``out_rows x out_cols`` grid of its measure."""
    S = as_seed(S)
    if out_rows < 1 or out_cols < 1:
        raise KronError("output shape must be positive")
    if depth < 1:
        raise KronError("depth must be >= 1")
    mass = _mass_function(S.matrix, out_rows, out_cols)
    out = np.empty((out_rows, out_cols))
    for i in range(out_rows):
        for j in range(out_cols):
            out[i, j] = mass(i, i + 1, j, j + 1, depth)
    return validate_and_normalize(out)


# --------------------------------------------------------------------------
# derived scalars


@dataclass(frozen=True)
class SkgParams:
    """Scalars derived from a symmetric 2x2 seed ``[[t1, t2], [t2, t3]]``.

    ``delta`` is the average degree of the binary graph (``n = 2**ell``) and
    feeds ``lambda_small``; ``delta_ternary`` uses ``n = 3**ell`` and feeds
    ``lambda_big``. ``tau`` is the same ratio in both settings.
    """

    t1: float
    t2: float
    t3: float
    sigma: float
    tau: float
    delta: float
    delta_ternary: float
    lambda_big: float
    lambda_small: float
    ell: int
    m: int


def skg_params(T, ell: int, m: int) -> SkgParams:
    T = as_seed(T)
    if T.shape != (2, 2):
        raise KronError(f"expected a 2x2 seed, got {T.shape}")
    if abs(T[0, 1] - T[1, 0]) > MASS_TOL:
        raise AsymmetricSeed(f"t2={T[0, 1]!r} differs from t3={T[1, 0]!r}")
    if ell < 1 or m < 1:
        raise KronError("ell and m must be >= 1")
    t1, t2, t3 = float(T[0, 0]), float(T[0, 1]), float(T[1, 1])
    sigma = t1 + t2 - 0.5
    lo = 0.5 - sigma
    tau = (0.5 + sigma) / lo if lo > 0 else math.inf
    delta = m / 2**ell
    delta3 = m / 3**ell
    return SkgParams(
        t1=t1,
        t2=t2,
        t3=t3,
        sigma=sigma,
        tau=tau,
        delta=delta,
        delta_ternary=delta3,
        lambda_big=delta3 * (3 * (1 - 2 * sigma) ** 2 / (3 + 4 * sigma**2)) ** ell,
        lambda_small=delta * (1 - 4 * sigma**2) ** (ell / 2),
        ell=ell,
        m=m,
    )
