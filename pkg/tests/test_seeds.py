from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_seed, random_symmetric_seed
from rpskg.errors import AllZero, AsymmetricSeed, DegenerateSeed, KronError, NegativeEntry, NotNormalized
from rpskg.seeds import (
    GRAPH500,
    Rect,
    StochasticSeed,
    kgd_rectangle_mass,
    sample_3x1_from_2x1,
    sample_3x3_from_2x2,
    sample_mxn,
    skg_params,
    validate_and_normalize,
)

# 3x3 seed printed to four decimals for the Graph500 initiator
M_FOUR_DECIMALS = np.array([[0.4793, 0.1598, 0.0533], [0.1598, 0.0533, 0.0178], [0.0533, 0.0178, 0.0059]])
# frozen: Graph500 is the outer product of (3/4, 1/4) with itself, so the sampled
# 3x3 seed is the outer product of the 3x1 sample (9, 3, 1)/13
M_EXACT = np.outer([9, 3, 1], [9, 3, 1]) / 169.0

pos_float = st.floats(min_value=0.01, max_value=1.0, allow_nan=False)


def kron_power_mass(S, rect, levels):
    """Brute-force oracle: mass of ``rect`` under the ``levels``-fold Kronecker power,
    partial cells credited by covered area."""
    S = np.asarray(S.matrix)
    P = S
    for _ in range(levels - 1):
        P = np.kron(P, S)
    rows, cols = P.shape
    xs = np.arange(rows + 1) / rows
    ys = np.arange(cols + 1) / cols
    fx = np.clip(np.minimum(xs[1:], float(rect.x_hi)) - np.maximum(xs[:-1], float(rect.x_lo)), 0, None) * rows
    fy = np.clip(np.minimum(ys[1:], float(rect.y_hi)) - np.maximum(ys[:-1], float(rect.y_lo)), 0, None) * cols
    return float(fx @ P @ fy)


# --------------------------------------------------------------------------
# validation


def test_graph500_normalisation():
    seed = validate_and_normalize([[9, 3], [3, 1]])
    assert np.allclose(seed.matrix, np.array([[9, 3], [3, 1]]) / 16, atol=1e-15)
    assert seed == GRAPH500


def test_identity_and_uniform():
    assert validate_and_normalize([[1]]).matrix.tolist() == [[1.0]]
    assert np.array_equal(validate_and_normalize([[2, 2], [2, 2]]).matrix, np.full((2, 2), 0.25))


def test_validation_errors():
    with pytest.raises(AllZero):
        validate_and_normalize([[0, 0], [0, 0]])
    with pytest.raises(NegativeEntry) as info:
        validate_and_normalize([[1, 2], [-1, 3]])
    assert info.value.index == (1, 0)
    with pytest.raises(NotNormalized):
        StochasticSeed(np.array([[0.5, 0.6]]))


def test_seed_is_read_only():
    with pytest.raises(ValueError):
        GRAPH500.matrix[0, 0] = 1.0


@given(st.lists(pos_float, min_size=4, max_size=4))
def test_normalisation_preserves_ratios(vals):
    seed = validate_and_normalize(np.array(vals).reshape(2, 2))
    assert abs(seed.matrix.sum() - 1) <= 1e-12
    assert np.allclose(seed.matrix * sum(vals), np.array(vals).reshape(2, 2), rtol=1e-12)


# --------------------------------------------------------------------------
# 3x1 sampler


def test_3x1_uniform():
    out = sample_3x1_from_2x1([[0.5], [0.5]])
    assert out.shape == (3, 1)
    assert np.allclose(out.matrix.ravel(), 1 / 3, atol=1e-15)


def test_3x1_graph500_marginal():
    # 0.5625/0.8125 = 9/13 etc.
    out = sample_3x1_from_2x1([[0.75], [0.25]]).matrix.ravel()
    assert np.allclose(out, [9 / 13, 3 / 13, 1 / 13], atol=1e-15)
    assert np.allclose(out, [0.69231, 0.23077, 0.07692], atol=5e-6)
    thirds = [kgd_rectangle_mass([[0.75], [0.25]], Rect(Fraction(i, 3), Fraction(i + 1, 3), 0, 1), 40) for i in range(3)]
    assert np.allclose(thirds, out, atol=1e-10)


def test_3x1_orientation():
    assert sample_3x1_from_2x1([[0.75, 0.25]]).shape == (1, 3)
    with pytest.raises(KronError):
        sample_3x1_from_2x1(GRAPH500)


@pytest.mark.parametrize("v", [[1.0, 0.0], [0.0, 1.0]])
def test_3x1_degenerate(v):
    with pytest.raises(DegenerateSeed):
        sample_3x1_from_2x1([v])


@given(st.floats(min_value=1e-3, max_value=1 - 1e-3))
def test_3x1_identity(a):
    b = 1 - a
    out = sample_3x1_from_2x1([[a], [b]]).matrix.ravel()
    assert abs(out[0] * (1 - a * b) - a * a) <= 1e-12
    assert abs(out.sum() - 1) <= 1e-12


# --------------------------------------------------------------------------
# 3x3 sampler


def test_3x3_graph500_matches_printed_m():
    M = sample_3x3_from_2x2(GRAPH500).matrix
    assert np.abs(M - M_FOUR_DECIMALS).max() <= 5e-5
    assert np.abs(M - M_EXACT).max() <= 1e-15


def test_3x3_uniform():
    assert np.allclose(sample_3x3_from_2x2(np.full((2, 2), 0.25)).matrix, 1 / 9, atol=1e-15)


def test_3x3_rejects_degenerate():
    with pytest.raises(DegenerateSeed):
        sample_3x3_from_2x2([[1, 0], [0, 0]])
    with pytest.raises(DegenerateSeed):
        sample_3x3_from_2x2([[0, 0], [0, 1]])
    # mass on a line is still a valid measure
    M = sample_3x3_from_2x2([[0.5, 0.5], [0, 0]]).matrix
    assert np.allclose(M[0], [1 / 3, 1 / 3, 1 / 3]) and M[1:].sum() == 0


def _aggregates(T, M):
    (a, b), (c, d) = T.matrix
    r, c_ = (a + b) * (c + d), (a + c) * (b + d)
    expected = [(a + b) ** 2 / (1 - r), (c + d) ** 2 / (1 - r), (a + c) ** 2 / (1 - c_), (b + d) ** 2 / (1 - c_)]
    got = [M[0].sum(), M[2].sum(), M[:, 0].sum(), M[:, 2].sum()]
    return np.array(got), np.array(expected)


def test_3x3_row_aggregates_random():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        T = random_seed(rng)
        M = sample_3x3_from_2x2(T).matrix
        got, expected = _aggregates(T, M)
        assert np.abs(got - expected).max() <= 1e-12
        assert abs(M.sum() - 1) <= 1e-12


@settings(max_examples=200)
@given(st.lists(pos_float, min_size=4, max_size=4))
def test_3x3_transposition_equivariance(vals):
    T = validate_and_normalize(np.array(vals).reshape(2, 2))
    assert np.allclose(sample_3x3_from_2x2(T.T).matrix, sample_3x3_from_2x2(T).matrix.T, atol=1e-12)


@given(st.floats(0.01, 1), st.floats(0.01, 1), st.floats(0.01, 1))
def test_3x3_symmetric_seed_gives_symmetric_m(t1, t2, t3):
    M = sample_3x3_from_2x2(validate_and_normalize([[t1, t2], [t2, t3]])).matrix
    assert np.allclose(M, M.T, atol=1e-12)


def test_3x3_allows_zero_entries():
    M = sample_3x3_from_2x2([[0.5, 0.25], [0.25, 0.0]]).matrix
    assert M.min() >= 0 and abs(M.sum() - 1) <= 1e-12


# --------------------------------------------------------------------------
# rectangle mass


@pytest.mark.parametrize("depth", [1, 5, 40])
def test_unit_square_mass(depth):
    assert kgd_rectangle_mass(GRAPH500, Rect(0, 1, 0, 1), depth) == 1.0


def test_uniform_seed_is_lebesgue():
    r = Rect(0, Fraction(1, 3), 0, Fraction(1, 3))
    assert abs(kgd_rectangle_mass(np.full((2, 2), 0.25), r, 30) - 1 / 9) <= 1e-8


def test_graph500_corner_third():
    r = Rect(0, Fraction(1, 3), 0, Fraction(1, 3))
    assert abs(kgd_rectangle_mass(GRAPH500, r, 40) - 0.4793) <= 1e-4


@pytest.mark.parametrize(
    "shape,levels",
    [((2, 2), 8), ((3, 3), 5), ((2, 3), 6)],
)
def test_rectangle_mass_matches_kronecker_power(shape, levels):
    rng = np.random.default_rng(sum(shape) + levels)
    for _ in range(5):
        S = random_seed(rng, shape)
        x = sorted(rng.random(2))
        y = sorted(rng.random(2))
        r = Rect(Fraction(x[0]).limit_denominator(10**6), Fraction(x[1]).limit_denominator(10**6),
                 Fraction(y[0]).limit_denominator(10**6), Fraction(y[1]).limit_denominator(10**6))
        assert abs(kgd_rectangle_mass(S, r, levels) - kron_power_mass(S, r, levels)) <= 1e-12


def test_rect_validation():
    with pytest.raises(KronError):
        Rect(0, 1.5, 0, 1)
    with pytest.raises(KronError):
        Rect(0.6, 0.4, 0, 1)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.fractions(0, 1, max_denominator=50), min_size=6, max_size=6))
def test_rectangle_mass_monotone(cuts):
    x0, x1, x2 = sorted(cuts[:3])
    y0, y1, y2 = sorted(cuts[3:])
    inner = kgd_rectangle_mass(GRAPH500, Rect(x1, x2, y1, y2), 20)
    outer = kgd_rectangle_mass(GRAPH500, Rect(x0, x2, y0, y2), 20)
    assert inner <= outer + 1e-15


def test_rectangle_mass_additive_over_thirds():
    rng = np.random.default_rng(5)
    for S in [GRAPH500, random_seed(rng), random_seed(rng, (3, 2))]:
        total = sum(kgd_rectangle_mass(S, Rect.grid_cell(i, j, 3, 3), 40) for i in range(3) for j in range(3))
        assert abs(total - 1) <= 1e-12


# --------------------------------------------------------------------------
# numeric sampler


def test_sample_mxn_identity_shape():
    rng = np.random.default_rng(3)
    for shape in [(2, 2), (3, 3), (2, 3)]:
        S = random_seed(rng, shape)
        for depth in (1, 7):
            assert np.allclose(sample_mxn(S, *shape, depth).matrix, S.matrix, atol=1e-15)


def test_sample_mxn_matches_closed_forms():
    assert np.abs(sample_mxn(GRAPH500, 3, 3, 40).matrix - sample_3x3_from_2x2(GRAPH500).matrix).max() <= 1e-8
    v = [[0.7], [0.3]]
    assert np.abs(sample_mxn(v, 3, 1, 40).matrix - sample_3x1_from_2x1(v).matrix).max() <= 1e-8


def test_sample_mxn_converges_monotonically():
    rng = np.random.default_rng(9)
    for T in [GRAPH500, random_seed(rng), random_seed(rng)]:
        ref = sample_3x3_from_2x2(T).matrix
        errs = [np.abs(sample_mxn(T, 3, 3, d).matrix - ref).max() for d in (5, 10, 20, 30, 40)]
        assert all(b <= a for a, b in zip(errs, errs[1:])), errs
        assert errs[-1] <= 1e-8


# --------------------------------------------------------------------------
# parameters


def test_graph500_params():
    p = skg_params(GRAPH500, 16, 2**20)
    assert abs(p.sigma - 0.25) <= 1e-15
    assert abs(p.tau - 3.0) <= 1e-12
    assert p.delta == 16.0


def test_uniform_params():
    p = skg_params(np.full((2, 2), 0.25), 10, 4096)
    assert p.sigma == 0 and p.tau == 1
    assert p.lambda_small == p.delta


def test_asymmetric_params_rejected():
    with pytest.raises(AsymmetricSeed):
        skg_params([[0.4, 0.3], [0.2, 0.1]], 4, 10)


def test_params_tau_at_least_one():
    rng = np.random.default_rng(1)
    for _ in range(200):
        p = skg_params(random_symmetric_seed(rng), 6, 100)
        if p.sigma >= 0:
            assert p.tau >= 1
