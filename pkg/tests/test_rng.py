import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from rpskg import rng


def test_same_stream_twice():
    a = rng.per_edge_randomness(42, 7).random(100)
    b = rng.per_edge_randomness(42, 7).random(100)
    assert np.array_equal(a, b)


def test_sequential_matches_vectorised():
    stream = rng.per_edge_randomness(3, 11, rng.POSITIONS)
    seq = [next(stream) for _ in range(20)]
    assert np.array_equal(seq, rng.uniforms(3, rng.POSITIONS, 11, np.arange(20)))


def test_adjacent_streams_uncorrelated():
    a = rng.per_edge_randomness(1, 0).random(10_000)
    b = rng.per_edge_randomness(1, 1).random(10_000)
    assert abs(np.corrcoef(a, b)[0, 1]) < 0.05


def test_domains_and_seeds_differ():
    base = rng.uniforms(5, rng.LEVELS, 0, np.arange(8))
    assert not np.array_equal(base, rng.uniforms(5, rng.NOISE, 0, np.arange(8)))
    assert not np.array_equal(base, rng.uniforms(6, rng.LEVELS, 0, np.arange(8)))


def test_uniform_ranges_and_moments():
    u = rng.uniforms(9, rng.LEVELS, np.arange(200_000), 0)
    assert u.min() >= 0 and u.max() < 1
    assert abs(u.mean() - 0.5) < 3 * np.sqrt(1 / 12 / len(u))
    w = rng.open_uniforms(9, rng.LEVELS, np.arange(1000), 0)
    assert w.min() > 0 and w.max() <= 1


@given(st.integers(0, 2**64 - 1), st.integers(0, 2**40))
def test_derive_seed_deterministic(seed, step):
    child = rng.derive_seed(seed, step)
    assert child == rng.derive_seed(seed, step)
    assert 0 <= child < 2**64
