import math
import statistics

from hypothesis import given
from hypothesis import strategies as st

from syncsim import randstream

key_parts = st.lists(
    st.one_of(st.integers(-2**40, 2**40), st.text(max_size=8),
              st.floats(allow_nan=False, allow_infinity=False)),
    min_size=1, max_size=4)


@given(st.integers(0, 2**64 - 1), key_parts)
def test_draws_are_deterministic(seed, key):
    assert randstream.u64(seed, *key) == randstream.u64(seed, *key)
    assert randstream.uniform(seed, *key) == randstream.uniform(seed, *key)


@given(st.integers(0, 2**32), key_parts)
def test_uniform_range(seed, key):
    u = randstream.uniform(seed, *key)
    assert 0.0 <= u < 1.0


def test_key_parts_are_not_ambiguous():
    # one string vs two strings that concatenate the same must differ
    assert randstream.u64(1, "ab", "c") != randstream.u64(1, "a", "bc")
    assert randstream.u64(1, 12) != randstream.u64(1, "12")
    assert randstream.u64(1, (1, 2)) != randstream.u64(1, 1, 2)


def test_seed_changes_stream():
    values = {randstream.u64(seed, "x", 3) for seed in range(32)}
    assert len(values) == 32


def test_bernoulli_extremes():
    assert randstream.bernoulli(3, 0.0, "k") is False
    assert randstream.bernoulli(3, 1.0, "k") is True


def test_bernoulli_frequency():
    hits = sum(randstream.bernoulli(9, 0.3, "flip", i) for i in range(100_000))
    assert abs(hits / 100_000 - 0.3) < 0.01


def test_gaussian_zero_sigma_is_exactly_zero():
    assert randstream.gaussian(5, 0.0, "n", 1) == 0.0


def test_gaussian_moments():
    sigma = 1e-9
    samples = [randstream.gaussian(11, sigma, "noise", i) for i in range(100_000)]
    assert abs(statistics.fmean(samples)) < 3 * sigma / math.sqrt(len(samples))
    assert abs(statistics.stdev(samples) - sigma) < 0.05 * sigma
