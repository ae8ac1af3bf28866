import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fatpoints.linalg import RowReducer, matmul_mod, rank_mod_p, rank_mod_p_naive

PRIMES = [2, 97, 1000003, 2**31 - 1]


@given(st.data())
@settings(max_examples=60, deadline=None)
def test_rank_matches_naive(data):
    p = data.draw(st.sampled_from(PRIMES))
    m = data.draw(st.integers(1, 30))
    n = data.draw(st.integers(1, 30))
    seed = data.draw(st.integers(0, 2**31))
    rng = np.random.default_rng(seed)
    a = rng.integers(0, p, size=(m, n), dtype=np.int64)
    if data.draw(st.booleans()):
        a[: m // 2] = 0
    if data.draw(st.booleans()):
        a = np.vstack([a, a])
    assert rank_mod_p(a, p) == rank_mod_p_naive(a, p)


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_matmul_mod_exact(data):
    p = data.draw(st.sampled_from(PRIMES))
    m, k, n = (data.draw(st.integers(1, 25)) for _ in range(3))
    rng = np.random.default_rng(data.draw(st.integers(0, 2**31)))
    a = rng.integers(0, p, size=(m, k), dtype=np.int64)
    b = rng.integers(0, p, size=(k, n), dtype=np.int64)
    exact = (a.astype(object) @ b.astype(object)) % p
    assert (matmul_mod(a, b, p) == exact.astype(np.int64)).all()


def test_identity_block_rank():
    assert rank_mod_p(np.eye(7, dtype=np.int64), 101) == 7


def test_duplicated_row_rank_unchanged():
    rng = np.random.default_rng(3)
    a = rng.integers(0, 101, size=(5, 9), dtype=np.int64)
    assert rank_mod_p(np.vstack([a, a[2]]), 101) == rank_mod_p(a, 101)


def test_incremental_feeding_matches_batch():
    p = 2**31 - 1
    rng = np.random.default_rng(11)
    a = rng.integers(0, p, size=(200, 90), dtype=np.int64)
    red = RowReducer(90, p, block=32)
    for i in range(0, 200, 7):
        red.queue_rows(a[i : i + 7])
    assert red.rank == rank_mod_p(a, p)


def test_saturation_stops_early():
    p = 97
    red = RowReducer(4, p)
    red.add_rows(np.eye(4, dtype=np.int64))
    assert red.saturated()
    red.add_rows(np.ones((3, 4), dtype=np.int64))
    assert red.rank == 4


def test_rejects_bad_prime():
    with pytest.raises(ValueError):
        RowReducer(4, 2**31)
