import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from hisafe.sharing import (
    BeaverTripleSet,
    DealerConfig,
    ShareVector,
    deal_additive_shares,
    deal_beaver_triples,
    dealt_element_count,
    derive_rng,
    dump_triples,
    load_triple_sets,
    load_triples,
    reconstruct,
    triple_records,
)


def test_worked_example_shares():
    assert reconstruct(ShareVector(np.array([0, 3, 2]), 5)) == 0
    assert reconstruct(ShareVector(np.array([1, 1, 3]), 5)) == 0
    assert reconstruct(ShareVector(np.array([4, 3, 1]), 5)) == 3


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 29])
@pytest.mark.parametrize("n", [2, 3, 5])
def test_round_trip_exhaustive(p, n):
    rng = derive_rng(7, n, p)
    for s in range(p):
        sv = deal_additive_shares(s, n, p, rng)
        assert sv.shares.shape == (n,)
        assert sv.reconstruct() == s


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 30), st.sampled_from([5, 29, 101, 65537]), st.integers(0, 2**31), st.integers(0, 20))
def test_vector_round_trip(n, p, seed, d):
    secret = derive_rng(seed).integers(0, p, size=d)
    sv = deal_additive_shares(secret, n, p, derive_rng(seed, 1))
    assert sv.shares.shape == (n, d)
    assert np.array_equal(sv.reconstruct(), secret)


def test_sharing_rejects_bad_parameters():
    rng = derive_rng(0)
    with pytest.raises(ValueError):
        deal_additive_shares(1, 1, 5, rng)
    with pytest.raises(ValueError):
        deal_additive_shares(1, 3, 2**31 + 11, rng)
    with pytest.raises(ValueError):
        ShareVector(np.array([0, 5]), 5)


@pytest.mark.parametrize("secret", [0, 3])
def test_first_n_minus_one_shares_uniform(secret):
    p, n, trials = 5, 3, 10_000
    rng = derive_rng(11, secret)
    heads = np.array([deal_additive_shares(secret, n, p, rng).shares[: n - 1] for _ in range(trials)])
    cells = heads[:, 0] * p + heads[:, 1]
    assert stats.chisquare(np.bincount(cells, minlength=p * p)).pvalue > 0.001


@pytest.mark.parametrize("n,p,gates,d", [(3, 5, 2, 1), (12, 13, 9, 8), (24, 29, 19, 4)])
def test_beaver_triples_valid(n, p, gates, d):
    t = deal_beaver_triples(DealerConfig(3, n, p, gates, d))
    assert t.a.shape == (gates, n, d)
    assert t.is_valid()
    assert dealt_element_count(DealerConfig(3, n, p, gates, d)) == 3 * gates * n * d


def test_worked_example_triples_valid(worked_triples):
    assert worked_triples.is_valid()
    a, b, c = worked_triples.opened()
    assert a.ravel().tolist() == [0, 3]
    assert b.ravel().tolist() == [4, 0]
    assert c.ravel().tolist() == [0, 0]


def test_invalid_triples_detected():
    t = BeaverTripleSet.from_lists([[1, 0]], [[1, 0]], [[0, 0]], 5)
    assert not t.is_valid()


def test_dealer_deterministic_and_positional():
    cfg = DealerConfig(42, 4, 5, 3, 6, round=2, subgroup=1)
    t1, t2 = deal_beaver_triples(cfg), deal_beaver_triples(cfg)
    assert np.array_equal(t1.a, t2.a) and np.array_equal(t1.c, t2.c)
    other = deal_beaver_triples(DealerConfig(42, 4, 5, 3, 6, round=3, subgroup=1))
    assert not np.array_equal(t1.a, other.a)
    # a single gate regenerates in isolation
    one = deal_beaver_triples(DealerConfig(42, 4, 5, 3, 6, round=2, subgroup=1))
    assert np.array_equal(one.b[2], t1.b[2])


def test_dump_load_round_trip(tmp_path):
    t = deal_beaver_triples(DealerConfig(1, 3, 5, 2, 4))
    path = tmp_path / "triples.jsonl"
    dump_triples(triple_records(t, round=0, subgroup=0), path)
    back = load_triples(path)
    assert np.array_equal(back.a, t.a) and np.array_equal(back.b, t.b) and np.array_equal(back.c, t.c)


def test_load_multiple_sets(tmp_path):
    t0 = deal_beaver_triples(DealerConfig(1, 3, 5, 2, 2, subgroup=0))
    t1 = deal_beaver_triples(DealerConfig(1, 3, 5, 2, 2, subgroup=1))
    path = tmp_path / "t.jsonl"
    dump_triples([*triple_records(t0, round=0, subgroup=0), *triple_records(t1, round=0, subgroup=1)], path)
    sets = load_triple_sets(path)
    assert set(sets) == {(0, 0), (0, 1)}
    assert np.array_equal(sets[(0, 1)].c, t1.c)
    with pytest.raises(ValueError):
        load_triples(path)
