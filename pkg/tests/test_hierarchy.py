from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hisafe.hierarchy import (
    A1,
    B1,
    InvalidLayoutError,
    TieConfig,
    deal_round_triples,
    leakage_census,
    partition,
    plaintext_hierarchical_vote,
    run_hierarchical_round,
    subgroup_polynomial,
)
from hisafe.mvpoly import TiePolicy
from hisafe.protocol import run_flat_round
from hisafe.sharing import derive_rng


def _inputs(n, d, seed):
    return np.where(derive_rng(seed, 4).random((n, d)) < 0.5, -1, 1)


def _secure(x, layout, ties, seed=0, workers=1):
    poly = subgroup_polynomial(layout.n1, ties.intra)
    triples = deal_round_triples(seed, 0, layout, poly, x.shape[1])
    return run_hierarchical_round(x, layout, ties, triples, workers=workers)


def test_partition_contiguous():
    layout = partition(24, 8)
    assert layout.n1 == 3
    assert layout.members(0) == [0, 1, 2]
    assert layout.members(7) == [21, 22, 23]


def test_partition_shuffled_is_partition():
    layout = partition(24, 6, shuffle_seed=3)
    members = sorted(i for j in range(6) for i in layout.members(j))
    assert members == list(range(24))
    assert all(len(layout.members(j)) == 4 for j in range(6))
    assert layout != partition(24, 6)


@pytest.mark.parametrize("n,l", [(12, 5), (12, 12), (7, 0)])
def test_partition_rejects(n, l):
    with pytest.raises(InvalidLayoutError):
        partition(n, l)


def test_presets():
    assert TieConfig.preset("A-1") == A1
    assert B1.intra is TiePolicy.ZERO_STATE
    with pytest.raises(ValueError):
        TieConfig(TiePolicy.RESOLVE_TO_MINUS, TiePolicy.ZERO_STATE)
    with pytest.raises(ValueError):
        TieConfig.preset("C3")


def test_single_group_equals_flat_bit_for_bit():
    x = _inputs(12, 9, 1)
    layout = partition(12, 1)
    vote, tr = _secure(x, layout, A1, seed=4)
    poly = subgroup_polynomial(12, TiePolicy.RESOLVE_TO_MINUS)
    flat_vote, flat_tr = run_flat_round(x, poly, deal_round_triples(4, 0, layout, poly, 9)[0])
    assert np.array_equal(vote, flat_vote)
    assert tr.subtranscripts[0].to_jsonl() == flat_tr.to_jsonl()


def test_two_group_example():
    x = np.array([[1], [1], [-1], [-1], [-1], [-1]])
    layout = partition(6, 2)
    assert plaintext_hierarchical_vote(x, layout, A1).tolist() == [-1]
    vote, tr = _secure(x, layout, A1)
    assert vote.tolist() == [-1]
    assert [g.vote.tolist() for g in tr.group_votes] == [[1], [-1]]


def test_inter_group_tie_resolves_minus():
    # groups vote +1 and -1: inter-group sum 0 -> -1
    x = np.array([[1], [1], [-1], [-1], [-1], [1]])
    assert plaintext_hierarchical_vote(x, partition(6, 2), A1).tolist() == [-1]


def test_large_equivalence_n24_l8():
    x = _inputs(24, 100, 9)
    layout = partition(24, 8)
    for ties in (A1, B1):
        vote, _ = _secure(x, layout, ties, seed=9, workers=4)
        assert np.array_equal(vote, plaintext_hierarchical_vote(x, layout, ties))


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([(6, 2), (8, 2), (9, 3), (12, 3), (12, 4), (12, 2), (10, 5)]), st.sampled_from([A1, B1]),
       st.integers(0, 2**32), st.integers(1, 10), st.booleans())
def test_secure_equals_plaintext(nl, ties, seed, d, shuffle):
    n, l = nl
    layout = partition(n, l, shuffle_seed=seed if shuffle else None)
    x = _inputs(n, d, seed)
    vote, _ = _secure(x, layout, ties, seed)
    assert np.array_equal(vote, plaintext_hierarchical_vote(x, layout, ties))


def test_b1_zero_votes_contained():
    # group 0 ties (0), group 1 votes +1 -> +1; a zero never escapes the inter level
    x = np.array([[1], [-1], [1], [1]])
    vote, tr = _secure(x, partition(4, 2), B1)
    assert [g.vote.tolist() for g in tr.group_votes] == [[0], [1]]
    assert vote.tolist() == [1]
    for seed in range(20):
        x = _inputs(8, 16, seed)
        vote, _ = _secure(x, partition(8, 4), B1, seed)
        assert set(vote.tolist()) <= {-1, 1}


def test_transcript_records_tagged():
    x = _inputs(6, 2, 0)
    _, tr = _secure(x, partition(6, 2), A1)
    recs = tr.records()
    assert recs[0]["type"] == "config" and recs[0]["l"] == 2
    assert any(r["type"] == "inter_aggregate" for r in recs)
    assert {r["subgroup"] for r in recs if r["type"] == "masked_upload"} == {0, 1}


@pytest.mark.parametrize("n1", range(3, 17))
def test_leakage_census_law(n1):
    assert leakage_census(n1) == Fraction(1, 2 ** (n1 - 1))


def test_leakage_census_n1_2():
    # with two users under the zero state only the unanimous profiles are decisive
    assert leakage_census(2, TiePolicy.ZERO_STATE) == Fraction(1, 2)
    with pytest.raises(ValueError):
        leakage_census(21)
