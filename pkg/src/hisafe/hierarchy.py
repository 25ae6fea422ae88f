"""Hierarchical subgroup aggregation.

Users are split into l subgroups of n1 = n / l. Each subgroup runs the flat
secure round over F_p1 (p1 the smallest prime above n1); the server then
takes sign(sum of subgroup votes) in plaintext under the inter-group tie
policy.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np

from hisafe.mvpoly import MvPolynomial, TiePolicy, construct_mv_polynomial
from hisafe.protocol import OpCounter, ProtocolTranscript, run_flat_round, validate_inputs
from hisafe.sharing import (
    STREAM_LAYOUT,
    BeaverTripleSet,
    DealerConfig,
    deal_beaver_triples,
    derive_rng,
)


class InvalidLayoutError(ValueError):
    pass


@dataclass(frozen=True)
class SubgroupLayout:
    n: int
    l: int
    assignment: tuple[int, ...]  # user -> subgroup

    def __post_init__(self) -> None:
        if self.l < 1 or self.n % self.l:
            raise InvalidLayoutError(f"{self.l} subgroups do not divide {self.n} users")
        if self.n1 < 2:
            raise InvalidLayoutError(f"subgroups need at least 2 users, got n1={self.n1}")
        counts = np.bincount(np.asarray(self.assignment, dtype=np.int64), minlength=self.l)
        if len(self.assignment) != self.n or len(counts) != self.l or np.any(counts != self.n1):
            raise InvalidLayoutError("assignment is not a partition into equal subgroups")

    @property
    def n1(self) -> int:
        return self.n // self.l

    def members(self, j: int) -> list[int]:
        return [i for i, g in enumerate(self.assignment) if g == j]


def partition(n: int, l: int, shuffle_seed: int | None = None) -> SubgroupLayout:
    """Contiguous blocks by default; a seeded permutation if ``shuffle_seed`` is given."""
    if l < 1 or n % l:
        raise InvalidLayoutError(f"{l} subgroups do not divide {n} users")
    n1 = n // l
    assignment = [i // n1 for i in range(n)]
    if shuffle_seed is not None:
        perm = derive_rng(shuffle_seed, STREAM_LAYOUT).permutation(n)
        assignment = [assignment[k] for k in np.argsort(perm)]
    return SubgroupLayout(n, l, tuple(assignment))


@dataclass(frozen=True)
class TieConfig:
    intra: TiePolicy
    inter: TiePolicy

    def __post_init__(self) -> None:
        if not self.inter.is_binary:
            raise ValueError("inter-group votes must be 1-bit; a zero state is not a valid update direction")

    @classmethod
    def preset(cls, name: str) -> TieConfig:
        key = name.upper().replace("-", "")
        if key == "A1":
            return cls(TiePolicy.RESOLVE_TO_MINUS, TiePolicy.RESOLVE_TO_MINUS)
        if key == "B1":
            return cls(TiePolicy.ZERO_STATE, TiePolicy.RESOLVE_TO_MINUS)
        raise ValueError(f"unknown tie configuration {name!r} (supported: A1, B1)")


A1 = TieConfig.preset("A1")
B1 = TieConfig.preset("B1")


@lru_cache(maxsize=None)
def subgroup_polynomial(n1: int, policy: TiePolicy) -> MvPolynomial:
    return construct_mv_polynomial(n1, policy)


def deal_round_triples(
    seed: int, round_index: int, layout: SubgroupLayout, poly: MvPolynomial, d: int
) -> list[BeaverTripleSet]:
    """Fresh triples for every subgroup of one round."""
    return [
        deal_beaver_triples(
            DealerConfig(seed, layout.n1, poly.p, poly.schedule.mult_count, d, round_index, j)
        )
        for j in range(layout.l)
    ]


@dataclass(frozen=True)
class GroupVote:
    subgroup: int
    vote: np.ndarray


@dataclass
class HierarchicalTranscript(ProtocolTranscript):
    group_votes: list[GroupVote] = field(default_factory=list)
    subtranscripts: list[ProtocolTranscript] = field(default_factory=list)


def plaintext_hierarchical_vote(inputs: np.ndarray, layout: SubgroupLayout, ties: TieConfig) -> np.ndarray:
    """Two-level majority sign(sum_j sign(sum_{i in G_j} x_i)), computed in the clear."""
    x = np.asarray(inputs, dtype=np.int64)
    total = np.zeros(x.shape[1], dtype=np.int64)
    for j in range(layout.l):
        total += ties.intra.sign_array(x[layout.members(j)].sum(axis=0))
    return ties.inter.sign_array(total)


def run_hierarchical_round(
    inputs: np.ndarray,
    layout: SubgroupLayout,
    ties: TieConfig,
    triples: list[BeaverTripleSet],
    round_index: int = 0,
    counter: OpCounter | None = None,
    workers: int = 1,
) -> tuple[np.ndarray, HierarchicalTranscript]:
    x = validate_inputs(inputs, layout.n)
    if len(triples) != layout.l:
        raise ValueError(f"need one triple set per subgroup ({layout.l}), got {len(triples)}")
    poly = subgroup_polynomial(layout.n1, ties.intra)
    counters = [OpCounter() for _ in range(layout.l)]

    def run_group(j: int) -> tuple[np.ndarray, ProtocolTranscript]:
        return run_flat_round(x[layout.members(j)], poly, triples[j], round_index, counters[j])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_group, range(layout.l)))
    else:
        results = [run_group(j) for j in range(layout.l)]

    group_votes = [GroupVote(j, v) for j, (v, _) in enumerate(results)]
    summed = np.sum([g.vote for g in group_votes], axis=0).astype(np.int64)
    vote = ties.inter.sign_array(summed)
    if counter is not None:
        counter.add(sum(c.mults for c in counters))

    transcript = HierarchicalTranscript(
        config={
            "round": round_index,
            "n": layout.n,
            "l": layout.l,
            "n1": layout.n1,
            "d": x.shape[1],
            "p1": poly.p,
            "intra": ties.intra.value,
            "inter": ties.inter.value,
        }
    )
    for j, (_, sub) in enumerate(results):
        for rec in sub.records():
            if rec["type"] != "config":
                transcript.extra_records.append({**rec, "subgroup": j})
    transcript.extra_records.append(
        {
            "type": "inter_aggregate",
            "round": round_index,
            "group_votes": [g.vote.tolist() for g in group_votes],
            "values": vote.tolist(),
        }
    )
    transcript.vote = vote
    transcript.group_votes = group_votes
    transcript.subtranscripts = [sub for _, sub in results]
    return vote, transcript


def leakage_census(n1: int, policy: TiePolicy = TiePolicy.RESOLVE_TO_MINUS) -> Fraction:
    """Fraction of the 2^n1 single-coordinate profiles whose published vote
    equals every user's input, i.e. the vote alone tells each input exactly.

    A profile is counted when all inputs agree with the vote; this happens
    only for the two unanimous profiles.
    """
    if not 2 <= n1 <= 20:
        raise ValueError("enumeration supported for 2 <= n1 <= 20")
    revealed = 0
    for profile in product((-1, 1), repeat=n1):
        s = policy.sign(sum(profile))
        if all(v == s for v in profile):
            revealed += 1
    return Fraction(revealed, 2**n1)
