"""Additive secret sharing over F_p and a simulated trusted Beaver-triple dealer.

Randomness is drawn from counter-based Philox streams keyed by a position
tuple, so every dealt block can be regenerated in isolation:

    derive_rng(seed, STREAM_TRIPLES, round, subgroup, gate)

yields the stream for one gate of one subgroup in one round. Within a gate
the draws are, in order: all n shares of ``a`` (shape n x d), all n shares of
``b``, then the first n - 1 shares of ``c``; the last ``c`` share completes
the sum to a * b.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from hisafe.field import check_vector_modulus

STREAM_TRIPLES = 0
STREAM_GRADIENTS = 1
STREAM_TASK = 2
STREAM_LAYOUT = 3
STREAM_INPUTS = 4


def derive_rng(seed: int, *path: int) -> np.random.Generator:
    """Independent Philox generator for the position ``path`` under ``seed``."""
    ss = np.random.SeedSequence(seed, spawn_key=tuple(int(x) for x in path))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class ShareVector:
    """Additive shares, one row per user; trailing axes are coordinates."""

    shares: np.ndarray
    p: int

    def __post_init__(self) -> None:
        if self.shares.ndim == 0 or self.shares.shape[0] == 0:
            raise ValueError("a share vector needs at least one share")
        if np.any(self.shares < 0) or np.any(self.shares >= self.p):
            raise ValueError("shares must lie in [0, p)")

    @property
    def n(self) -> int:
        return self.shares.shape[0]

    def reconstruct(self) -> np.ndarray | int:
        total = np.sum(self.shares, axis=0) % self.p
        return int(total) if np.ndim(total) == 0 else total


def reconstruct(sv: ShareVector) -> np.ndarray | int:
    return sv.reconstruct()


def deal_additive_shares(
    secret: int | np.ndarray, n: int, p: int, rng: np.random.Generator
) -> ShareVector:
    """Split ``secret`` into n shares: n-1 uniform, the last completes the sum."""
    if n < 2:
        raise ValueError("additive sharing needs n >= 2")
    check_vector_modulus(p)
    secret = np.mod(np.asarray(secret, dtype=np.int64), p)
    head = rng.integers(0, p, size=(n - 1, *secret.shape), dtype=np.int64)
    last = (secret - head.sum(axis=0)) % p
    return ShareVector(np.concatenate([head, last[None]], axis=0), p)


@dataclass(frozen=True)
class DealerConfig:
    seed: int
    n: int
    p: int
    gate_count: int
    d: int
    round: int = 0
    subgroup: int = 0


@dataclass(frozen=True)
class BeaverTripleSet:
    """Per-gate triple shares, arrays of shape (gate_count, n, d)."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    p: int

    def __post_init__(self) -> None:
        if not (self.a.shape == self.b.shape == self.c.shape) or self.a.ndim != 3:
            raise ValueError("triple share arrays must share shape (gates, n, d)")

    @property
    def gate_count(self) -> int:
        return self.a.shape[0]

    @property
    def n(self) -> int:
        return self.a.shape[1]

    @property
    def d(self) -> int:
        return self.a.shape[2]

    def user(self, i: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """User i's shares, each of shape (gate_count, d)."""
        return self.a[:, i, :], self.b[:, i, :], self.c[:, i, :]

    def opened(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Reconstructed (a, b, c), each (gate_count, d); for tests only."""
        return tuple(x.sum(axis=1) % self.p for x in (self.a, self.b, self.c))

    def is_valid(self) -> bool:
        a, b, c = self.opened()
        return bool(np.all(a * b % self.p == c))

    @classmethod
    def from_lists(cls, a, b, c, p: int) -> BeaverTripleSet:
        """Build from nested lists indexed [gate][user] (d = 1) or [gate][user][coord]."""
        arrs = []
        for x in (a, b, c):
            arr = np.mod(np.asarray(x, dtype=np.int64), p)
            if arr.ndim == 2:
                arr = arr[:, :, None]
            arrs.append(arr)
        return cls(*arrs, p=p)


def deal_beaver_triples(cfg: DealerConfig, rng: np.random.Generator | None = None) -> BeaverTripleSet:
    """Deal ``gate_count`` x ``d`` fresh triples for ``n`` users.

    Without an explicit ``rng`` each gate uses its own derived stream, so the
    output is a pure function of ``cfg``.
    """
    check_vector_modulus(cfg.p)
    shape = (cfg.gate_count, cfg.n, cfg.d)
    a = np.empty(shape, dtype=np.int64)
    b = np.empty(shape, dtype=np.int64)
    c = np.empty(shape, dtype=np.int64)
    for r in range(cfg.gate_count):
        g = rng if rng is not None else derive_rng(cfg.seed, STREAM_TRIPLES, cfg.round, cfg.subgroup, r)
        a[r] = g.integers(0, cfg.p, size=(cfg.n, cfg.d), dtype=np.int64)
        b[r] = g.integers(0, cfg.p, size=(cfg.n, cfg.d), dtype=np.int64)
        product = a[r].sum(axis=0) % cfg.p * (b[r].sum(axis=0) % cfg.p) % cfg.p
        c[r] = deal_additive_shares(product, cfg.n, cfg.p, g).shares
    return BeaverTripleSet(a, b, c, cfg.p)


def dealt_element_count(cfg: DealerConfig) -> int:
    """Field elements drawn or derived by the dealer for ``cfg``."""
    return 3 * cfg.gate_count * cfg.n * cfg.d


# ---------------------------------------------------------------------------
# JSON-lines dump for protocol replay
# ---------------------------------------------------------------------------


def triple_records(triples: BeaverTripleSet, **context: int) -> Iterator[dict]:
    for r in range(triples.gate_count):
        for j in range(triples.d):
            yield {
                **context,
                "gate": r,
                "coordinate": j,
                "p": triples.p,
                "a": triples.a[r, :, j].tolist(),
                "b": triples.b[r, :, j].tolist(),
                "c": triples.c[r, :, j].tolist(),
            }


def dump_triples(records: Iterable[dict], path: str | Path) -> None:
    with open(path, "w") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def load_triple_sets(path: str | Path) -> dict[tuple[int, int], BeaverTripleSet]:
    """Rebuild triple sets from a dump, keyed by (round, subgroup)."""
    recs = [json.loads(line) for line in Path(path).read_text().splitlines() if line.strip()]
    if not recs:
        raise ValueError(f"no triple records in {path}")
    grouped: dict[tuple[int, int], list[dict]] = {}
    for rec in recs:
        grouped.setdefault((rec.get("round", 0), rec.get("subgroup", 0)), []).append(rec)
    out = {}
    for key, group in sorted(grouped.items()):
        gates = 1 + max(r["gate"] for r in group)
        d = 1 + max(r["coordinate"] for r in group)
        n = len(group[0]["a"])
        arrs = {k: np.zeros((gates, n, d), dtype=np.int64) for k in "abc"}
        for rec in group:
            for k in "abc":
                arrs[k][rec["gate"], :, rec["coordinate"]] = rec[k]
        out[key] = BeaverTripleSet(arrs["a"], arrs["b"], arrs["c"], group[0]["p"])
    return out


def load_triples(path: str | Path) -> BeaverTripleSet:
    sets = load_triple_sets(path)
    if len(sets) != 1:
        raise ValueError(f"{path} holds {len(sets)} triple sets; use load_triple_sets")
    return next(iter(sets.values()))
