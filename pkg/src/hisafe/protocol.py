"""User and server state machines for one flat secure majority-vote round.

Every user holds additive shares of the powers x^k of the vote sum x. Each
gate of the power schedule multiplies two earlier powers with one Beaver
triple: users upload masked operands, the server opens their sums (delta,
epsilon) and broadcasts them, and users update their power shares locally.
Once all gates are done each user combines its power shares with the
polynomial coefficients into a share of F(x), and the server sums those
shares to read off the vote.

Gates of one dependency layer are uploaded together; broadcasts are then
applied in ascending gate order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from hisafe.field import check_vector_modulus, decode_centered, encode
from hisafe.mvpoly import Gate, MvPolynomial
from hisafe.sharing import BeaverTripleSet

DESIGNATED_USER = 0


class ProtocolError(Exception):
    """Base class for protocol failures (CLI exit code 1)."""


class ProtocolOrderError(ProtocolError):
    pass


class IncompleteGateError(ProtocolError):
    pass


class ProtocolCorruptionError(ProtocolError):
    pass


@dataclass
class OpCounter:
    """Counts online field multiplications (one per coordinate)."""

    mults: int = 0

    def add(self, k: int) -> None:
        self.mults += int(k)


# ---------------------------------------------------------------------------
# Messages
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MaskedOpeningUpload:
    round: int
    layer: int
    gate: int
    user: int
    left: np.ndarray  # [x^(k-v)]_i - [a]_i
    right: np.ndarray  # [x^v]_i - [b]_i

    def to_record(self) -> dict[str, Any]:
        return {
            "type": "masked_upload",
            "round": self.round,
            "layer": self.layer,
            "gate": self.gate,
            "user": self.user,
            "values": self.left.tolist() + self.right.tolist(),
        }


@dataclass(frozen=True)
class OpeningBroadcast:
    round: int
    layer: int
    gate: int
    delta: np.ndarray
    epsilon: np.ndarray

    def to_record(self) -> dict[str, Any]:
        return {
            "type": "opening",
            "round": self.round,
            "layer": self.layer,
            "gate": self.gate,
            "values": self.delta.tolist() + self.epsilon.tolist(),
        }


@dataclass(frozen=True)
class EncryptedShareUpload:
    round: int
    layer: int
    user: int
    share: np.ndarray

    def to_record(self) -> dict[str, Any]:
        return {
            "type": "share",
            "round": self.round,
            "layer": self.layer,
            "gate": None,
            "user": self.user,
            "values": self.share.tolist(),
        }


@dataclass
class ProtocolTranscript:
    config: dict[str, Any]
    messages: list[Any] = field(default_factory=list)
    vote: np.ndarray | None = None
    extra_records: list[dict[str, Any]] = field(default_factory=list)

    def records(self) -> list[dict[str, Any]]:
        recs = [{"type": "config", **self.config}]
        recs += [m.to_record() for m in self.messages]
        recs += self.extra_records
        if self.vote is not None:
            recs.append({"type": "vote", "round": self.config.get("round", 0), "values": self.vote.tolist()})
        return recs

    def to_jsonl(self) -> str:
        return "".join(json.dumps(r, sort_keys=True) + "\n" for r in self.records())

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_jsonl())

    def uploads(self) -> list[MaskedOpeningUpload]:
        return [m for m in self.messages if isinstance(m, MaskedOpeningUpload)]

    def openings(self) -> list[OpeningBroadcast]:
        return [m for m in self.messages if isinstance(m, OpeningBroadcast)]

    def shares(self) -> list[EncryptedShareUpload]:
        return [m for m in self.messages if isinstance(m, EncryptedShareUpload)]


# ---------------------------------------------------------------------------
# User side
# ---------------------------------------------------------------------------


class UserState:
    """One user's view: its input, its triple shares, and its power shares."""

    def __init__(
        self,
        user: int,
        x: np.ndarray,
        triples: BeaverTripleSet,
        poly: MvPolynomial,
        round_index: int = 0,
        counter: OpCounter | None = None,
    ) -> None:
        self.user = user
        self.designated = user == DESIGNATED_USER
        self.p = poly.p
        self.poly = poly
        self.schedule = poly.schedule
        self.round = round_index
        self.a, self.b, self.c = triples.user(user)
        self.powers: dict[int, np.ndarray] = {1: encode(x, self.p)}
        self.next_gate = 0
        self.counter = counter if counter is not None else OpCounter()

    def masked_upload(self, gate: Gate) -> MaskedOpeningUpload:
        if gate.left not in self.powers or gate.right not in self.powers:
            raise ProtocolOrderError(f"user {self.user}: operands of gate {gate.index} not available yet")
        p = self.p
        left = (self.powers[gate.left] - self.a[gate.index]) % p
        right = (self.powers[gate.right] - self.b[gate.index]) % p
        return MaskedOpeningUpload(self.round, gate.layer, gate.index, self.user, left, right)

    def apply_broadcast(self, bc: OpeningBroadcast) -> None:
        if bc.gate != self.next_gate:
            raise ProtocolOrderError(
                f"user {self.user}: expected broadcast for gate {self.next_gate}, got {bc.gate}"
            )
        g = self.schedule.gates[bc.gate]
        p = self.p
        r = bc.gate
        d = bc.delta.shape[0]
        share = (self.c[r] + bc.delta * self.b[r] + bc.epsilon * self.a[r]) % p
        self.counter.add(2 * d)
        if self.designated:
            share = (share + bc.delta * bc.epsilon) % p
            self.counter.add(d)
        self.powers[g.target] = share
        self.next_gate += 1

    def finalize(self) -> EncryptedShareUpload:
        if self.next_gate != self.schedule.mult_count:
            raise ProtocolOrderError(
                f"user {self.user}: {self.schedule.mult_count - self.next_gate} gates still pending"
            )
        p = self.p
        share = np.zeros_like(self.powers[1])
        d = share.shape[0]
        for k, coeff in self.poly.terms().items():
            if k == 0:
                if self.designated:
                    share = (share + coeff) % p
                continue
            share = (share + coeff * self.powers[k]) % p
            self.counter.add(d)
        return EncryptedShareUpload(self.round, self.schedule.schedule_depth, self.user, share)


def user_power_share_update(state: UserState, broadcast: OpeningBroadcast) -> UserState:
    state.apply_broadcast(broadcast)
    return state


def user_finalize_share(state: UserState) -> EncryptedShareUpload:
    return state.finalize()


# ---------------------------------------------------------------------------
# Server side
# ---------------------------------------------------------------------------


def _check_one_per_user(users: Sequence[int], n: int, what: str) -> None:
    if sorted(users) != list(range(n)):
        raise IncompleteGateError(f"{what}: expected one message from each of {n} users, got users {sorted(users)}")


def server_open(uploads: Sequence[MaskedOpeningUpload], n: int, p: int) -> OpeningBroadcast:
    if not uploads:
        raise IncompleteGateError("no uploads for gate")
    gates = {u.gate for u in uploads}
    if len(gates) != 1:
        raise IncompleteGateError(f"uploads mix gates {sorted(gates)}")
    _check_one_per_user([u.user for u in uploads], n, f"gate {uploads[0].gate}")
    delta = np.sum([u.left for u in uploads], axis=0) % p
    epsilon = np.sum([u.right for u in uploads], axis=0) % p
    first = uploads[0]
    return OpeningBroadcast(first.round, first.layer, first.gate, delta, epsilon)


def server_aggregate(uploads: Sequence[EncryptedShareUpload], poly: MvPolynomial) -> np.ndarray:
    """Sum the final shares and decode the vote; values outside the policy's
    range mean the shares were corrupted."""
    _check_one_per_user([u.user for u in uploads], poly.n, "final shares")
    total = np.sum([u.share for u in uploads], axis=0) % poly.p
    vote = decode_centered(total, poly.p)
    allowed = [-1, 1] if poly.policy.is_binary else [-1, 0, 1]
    if not np.all(np.isin(vote, allowed)):
        raise ProtocolCorruptionError(f"decoded votes outside {allowed}: {sorted(set(vote.tolist()))}")
    return vote


# ---------------------------------------------------------------------------
# Full round
# ---------------------------------------------------------------------------


def validate_inputs(inputs: np.ndarray, n: int) -> np.ndarray:
    x = np.asarray(inputs, dtype=np.int64)
    if x.ndim != 2 or x.shape[0] != n:
        raise ValueError(f"inputs must be an n x d matrix with n={n}, got shape {x.shape}")
    if not np.all((x == 1) | (x == -1)):
        raise ValueError("inputs must be in {-1, +1}")
    return x


def run_flat_round(
    inputs: np.ndarray,
    poly: MvPolynomial,
    triples: BeaverTripleSet,
    round_index: int = 0,
    counter: OpCounter | None = None,
) -> tuple[np.ndarray, ProtocolTranscript]:
    """Execute one lock-step secure round; returns (vote vector, transcript)."""
    check_vector_modulus(poly.p)
    n = poly.n
    x = validate_inputs(inputs, n)
    d = x.shape[1]
    schedule = poly.schedule
    if triples.p != poly.p or triples.n != n or triples.d != d or triples.gate_count != schedule.mult_count:
        raise ValueError(
            f"triples sized (gates={triples.gate_count}, n={triples.n}, d={triples.d}, p={triples.p}) "
            f"do not match schedule (gates={schedule.mult_count}, n={n}, d={d}, p={poly.p})"
        )
    counter = counter if counter is not None else OpCounter()
    transcript = ProtocolTranscript(
        config={
            "round": round_index,
            "n": n,
            "d": d,
            "p": poly.p,
            "policy": poly.policy.value,
            "gates": [[g.target, g.left, g.right] for g in schedule.gates],
        }
    )
    users = [UserState(i, x[i], triples, poly, round_index, counter) for i in range(n)]

    for layer in schedule.layers:
        per_gate = {g.index: [u.masked_upload(g) for u in users] for g in layer}
        for g in layer:
            transcript.messages.extend(per_gate[g.index])
        for g in layer:
            bc = server_open(per_gate[g.index], n, poly.p)
            transcript.messages.append(bc)
            for u in users:
                user_power_share_update(u, bc)

    finals = [user_finalize_share(u) for u in users]
    transcript.messages.extend(finals)
    vote = server_aggregate(finals, poly) if d else np.zeros(0, dtype=np.int64)
    transcript.vote = vote
    return vote, transcript
