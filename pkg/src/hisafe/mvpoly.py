"""Majority-vote polynomials over F_p and their secure-multiplication schedule.

The polynomial is built from Fermat indicators: for prime p > n,
``1 - (x - m)^(p-1)`` is 1 at x = m and 0 elsewhere, so

    F(x) = sum over reachable sums m of sign(m) * (1 - (x - m)^(p-1))

equals sign(x) on every reachable vote sum {-n, -n+2, ..., n}.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from hisafe.field import PrimeModulus, decode_centered, smallest_prime_gt


class TiePolicy(enum.Enum):
    """How sign(0) is defined."""

    RESOLVE_TO_MINUS = "minus"
    RESOLVE_TO_PLUS = "plus"
    ZERO_STATE = "zero"

    @property
    def sign_of_zero(self) -> int:
        return {"minus": -1, "plus": 1, "zero": 0}[self.value]

    @property
    def is_binary(self) -> bool:
        return self is not TiePolicy.ZERO_STATE

    def sign(self, m: int) -> int:
        if m > 0:
            return 1
        if m < 0:
            return -1
        return self.sign_of_zero

    def sign_array(self, values: np.ndarray) -> np.ndarray:
        s = np.sign(np.asarray(values, dtype=np.int64))
        return np.where(s == 0, self.sign_of_zero, s).astype(np.int64)


def reachable_sums(n: int) -> range:
    return range(-n, n + 1, 2)


@dataclass(frozen=True)
class MvPolynomial:
    n: int
    modulus: PrimeModulus
    policy: TiePolicy
    coeffs: tuple[int, ...]  # coeffs[k] is the coefficient of x^k

    def __post_init__(self) -> None:
        if self.modulus.p <= self.n:
            raise ValueError("modulus must exceed the user count")
        if len(self.coeffs) != self.modulus.p:
            raise ValueError("coefficient list must have length p")

    @property
    def p(self) -> int:
        return self.modulus.p

    @property
    def degree(self) -> int:
        nz = [k for k, c in enumerate(self.coeffs) if c]
        return max(nz) if nz else 0

    def terms(self) -> dict[int, int]:
        return {k: c for k, c in enumerate(self.coeffs) if c}

    def evaluate_residue(self, x: int) -> int:
        """Horner evaluation at ``x`` (any integer), returning a residue."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return acc

    def evaluate_array(self, x: np.ndarray) -> np.ndarray:
        """Plaintext coordinate-wise evaluation; returns centered values."""
        xr = np.mod(np.asarray(x, dtype=np.int64), self.p)
        acc = np.zeros_like(xr)
        for c in reversed(self.coeffs):
            acc = (acc * xr + c) % self.p
        return decode_centered(acc, self.p)

    def format(self) -> str:
        parts = []
        for k in sorted(self.terms(), reverse=True):
            c = self.coeffs[k]
            coef = "" if c == 1 and k > 0 else str(c)
            if k == 0:
                parts.append(str(c))
            elif k == 1:
                parts.append(f"{coef}x")
            else:
                parts.append(f"{coef}x^{k}")
        return (" + ".join(parts) or "0") + f" (mod {self.p})"

    @cached_property
    def schedule(self) -> PowerSchedule:
        return power_schedule(self)


def _binomial_row_mod(row: int, p: int) -> list[int]:
    """Row ``row`` of Pascal's triangle reduced mod p."""
    current = [1]
    for _ in range(row):
        nxt = [1] * (len(current) + 1)
        for j in range(1, len(current)):
            nxt[j] = (current[j - 1] + current[j]) % p
        current = nxt
    return current


def construct_mv_polynomial(n: int, policy: TiePolicy = TiePolicy.RESOLVE_TO_MINUS) -> MvPolynomial:
    if n < 2:
        raise ValueError(f"need at least two users, got n={n}")
    p = smallest_prime_gt(n)
    modulus = PrimeModulus(p)
    binom = _binomial_row_mod(p - 1, p)
    coeffs = [0] * p
    for m in reachable_sums(n):
        s = policy.sign(m)
        if s == 0:
            continue
        # s * (1 - (x - m)^(p-1)), expanding (x - m)^(p-1) = sum_j C(p-1,j) x^j (-m)^(p-1-j)
        coeffs[0] += s
        neg_m = -m % p
        for j in range(p):
            coeffs[j] -= s * binom[j] * pow(neg_m, p - 1 - j, p)
    return MvPolynomial(n, modulus, policy, tuple(c % p for c in coeffs))


def _check_vote_sum(poly: MvPolynomial, x: int) -> None:
    if abs(x) > poly.n or (x - poly.n) % 2:
        raise ValueError(f"{x} is not a reachable vote sum for n={poly.n}")


def evaluate(poly: MvPolynomial, x: int) -> int:
    """Evaluate F at a reachable vote sum and decode to {-1, 0, +1}."""
    _check_vote_sum(poly, x)
    r = poly.evaluate_residue(x)
    return r - poly.p if r > (poly.p - 1) // 2 else r


def verify_polynomial(poly: MvPolynomial) -> bool:
    for m in reachable_sums(poly.n):
        r = poly.evaluate_residue(m)
        if r != poly.policy.sign(m) % poly.p:
            return False
    return True


# ---------------------------------------------------------------------------
# Power schedule
# ---------------------------------------------------------------------------


def split_exponent(k: int) -> tuple[int, int]:
    """Operands (k - v, v) for x^k, v the largest power of two <= k - 1."""
    if k < 2:
        raise ValueError("only exponents >= 2 need a multiplication")
    v = 1 << ((k - 1).bit_length() - 1)
    return k - v, v


@dataclass(frozen=True)
class Gate:
    index: int
    target: int
    left: int
    right: int
    layer: int


@dataclass(frozen=True)
class PowerSchedule:
    gates: tuple[Gate, ...]
    layers: tuple[tuple[Gate, ...], ...]
    formula_latency: int

    @property
    def mult_count(self) -> int:
        return len(self.gates)

    @property
    def R(self) -> int:
        # two masked elements uploaded per multiplication
        return 2 * self.mult_count

    @property
    def schedule_depth(self) -> int:
        return len(self.layers)

    def targets(self) -> list[int]:
        return [g.target for g in self.gates]


def formula_latency(p: int) -> int:
    """ceil(log2(p) - 1), computed exactly for integers p >= 2."""
    # ceil(log2 p) is bit_length(p - 1) for p >= 2.
    return (p - 1).bit_length() - 1


def power_schedule(poly: MvPolynomial) -> PowerSchedule:
    needed: set[int] = set()
    stack = [k for k in poly.terms() if k >= 2]
    while stack:
        k = stack.pop()
        if k < 2 or k in needed:
            continue
        needed.add(k)
        stack.extend(split_exponent(k))

    depth = {1: 0}
    gates = []
    for idx, k in enumerate(sorted(needed)):
        left, right = split_exponent(k)
        depth[k] = 1 + max(depth[left], depth[right])
        gates.append(Gate(idx, k, left, right, depth[k] - 1))

    n_layers = max((g.layer for g in gates), default=-1) + 1
    layers = tuple(tuple(g for g in gates if g.layer == i) for i in range(n_layers))
    return PowerSchedule(tuple(gates), layers, formula_latency(poly.p))


def replay_schedule(schedule: PowerSchedule, x: int, p: int) -> dict[int, int]:
    """Plaintext replay of the gates; returns {exponent: x^exponent mod p}."""
    powers = {1: x % p}
    for g in schedule.gates:
        if g.left not in powers or g.right not in powers:
            raise ValueError(f"gate {g.index} uses an operand not yet computed")
        powers[g.target] = powers[g.left] * powers[g.right] % p
    return powers
