"""Prime-field arithmetic and the centered signed encoding.

Votes in {-1, +1} and vote sums in {-n, ..., n} are embedded into F_p by
reduction mod p; decoding reads the centered representative in
[-(p-1)/2, (p-1)/2].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Deterministic Miller-Rabin witness set, sufficient for every n < 2^64.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

MAX_SUPPORTED_N = 1 << 32

# Share vectors are int64 arrays; products of two residues must fit.
MAX_VECTOR_MODULUS = 1 << 31


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeModulus:
    """An odd prime p >= 3."""

    p: int

    def __post_init__(self) -> None:
        if self.p < 3:
            raise ValueError(f"modulus must be >= 3, got {self.p}")
        if not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")

    def __int__(self) -> int:
        return self.p

    @property
    def half(self) -> int:
        return (self.p - 1) // 2

    def element(self, value: int) -> FieldElement:
        return FieldElement(value % self.p, self)


def smallest_prime_gt(n: int) -> int:
    """Least prime strictly greater than ``n``.

    Returns a plain int; wrap in :class:`PrimeModulus` to enforce p >= 3
    (so ``smallest_prime_gt(1) == 2`` is returned but not a valid modulus).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n >= MAX_SUPPORTED_N:
        raise ValueError(f"n={n} is outside the supported range (< 2^32)")
    q = n + 1
    while not is_prime(q):
        q += 1
    return q


def field_pow(base: int, exponent: int, p: int) -> int:
    """Square-and-multiply exponentiation mod p, with 0^0 = 1."""
    if exponent < 0:
        raise ValueError("exponent must be non-negative")
    result = 1
    base %= p
    while exponent:
        if exponent & 1:
            result = result * base % p
        base = base * base % p
        exponent >>= 1
    return result % p


@dataclass(frozen=True)
class FieldElement:
    value: int
    modulus: PrimeModulus

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.modulus.p:
            raise ValueError(f"{self.value} not in [0, {self.modulus.p})")

    def _coerce(self, other: FieldElement | int) -> int:
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise ValueError("field elements have different moduli")
            return other.value
        return other

    def __add__(self, other: FieldElement | int) -> FieldElement:
        return self.modulus.element(self.value + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other: FieldElement | int) -> FieldElement:
        return self.modulus.element(self.value - self._coerce(other))

    def __rsub__(self, other: int) -> FieldElement:
        return self.modulus.element(other - self.value)

    def __mul__(self, other: FieldElement | int) -> FieldElement:
        return self.modulus.element(self.value * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self) -> FieldElement:
        return self.modulus.element(-self.value)

    def __pow__(self, exponent: int) -> FieldElement:
        return FieldElement(field_pow(self.value, exponent, self.modulus.p), self.modulus)

    def __int__(self) -> int:
        return self.value


def to_centered(e: FieldElement) -> int:
    """Centered representative of ``e`` in [-(p-1)/2, (p-1)/2]."""
    v = e.value
    return v - e.modulus.p if v > e.modulus.half else v


def from_signed(s: int, modulus: PrimeModulus) -> FieldElement:
    if abs(s) > modulus.half:
        raise ValueError(f"|{s}| exceeds (p-1)/2 = {modulus.half}")
    return modulus.element(s)


# ---------------------------------------------------------------------------
# Vectorised helpers (int64 arrays of residues)
# ---------------------------------------------------------------------------


def check_vector_modulus(p: int) -> None:
    if p >= MAX_VECTOR_MODULUS:
        raise ValueError(f"modulus {p} too large for int64 share vectors")


def encode(values: np.ndarray, p: int) -> np.ndarray:
    """Map signed integers to residues in [0, p)."""
    return np.mod(np.asarray(values, dtype=np.int64), p)


def decode_centered(residues: np.ndarray, p: int) -> np.ndarray:
    r = np.mod(np.asarray(residues, dtype=np.int64), p)
    return np.where(r > (p - 1) // 2, r - p, r)
