"""
Sign diagonals, the generators X_1..X_k, and Sylvester Hadamard matrices.

A sign diagonal of order N is a diagonal matrix with +-1 entries, stored as a
boolean mask that is True where the entry is -1. Applying one to a GF(3) vector
negates the masked positions, and the product of two sign diagonals is the XOR
of their masks.

Generator X_i of order N = 2^k is I_{2^(i-1)} (x) blkdiag(I_{N/2^i}, -I_{N/2^i}):
its mask is 2^(i-1) repetitions of N/2^i False followed by N/2^i True. An
exponent tuple x in {0,1}^k names the vector prod_i X_i^{x_i} w, with w the
all-ones vector. These N vectors are exactly the columns of H_N, and column
position c of H_N carries the tuple whose bits spell c with x_k least
significant, i.e. ``itertools.product((0, 1), repeat=k)`` order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .exceptions import DimensionMismatchError, IndexOutOfRangeError
from .gf3 import DTYPE, gf3

ExponentTuple = tuple[int, ...]

# +1 -> 1, -1 -> 2
_SIGN_TO_GF3 = np.array([1, 2], dtype=DTYPE)


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


@dataclass(frozen=True, eq=False)
class SignDiagonal:
    negmask: np.ndarray

    def __post_init__(self):
        mask = np.array(self.negmask, dtype=bool)
        if mask.ndim != 1 or not _is_power_of_two(mask.size):
            raise ValueError(f"sign diagonal order must be a power of two, got {mask.shape}")
        mask.setflags(write=False)
        object.__setattr__(self, "negmask", mask)

    @classmethod
    def identity(cls, order: int) -> SignDiagonal:
        return cls(np.zeros(order, dtype=bool))

    @property
    def order(self) -> int:
        return self.negmask.size

    def signs(self) -> np.ndarray:
        """Diagonal as integers +-1."""
        return np.where(self.negmask, -1, 1).astype(np.int64)

    def diagonal(self) -> np.ndarray:
        """Diagonal as GF(3) symbols (1 or 2)."""
        return _SIGN_TO_GF3[self.negmask.astype(np.intp)]

    def dense(self) -> np.ndarray:
        return np.diag(self.diagonal())

    def apply(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        if x.shape[0] != self.order:
            raise DimensionMismatchError(f"sign diagonal of order {self.order} applied to length {x.shape[0]}")
        out = np.array(x, dtype=DTYPE)
        out[self.negmask] = (3 - out[self.negmask]) % 3
        return out

    def __matmul__(self, other):
        if isinstance(other, SignDiagonal):
            if other.order != self.order:
                raise DimensionMismatchError("sign diagonals of different order")
            return SignDiagonal(self.negmask ^ other.negmask)
        return self.apply(other)

    def __eq__(self, other):
        if not isinstance(other, SignDiagonal):
            return NotImplemented
        return np.array_equal(self.negmask, other.negmask)

    def __hash__(self):
        return hash(self.negmask.tobytes())

    def __repr__(self):
        return "SignDiagonal(" + "".join("-" if b else "+" for b in self.negmask) + ")"


def generator(i: int, k: int) -> SignDiagonal:
    """X_i for the code with k systematic nodes (order N = 2^k)."""
    if k < 1 or not 1 <= i <= k:
        raise IndexOutOfRangeError(f"generator index {i} outside [1, {k}]")
    half = 2 ** (k - i)
    block = np.concatenate([np.zeros(half, dtype=bool), np.ones(half, dtype=bool)])
    return SignDiagonal(np.tile(block, 2 ** (i - 1)))


def generators(k: int) -> tuple[SignDiagonal, ...]:
    return tuple(generator(i, k) for i in range(1, k + 1))


def exponent_tuples(k: int) -> Iterator[ExponentTuple]:
    """All of {0,1}^k in canonical (H_N column) order."""
    return itertools.product((0, 1), repeat=k)


def tuple_index(x: Sequence[int]) -> int:
    """Column position of tuple ``x`` in H_N (x_k is the least significant bit)."""
    c = 0
    for bit in x:
        c = (c << 1) | bit
    return c


def column_diagonal(x: Sequence[int]) -> SignDiagonal:
    """prod_i X_i^{x_i} as a single sign diagonal."""
    k = len(x)
    d = SignDiagonal.identity(2**k)
    for i, bit in enumerate(x, start=1):
        if bit not in (0, 1):
            raise ValueError(f"exponent tuple entries must be 0 or 1, got {tuple(x)}")
        if bit:
            d = d @ generator(i, k)
    return d


def hadamard_column(x: Sequence[int]) -> np.ndarray:
    """prod_i X_i^{x_i} w as a GF(3) vector with entries in {1, 2}."""
    d = column_diagonal(x)
    return d.apply(np.ones(d.order, dtype=DTYPE))


@dataclass(frozen=True, eq=False)
class HadamardMatrix:
    """Sylvester Hadamard matrix; ``entries`` holds the +-1 integers."""

    entries: np.ndarray

    @property
    def order(self) -> int:
        return self.entries.shape[0]

    def to_gf3(self) -> np.ndarray:
        return gf3(self.entries)

    def column(self, c: int) -> np.ndarray:
        return gf3(self.entries[:, c])

    def columns(self) -> list[np.ndarray]:
        g = self.to_gf3()
        return [g[:, c].copy() for c in range(self.order)]


def sylvester(k: int) -> HadamardMatrix:
    """H_{2^k} from H_1 = [1] and H_{2n} = [[H_n, H_n], [H_n, -H_n]]."""
    if k < 0:
        raise ValueError("k must be non-negative")
    h = np.ones((1, 1), dtype=np.int64)
    for _ in range(k):
        h = np.block([[h, h], [h, -h]])
    return HadamardMatrix(h)


def column_distance(c1: np.ndarray, c2: np.ndarray) -> int:
    c1 = np.asarray(c1)
    c2 = np.asarray(c2)
    if c1.shape != c2.shape:
        raise DimensionMismatchError(f"columns of shape {c1.shape} and {c2.shape}")
    return int(np.count_nonzero(c1 != c2))


def verify_gram(h: HadamardMatrix) -> bool:
    """True iff H^T H = N I over the integers and, reduced, (N mod 3) I over GF(3)."""
    e = np.asarray(h.entries, dtype=np.int64)
    n = e.shape[0]
    if e.shape != (n, n) or not np.isin(e, (-1, 1)).all():
        return False
    if not np.array_equal(e.T @ e, n * np.eye(n, dtype=np.int64)):
        return False
    g = gf3(e).astype(np.int64)
    return bool(np.array_equal((g.T @ g) % 3, (n % 3) * np.eye(n, dtype=np.int64)))


def fwht(x: np.ndarray) -> np.ndarray:
    """H_N @ x over GF(3) by the fast Walsh-Hadamard butterfly (H_N is symmetric)."""
    a = np.array(x, dtype=np.int64)
    n = a.shape[0]
    if not _is_power_of_two(n):
        raise DimensionMismatchError(f"length {n} is not a power of two")
    h = 1
    while h < n:
        a = a.reshape(-1, 2, h)
        top, bottom = a[:, 0, :].copy(), a[:, 1, :]
        a[:, 0, :] = top + bottom
        a[:, 1, :] = top - bottom
        a = a.reshape(n) % 3
        h *= 2
    return a.astype(DTYPE)
