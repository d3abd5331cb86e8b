"""
Dots-on-a-lattice view of symbol-extension repair spaces.

A vector prod_s X_s^{x_s} w is identified with the integer point (x_1, ..., x_k).
Multiplying by X_j shifts a point by one along axis j. When the diagonal
entries of the X_s are Delta-th roots of unity the shift wraps modulo Delta, and
a repair set that spans every exponent of axis j is left unchanged by the
shift. Without wrap-around the shifted set only overlaps the original, and the
overlap fraction (Delta + 1) / Delta tends to 1 as Delta grows.

Everything here is integer combinatorics; the link to actual vectors goes
through :mod:`hadamard_storage.hadamard`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exceptions import DimensionMismatchError, IndexOutOfRangeError

LatticePoint = tuple[int, ...]


def unit(s: int, k: int) -> LatticePoint:
    """Basis point e_s (1-based axis)."""
    return tuple(int(t == s - 1) for t in range(k))


def lattice_point(x: Sequence[int]) -> LatticePoint:
    """Image of prod_s X_s^{x_s} w: the exponent tuple itself, as a point."""
    if any(c < 0 for c in x):
        raise ValueError(f"exponents must be non-negative, got {tuple(x)}")
    return tuple(int(c) for c in x)


@dataclass(frozen=True)
class LatticeSet:
    points: frozenset[LatticePoint]
    k: int
    delta: int = 0  # 0: no wrap-around

    def __post_init__(self):
        for p in self.points:
            if len(p) != self.k:
                raise DimensionMismatchError(f"point {p} does not have dimension {self.k}")
            if any(c < 0 for c in p):
                raise ValueError(f"negative coordinate in {p}")
            if self.delta > 0 and any(c >= self.delta for c in p):
                raise ValueError(f"point {p} outside the box of side {self.delta}")

    @classmethod
    def of(cls, points: Iterable[Sequence[int]], k: int, delta: int = 0) -> LatticeSet:
        return cls(frozenset(tuple(p) for p in points), k, delta)

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, p) -> bool:
        return tuple(p) in self.points

    def sorted(self) -> list[LatticePoint]:
        return sorted(self.points)


def _check_axis(axis: int, k: int) -> None:
    if not 1 <= axis <= k:
        raise IndexOutOfRangeError(f"axis {axis} outside [1, {k}]")


def repair_lattice(i: int, k: int, delta: int) -> LatticeSet:
    """L(V_i): coordinate i pinned at 0, every other coordinate in {0, ..., delta-1}."""
    _check_axis(i, k)
    if delta < 2:
        raise ValueError("delta must be at least 2")
    ranges = [range(1) if s == i else range(delta) for s in range(1, k + 1)]
    return LatticeSet(frozenset(itertools.product(*ranges)), k, delta)


def shift(s: LatticeSet, axis: int, wrap: bool) -> LatticeSet:
    """
    Image of the set under multiplication by X_axis.

    With ``wrap`` the coordinate is taken modulo the set's delta and the result
    stays in the box; otherwise the result carries delta 0 since it may leave it.
    """
    _check_axis(axis, s.k)
    j = axis - 1
    modulus = s.delta if wrap and s.delta > 0 else 0
    out = set()
    for p in s.points:
        c = p[j] + 1
        if modulus:
            c %= modulus
        out.add(p[:j] + (c,) + p[j + 1:])
    return LatticeSet(frozenset(out), s.k, modulus)


def union_size(a: LatticeSet, b: LatticeSet) -> int:
    if a.k != b.k:
        raise DimensionMismatchError(f"lattice dimensions {a.k} and {b.k} differ")
    return len(a.points | b.points)


def alignment_ratio(k: int, delta: int, i: int = 1, j: int | None = None) -> Fraction:
    """
    |L(V_i) u L(X_j V_i)| / delta^(k-1) for the unwrapped shift, by enumeration.

    The closed form is (delta + 1) / delta for any j != i; see
    :func:`alignment_ratio_closed_form`.
    """
    if k < 2 or delta < 2:
        raise ValueError("alignment ratio needs k >= 2 and delta >= 2")
    if j is None:
        j = 2 if i == 1 else 1
    if i == j:
        raise ValueError("interference ratio is defined for j != i")
    v = repair_lattice(i, k, delta)
    return Fraction(union_size(v, shift(v, j, wrap=False)), delta ** (k - 1))


def alignment_ratio_closed_form(delta: int) -> Fraction:
    return Fraction(delta + 1, delta)


def predict_rank(i: int, j: int, k: int) -> int:
    """
    Rank of [V_i | X_j V_i] predicted by counting lattice points (Delta = 2, wrap).

    Gives 2^k when i == j (the shift moves the slab x_i = 0 onto x_i = 1) and
    2^(k-1) otherwise (the shift permutes the slab onto itself).
    """
    _check_axis(i, k)
    _check_axis(j, k)
    v = repair_lattice(i, k, 2)
    return union_size(v, shift(v, j, wrap=True))


def analyze(k: int, delta: int) -> list[tuple[int, int, int, int, int, Fraction]]:
    """Rows (k, delta, i, j, union_size, ratio) over all ordered pairs i != j, unwrapped."""
    rows = []
    for i in range(1, k + 1):
        v = repair_lattice(i, k, delta)
        for j in range(1, k + 1):
            if j == i:
                continue
            size = union_size(v, shift(v, j, wrap=False))
            rows.append((k, delta, i, j, size, Fraction(size, delta ** (k - 1))))
    return rows
