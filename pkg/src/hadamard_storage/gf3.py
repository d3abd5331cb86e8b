"""
Exact arithmetic and linear algebra over GF(3).

Symbols are the canonical integers {0, 1, 2}; -1 is stored as 2. Vectors and
matrices are plain numpy ``uint8`` arrays holding canonical symbols, so the
usual numpy slicing and stacking work on them directly. Products are formed in
``int64`` and reduced, which keeps every intermediate exact.
"""

from __future__ import annotations

import numpy as np

from .exceptions import DimensionMismatchError, SingularMatrixError

DTYPE = np.uint8

# multiplicative inverses; index 0 is a placeholder
_INV = np.array([0, 1, 2], dtype=np.int64)


def gf3(values) -> np.ndarray:
    """Return ``values`` as a canonical GF(3) array (any integers, including -1, accepted)."""
    return np.mod(np.asarray(values, dtype=np.int64), 3).astype(DTYPE)


def zeros(*shape: int) -> np.ndarray:
    return np.zeros(shape, dtype=DTYPE)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=DTYPE)


def _elementwise(op, *xs):
    if any(isinstance(x, np.ndarray) for x in xs):
        return np.mod(op(*(np.asarray(x, dtype=np.int64) for x in xs)), 3).astype(DTYPE)
    return int(op(*xs)) % 3


def gf3_add(a, b):
    return _elementwise(lambda x, y: x + y, a, b)


def gf3_sub(a, b):
    return _elementwise(lambda x, y: x - y, a, b)


def gf3_mul(a, b):
    return _elementwise(lambda x, y: x * y, a, b)


def gf3_neg(a):
    return _elementwise(lambda x: -x, a)


def gf3_inv(a: int) -> int:
    if a % 3 == 0:
        raise ZeroDivisionError("0 has no inverse in GF(3)")
    return int(_INV[a % 3])


def mat_vec(m: np.ndarray, x: np.ndarray) -> np.ndarray:
    m = np.asarray(m)
    x = np.asarray(x)
    if m.ndim != 2 or x.ndim != 1 or m.shape[1] != x.shape[0]:
        raise DimensionMismatchError(f"cannot multiply {m.shape} by vector of length {x.shape}")
    return ((m.astype(np.int64) @ x.astype(np.int64)) % 3).astype(DTYPE)


def mat_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionMismatchError(f"cannot multiply {a.shape} by {b.shape}")
    return ((a.astype(np.int64) @ b.astype(np.int64)) % 3).astype(DTYPE)


def rref(m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """
    Reduced row echelon form over GF(3).

    Pivots are chosen as the first nonzero entry of each column, scanning rows
    top to bottom, so the result is deterministic. Returns the reduced matrix
    and the list of pivot columns.
    """
    a = np.mod(np.array(m, dtype=np.int64, ndmin=2), 3)
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r] = (a[r] * _INV[a[r, c]]) % 3
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % 3
        pivots.append(c)
        r += 1
    return a.astype(DTYPE), pivots


def mat_rank(m: np.ndarray) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    return len(rref(m)[1])


def mat_solve(m: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Solve the square system ``m @ x = y`` over GF(3)."""
    m = np.asarray(m)
    y = np.asarray(y)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got {m.shape}")
    if y.ndim != 1 or y.shape[0] != m.shape[0]:
        raise DimensionMismatchError(f"right-hand side has length {y.shape}, expected {m.shape[0]}")
    n = m.shape[0]
    reduced, pivots = rref(np.column_stack([m, y]))
    if len(pivots) < n or pivots[n - 1] != n - 1:
        raise SingularMatrixError(f"matrix of order {n} is singular over GF(3)")
    return reduced[:, n].copy()


def left_inverse(m: np.ndarray) -> np.ndarray:
    """
    Return ``d`` with ``d @ m = I`` for a tall matrix of full column rank.

    Reduces ``[m | I]``; the rows that carry the pivots of ``m`` hold the
    transformation that maps ``m`` to the identity.
    """
    m = np.asarray(m)
    rows, cols = m.shape
    reduced, pivots = rref(np.column_stack([m, identity(rows)]))
    if pivots[:cols] != list(range(cols)):
        raise SingularMatrixError(f"{rows}x{cols} matrix does not have full column rank")
    return reduced[:cols, cols:].copy()


class RowSpace:
    """
    Incrementally grown row space over GF(3), kept in reduced echelon form.

    ``add`` reports whether a row raised the rank. Because the basis stays fully
    reduced, testing a candidate is a single matrix-vector product.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self._basis = np.zeros((0, ncols), dtype=np.int64)
        self._pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def reduce(self, row) -> np.ndarray:
        v = np.mod(np.asarray(row, dtype=np.int64), 3)
        if v.shape != (self.ncols,):
            raise DimensionMismatchError(f"row has shape {v.shape}, expected ({self.ncols},)")
        if self._pivots:
            v = (v - v[self._pivots] @ self._basis) % 3
        return v

    def contains(self, row) -> bool:
        return not self.reduce(row).any()

    def add(self, row) -> bool:
        v = self.reduce(row)
        nz = np.flatnonzero(v)
        if nz.size == 0:
            return False
        p = int(nz[0])
        v = (v * _INV[v[p]]) % 3
        if self._pivots:
            coef = self._basis[:, p].copy()
            self._basis = (self._basis - np.outer(coef, v)) % 3
        order = int(np.searchsorted(self._pivots, p))
        self._basis = np.insert(self._basis, order, v, axis=0)
        self._pivots.insert(order, p)
        return True
