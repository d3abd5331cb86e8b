"""Independent reference computations. Nothing here imports the code under test's algorithms."""

import itertools

import numpy as np
from scipy.linalg import hadamard as scipy_hadamard


def rank_by_enumeration(m):
    """log_3 of the size of the row space, found by enumerating every combination of rows."""
    m = np.asarray(m, dtype=np.int64) % 3
    span = {tuple((np.asarray(c) @ m) % 3) for c in itertools.product(range(3), repeat=m.shape[0])}
    r = 0
    while 3**r < len(span):
        r += 1
    assert 3**r == len(span)
    return r


def generator_kron(i, k):
    """X_i as a dense +-1 matrix built literally as I_{2^(i-1)} (x) blkdiag(I, -I)."""
    n = 2**k
    half = n // 2**i
    block = np.diag([1] * half + [-1] * half)
    return np.kron(np.eye(2 ** (i - 1), dtype=np.int64), block).astype(np.int64)


def hadamard_int(n):
    return scipy_hadamard(n).astype(np.int64)


def encode_dense(k, f):
    """Parity contents by explicit matrix products."""
    n = 2**k
    blocks = [np.asarray(f[j * n:(j + 1) * n], dtype=np.int64) for j in range(k)]
    pa = sum(blocks) % 3
    pb = sum(generator_kron(j + 1, k) @ blocks[j] for j in range(k)) % 3
    return blocks, pa, pb


def solve_block_by_elimination(equations, values, n_unknowns, block):
    """
    Recover the unknowns in ``block`` (a slice) from a possibly underdetermined
    linear system over GF(3), by plain Gauss-Jordan elimination with the
    other unknowns ordered first so they are eliminated away.
    """
    e = np.asarray(equations, dtype=np.int64) % 3
    y = np.asarray(values, dtype=np.int64) % 3
    wanted = list(range(n_unknowns))[block]
    others = [c for c in range(n_unknowns) if c not in wanted]
    order = others + wanted
    a = np.column_stack([e[:, order], y])
    rows = a.shape[0]
    r = 0
    pivot_cols = []
    for c in range(len(order)):
        p = next((q for q in range(r, rows) if a[q, c]), None)
        if p is None:
            continue
        a[[r, p]] = a[[p, r]]
        a[r] = (a[r] * (1 if a[r, c] == 1 else 2)) % 3
        for q in range(rows):
            if q != r and a[q, c]:
                a[q] = (a[q] - a[q, c] * a[r]) % 3
        pivot_cols.append(c)
        r += 1
    out = np.zeros(len(wanted), dtype=np.int64)
    for row, c in enumerate(pivot_cols):
        if c >= len(others):
            assert not a[row, len(others):-1][np.arange(len(wanted)) != c - len(others)].any()
            out[c - len(others)] = a[row, -1]
    assert sum(c >= len(others) for c in pivot_cols) == len(wanted), "block not determined"
    return out


def repair_columns(i, k):
    """Hadamard columns whose exponent tuple has x_i = 0 (x_k is the low bit of the index)."""
    n = 2**k
    return [c for c in range(n) if not (c >> (k - i)) & 1]


def brute_force_repair(k, i, downloads):
    """
    Decode f_i from (source, payload) pairs, each payload being V_i^T times the
    source's content, by eliminating over all kN unknowns.
    """
    n = 2**k
    v = hadamard_int(n)[:, repair_columns(i, k)]
    equations, values = [], []
    for source, payload in downloads:
        coeff = np.zeros((v.shape[1], k * n), dtype=np.int64)
        for j in range(1, k + 1):
            cols = slice((j - 1) * n, j * n)
            if source == "pa" or source == f"s{j}":
                coeff[:, cols] = v.T
            elif source == "pb":
                coeff[:, cols] = v.T @ generator_kron(j, k)
        equations.append(coeff)
        values.append(np.asarray(payload))
    return solve_block_by_elimination(np.vstack(equations), np.concatenate(values), k * n, slice((i - 1) * n, i * n))
