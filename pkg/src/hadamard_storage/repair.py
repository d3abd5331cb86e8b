"""
Single-node repair with exact download accounting.

Systematic node i is rebuilt from N/2 projections taken at every surviving
node, (k+1)N/2 symbols in total:

1. parity a sends V_i^T p_a, parity b sends V_i^T p_b, and each surviving
   systematic node j sends d_j = V_i^T f_j;
2. V_i^T p_a - sum_j d_j leaves V_i^T f_i;
3. V_i^T p_b carries (X_j V_i)^T f_j for j != i. The columns of X_j V_i are the
   columns of V_i with tuples paired by t <-> t xor e_j, so that term is d_j
   reordered and needs no second download; subtracting leaves (X_i V_i)^T f_i;
4. the columns of [V_i | X_i V_i] are all N columns of H_N, so stacking the two
   residuals by column position gives H_N f_i, and f_i = N^{-1} H_N (H_N f_i).

Parity repair downloads X_1 times the other parity (N symbols) and patches each
f_j, j >= 2, at the N/2 positions where the two sign patterns disagree.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from . import lattice
from .code import (
    PARITY_A,
    PARITY_B,
    CodeParams,
    NodeContent,
    NodeId,
    RepairMatrixV,
    interference_matrix,
    make_code,
    repair_matrix,
)
from .exceptions import (
    IndexOutOfRangeError,
    InternalRankError,
    NodeUnavailableError,
)
from .gf3 import DTYPE, gf3, gf3_inv, mat_rank
from .hadamard import ExponentTuple, fwht, tuple_index


@dataclass(frozen=True, eq=False)
class Download:
    source: NodeId
    symbols: int
    payload: np.ndarray


@dataclass
class RepairTranscript:
    target: NodeId
    downloads: list[Download] = field(default_factory=list)

    def record(self, source: NodeId, payload: np.ndarray) -> np.ndarray:
        if source == self.target:
            raise ValueError(f"cannot download from the node being repaired ({source})")
        payload = np.asarray(payload, dtype=DTYPE)
        self.downloads.append(Download(source, int(payload.size), payload))
        return payload

    @property
    def total_symbols(self) -> int:
        return sum(d.symbols for d in self.downloads)

    def per_source(self) -> dict[NodeId, int]:
        out: dict[NodeId, int] = {}
        for d in self.downloads:
            out[d.source] = out.get(d.source, 0) + d.symbols
        return out

    def report_lines(self) -> list[str]:
        lines = [f"source={src} symbols={n}" for src, n in sorted(self.per_source().items())]
        lines.append(f"total={self.total_symbols}")
        return lines

    @classmethod
    def combine(cls, target: NodeId, transcripts: Iterable[RepairTranscript]) -> RepairTranscript:
        """Concatenate the downloads of several stripes, keeping source order."""
        merged = cls(target)
        for t in transcripts:
            merged.downloads.extend(t.downloads)
        return merged


def read_node(survivors: Mapping[NodeId, np.ndarray], node: NodeId, length: int) -> np.ndarray:
    try:
        data = survivors[node]
    except KeyError:
        raise NodeUnavailableError(f"node {node} is not available") from None
    if isinstance(data, NodeContent):
        data = data.data
    data = np.asarray(data)
    if data.shape != (length,):
        raise NodeUnavailableError(f"node {node} holds {data.shape} symbols, expected {length}")
    return data


@dataclass(frozen=True)
class InterferencePairing:
    """Involution t -> t xor e_j on the tuples of V_i, plus its index form."""

    i: int
    j: int
    mapping: dict[ExponentTuple, ExponentTuple]
    permutation: np.ndarray  # permutation[c] = column of V_i matching X_j V_i column c

    def __call__(self, t: ExponentTuple) -> ExponentTuple:
        return self.mapping[t]


def _flip(t: ExponentTuple, j: int) -> ExponentTuple:
    return t[:j - 1] + (1 - t[j - 1],) + t[j:]


def pairing(params: CodeParams, i: int, j: int) -> InterferencePairing:
    params.check_systematic(i)
    params.check_systematic(j)
    if i == j:
        raise IndexOutOfRangeError("pairing is defined only for j != i")
    return _pairing(params.k, i, j)


@functools.lru_cache(maxsize=None)
def _pairing(k: int, i: int, j: int) -> InterferencePairing:
    v = repair_matrix(make_code(k), i)
    pos = v.position()
    mapping = {t: _flip(t, j) for t in v.tuples}
    perm = np.array([pos[mapping[t]] for t in v.tuples], dtype=np.intp)
    return InterferencePairing(i, j, mapping, perm)


@functools.lru_cache(maxsize=None)
def _hadamard_positions(k: int, i: int) -> tuple[np.ndarray, np.ndarray]:
    """H_N column positions of V_i's tuples and of X_i V_i's tuples (t xor e_i)."""
    v = repair_matrix(make_code(k), i)
    own = np.array([tuple_index(t) for t in v.tuples], dtype=np.intp)
    shifted = np.array([tuple_index(_flip(t, i)) for t in v.tuples], dtype=np.intp)
    return own, shifted


def project(params: CodeParams, i: int, x: np.ndarray) -> np.ndarray:
    """V_i^T x, the N/2 symbols a node sends during repair of systematic node i."""
    own, _ = _hadamard_positions(params.k, i)
    return fwht(x)[own]


def repair_systematic(
    params: CodeParams, i: int, survivors: Mapping[NodeId, np.ndarray]
) -> tuple[NodeContent, RepairTranscript]:
    params.check_systematic(i)
    target = NodeId.systematic(i)
    n = params.N
    transcript = RepairTranscript(target)

    res_a = transcript.record(PARITY_A, project(params, i, read_node(survivors, PARITY_A, n))).astype(np.int64)
    res_b = transcript.record(PARITY_B, project(params, i, read_node(survivors, PARITY_B, n))).astype(np.int64)
    for j in range(1, params.k + 1):
        if j == i:
            continue
        node = NodeId.systematic(j)
        d = transcript.record(node, project(params, i, read_node(survivors, node, n))).astype(np.int64)
        res_a -= d
        res_b -= d[_pairing(params.k, i, j).permutation]

    own, shifted = _hadamard_positions(params.k, i)
    stacked = np.full(n, -1, dtype=np.int64)
    stacked[own] = res_a % 3
    stacked[shifted] = res_b % 3
    if (stacked < 0).any():
        raise InternalRankError(f"repair system for node {i} does not cover every Hadamard column")
    restored = (fwht(stacked).astype(np.int64) * gf3_inv(n % 3)) % 3
    return NodeContent(target, restored), transcript


def repair_parity(
    params: CodeParams, role: NodeId, survivors: Mapping[NodeId, np.ndarray]
) -> tuple[NodeContent, RepairTranscript]:
    if role not in (PARITY_A, PARITY_B):
        raise ValueError(f"{role} is not a parity node")
    n = params.N
    x1 = params.X(1)
    transcript = RepairTranscript(role)
    other = PARITY_B if role == PARITY_A else PARITY_A
    acc = transcript.record(other, x1.apply(read_node(survivors, other, n))).astype(np.int64)

    for j in range(2, params.k + 1):
        node = NodeId.systematic(j)
        xj = params.X(j)
        positions = np.flatnonzero(x1.negmask ^ xj.negmask)
        f_j = read_node(survivors, node, n)
        patch = transcript.record(node, f_j[positions]).astype(np.int64)
        if role == PARITY_A:
            # have -f_j at these positions, need +f_j
            acc[positions] += 2 * patch
        else:
            # have X_1 f_j = -X_j f_j here, need X_j f_j
            acc[positions] += 2 * xj.signs()[positions] * patch
    return NodeContent(role, gf3(acc)), transcript


def repair(
    params: CodeParams, node: NodeId, survivors: Mapping[NodeId, np.ndarray]
) -> tuple[NodeContent, RepairTranscript]:
    if node.is_systematic:
        return repair_systematic(params, node.index, survivors)
    return repair_parity(params, node, survivors)


def interference_rank_report(params: CodeParams, i: int) -> list[tuple[int, int]]:
    """(j, rank([V_i | X_j V_i])) for every j, checked against the lattice prediction."""
    params.check_systematic(i)
    v = repair_matrix(params, i)
    rows = []
    for j in range(1, params.k + 1):
        r = mat_rank(interference_matrix(params, v, j))
        predicted = lattice.predict_rank(i, j, params.k)
        if r != predicted:
            raise InternalRankError(f"rank {r} for (i={i}, j={j}) disagrees with lattice prediction {predicted}")
        rows.append((j, r))
    return rows


def final_system_matrix(params: CodeParams, v: RepairMatrixV) -> np.ndarray:
    """[V_i | X_i V_i]^T, the matrix multiplying f_i once interference is removed."""
    return interference_matrix(params, v, v.for_node).T.copy()
