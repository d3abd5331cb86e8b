"""
The (k+2, k) storage code over GF(3).

A file of k*N symbols, N = 2^k, is cut into blocks f_1..f_k. Systematic node i
stores f_i, parity a stores sum_i f_i and parity b stores sum_i X_i f_i. Every
coding matrix is diagonal, so the transposes that appear in the usual
parity-array notation are dropped.
"""

from __future__ import annotations

import enum
import functools
import re
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import hadamard
from .exceptions import DimensionMismatchError, IndexOutOfRangeError, UnsupportedKError
from .gf3 import DTYPE, gf3, mat_rank
from .hadamard import ExponentTuple, SignDiagonal

MAX_K = 16


class Role(enum.Enum):
    SYSTEMATIC = 0
    PARITY_A = 1
    PARITY_B = 2


@functools.total_ordering
@dataclass(frozen=True)
class NodeId:
    role: Role
    index: int | None = None

    def __post_init__(self):
        if (self.role is Role.SYSTEMATIC) != (self.index is not None):
            raise ValueError("index is required for systematic nodes and forbidden for parities")
        if self.index is not None and self.index < 1:
            raise IndexOutOfRangeError(f"systematic index {self.index} must be >= 1")

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    @property
    def sort_key(self) -> tuple[int, int]:
        return (self.role.value, self.index or 0)

    @classmethod
    def systematic(cls, i: int) -> NodeId:
        return cls(Role.SYSTEMATIC, i)

    @classmethod
    def parity_a(cls) -> NodeId:
        return cls(Role.PARITY_A)

    @classmethod
    def parity_b(cls) -> NodeId:
        return cls(Role.PARITY_B)

    @classmethod
    def parse(cls, spec: str) -> NodeId:
        """Parse ``s<i>``, ``pa`` or ``pb`` (case-insensitive)."""
        s = spec.strip().lower()
        if s == "pa":
            return cls.parity_a()
        if s == "pb":
            return cls.parity_b()
        m = re.fullmatch(r"s(\d+)", s)
        if not m:
            raise ValueError(f"bad node spec {spec!r}; expected s<i>, pa or pb")
        return cls.systematic(int(m.group(1)))

    @property
    def is_systematic(self) -> bool:
        return self.role is Role.SYSTEMATIC

    @property
    def is_parity(self) -> bool:
        return self.role is not Role.SYSTEMATIC

    def __str__(self) -> str:
        if self.role is Role.SYSTEMATIC:
            return f"s{self.index}"
        return "pa" if self.role is Role.PARITY_A else "pb"


PARITY_A = NodeId.parity_a()
PARITY_B = NodeId.parity_b()


@dataclass(frozen=True)
class CodeParams:
    k: int
    generators: tuple[SignDiagonal, ...]

    @property
    def N(self) -> int:
        return 2**self.k

    @property
    def M(self) -> int:
        return self.k * self.N

    def X(self, i: int) -> SignDiagonal:
        self.check_systematic(i)
        return self.generators[i - 1]

    def check_systematic(self, i: int) -> None:
        if not 1 <= i <= self.k:
            raise IndexOutOfRangeError(f"systematic index {i} outside [1, {self.k}]")

    def nodes(self) -> list[NodeId]:
        return [NodeId.systematic(i) for i in range(1, self.k + 1)] + [PARITY_A, PARITY_B]

    def check_node(self, node: NodeId) -> None:
        if node.is_systematic:
            self.check_systematic(node.index)


def make_code(k: int) -> CodeParams:
    if not isinstance(k, (int, np.integer)) or not 1 <= k <= MAX_K:
        raise UnsupportedKError(f"unsupported k={k}; expected 1 <= k <= {MAX_K}")
    k = int(k)
    return CodeParams(k, hadamard.generators(k))


@dataclass(frozen=True, eq=False)
class NodeContent:
    node: NodeId
    data: np.ndarray

    def __post_init__(self):
        data = gf3(self.data)
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    def __eq__(self, other):
        if not isinstance(other, NodeContent):
            return NotImplemented
        return self.node == other.node and np.array_equal(self.data, other.data)


def split_blocks(params: CodeParams, file: np.ndarray) -> list[np.ndarray]:
    file = np.asarray(file)
    if file.shape != (params.M,):
        raise DimensionMismatchError(f"file has length {file.shape}, expected {params.M}")
    return [file[(i - 1) * params.N:i * params.N] for i in range(1, params.k + 1)]


def parity_a_of(params: CodeParams, blocks: Sequence[np.ndarray]) -> np.ndarray:
    return gf3(np.sum(np.asarray(blocks, dtype=np.int64), axis=0))


def parity_b_of(params: CodeParams, blocks: Sequence[np.ndarray]) -> np.ndarray:
    acc = np.zeros(params.N, dtype=np.int64)
    for x, f in zip(params.generators, blocks):
        acc += x.apply(f)
    return gf3(acc)


def encode(params: CodeParams, file: np.ndarray) -> list[NodeContent]:
    """Nodes s_1..s_k, then parity a, then parity b."""
    blocks = [gf3(b) for b in split_blocks(params, file)]
    out = [NodeContent(NodeId.systematic(i), b) for i, b in enumerate(blocks, start=1)]
    out.append(NodeContent(PARITY_A, parity_a_of(params, blocks)))
    out.append(NodeContent(PARITY_B, parity_b_of(params, blocks)))
    return out


def as_survivors(contents) -> dict[NodeId, np.ndarray]:
    """Normalize a list of NodeContent (or a mapping) to ``{NodeId: data}``."""
    if isinstance(contents, Mapping):
        return {n: (c.data if isinstance(c, NodeContent) else np.asarray(c)) for n, c in contents.items()}
    return {c.node: c.data for c in contents}


@dataclass(frozen=True)
class RepairMatrixV:
    """Columns of V_i named by exponent tuple: every tuple with x_i = 0."""

    for_node: int
    tuples: tuple[ExponentTuple, ...]

    @property
    def width(self) -> int:
        return len(self.tuples)

    def dense(self) -> np.ndarray:
        """N x N/2 GF(3) matrix whose columns are the Hadamard columns of ``tuples``."""
        return np.column_stack([hadamard.hadamard_column(t) for t in self.tuples]).astype(DTYPE)

    def position(self) -> dict[ExponentTuple, int]:
        return {t: c for c, t in enumerate(self.tuples)}


def repair_matrix(params: CodeParams, i: int) -> RepairMatrixV:
    params.check_systematic(i)
    tuples = tuple(t for t in hadamard.exponent_tuples(params.k) if t[i - 1] == 0)
    return RepairMatrixV(i, tuples)


def interference_matrix(params: CodeParams, v: RepairMatrixV, j: int) -> np.ndarray:
    """[V_i | X_j V_i] as a dense GF(3) matrix."""
    dense = v.dense()
    scaled = params.X(j).diagonal().astype(np.int64)[:, None] * dense
    return np.hstack([dense, scaled % 3]).astype(DTYPE)


def gamma(params: CodeParams, i: int, v: RepairMatrixV | None = None) -> int:
    """N + sum_{j != i} rank([A_j V_i  B_j V_i]) with A_j = I and B_j = X_j."""
    params.check_systematic(i)
    v = v or repair_matrix(params, i)
    if v.for_node != i:
        raise ValueError(f"repair matrix is for node {v.for_node}, not {i}")
    return params.N + sum(
        mat_rank(interference_matrix(params, v, j)) for j in range(1, params.k + 1) if j != i
    )
