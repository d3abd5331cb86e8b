"""
Decodability of node subsets, failure tolerance, and whole-file reconstruction.

The code is not MDS. Any k nodes with at least k-1 systematic ones decode the
file, but k-2 systematic nodes plus both parities leave a rank deficiency of
N/2: the pair [[I, I], [X_{k-1}, X_k]] has rank 3N/2 because X_k - X_{k-1} is
zero on half the diagonal. The data collector then needs N/2 more symbols,
k + 1/2 blocks in total.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import AbstractSet, Iterable, Mapping, Sequence

import numpy as np

from .code import (
    PARITY_A,
    PARITY_B,
    CodeParams,
    NodeContent,
    NodeId,
    make_code,
    parity_a_of,
    parity_b_of,
)
from .exceptions import InsufficientAccessError, IntolerableError
from .gf3 import DTYPE, RowSpace, gf3, left_inverse, mat_rank
from .repair import RepairTranscript, read_node, repair

AccessSet = frozenset  # of NodeId


@dataclass(frozen=True)
class DecodabilityReport:
    system_rank: int
    deficiency: int

    @property
    def decodable(self) -> bool:
        return self.deficiency == 0

    def __str__(self) -> str:
        return f"rank={self.system_rank} deficiency={self.deficiency} decodable={str(self.decodable).lower()}"


def node_equations(params: CodeParams, node: NodeId) -> np.ndarray:
    """The N x kN block of coefficients expressing a node's content in terms of the file."""
    params.check_node(node)
    n, k = params.N, params.k
    rows = np.zeros((n, k * n), dtype=DTYPE)
    for j in range(1, k + 1):
        cols = slice((j - 1) * n, j * n)
        if node.is_systematic:
            if node.index == j:
                rows[:, cols] = np.eye(n, dtype=DTYPE)
        elif node == PARITY_A:
            rows[:, cols] = np.eye(n, dtype=DTYPE)
        else:
            rows[:, cols] = params.X(j).dense()
    return rows


def access_matrix(params: CodeParams, access: Iterable[NodeId]) -> np.ndarray:
    nodes = sorted(set(access))
    if not nodes:
        return np.zeros((0, params.M), dtype=DTYPE)
    return np.vstack([node_equations(params, node) for node in nodes])


def decodability(params: CodeParams, access: Iterable[NodeId]) -> DecodabilityReport:
    rank = mat_rank(access_matrix(params, access))
    return DecodabilityReport(rank, params.M - rank)


def can_tolerate(params: CodeParams, failed: AbstractSet[NodeId]) -> bool:
    failed = set(failed)
    for node in failed:
        params.check_node(node)
    if len(failed) == 1:
        return True
    if len(failed) == 2:
        return sum(node.is_systematic for node in failed) <= 1
    return False


def _decode_systematic_from_parity(
    params: CodeParams, i: int, parity: NodeId, survivors: Mapping[NodeId, np.ndarray], transcript: RepairTranscript
) -> np.ndarray:
    """f_i from one parity and the other k-1 systematic blocks (kN symbols)."""
    n = params.N
    acc = transcript.record(parity, read_node(survivors, parity, n)).astype(np.int64)
    for j in range(1, params.k + 1):
        if j == i:
            continue
        node = NodeId.systematic(j)
        f_j = transcript.record(node, read_node(survivors, node, n))
        acc -= f_j if parity == PARITY_A else params.X(j).apply(f_j)
    acc = gf3(acc)
    return acc if parity == PARITY_A else params.X(i).apply(acc)


def recover_node(
    params: CodeParams, target: NodeId, failed: AbstractSet[NodeId], survivors: Mapping[NodeId, np.ndarray]
) -> tuple[NodeContent, RepairTranscript]:
    """
    Restore one node of a tolerated failure set, reading only live nodes.

    A lone failure uses the bandwidth-efficient repair. With a second node down
    the newcomer falls back to decoding through the surviving parity.
    """
    failed = set(failed) | {target}
    if not can_tolerate(params, failed):
        raise IntolerableError(f"intolerable failure set {sorted(map(str, failed))}")
    if len(failed) == 1:
        return repair(params, target, survivors)

    (other,) = failed - {target}
    transcript = RepairTranscript(target)
    n = params.N
    if target.is_systematic:
        live_parity = PARITY_B if other == PARITY_A else PARITY_A
        data = _decode_systematic_from_parity(params, target.index, live_parity, survivors, transcript)
        return NodeContent(target, data), transcript

    if other.is_parity:
        blocks = [
            transcript.record(NodeId.systematic(j), read_node(survivors, NodeId.systematic(j), n))
            for j in range(1, params.k + 1)
        ]
    else:
        # target is a parity and systematic node `other` is also down
        live_parity = PARITY_B if target == PARITY_A else PARITY_A
        lost = _decode_systematic_from_parity(params, other.index, live_parity, survivors, transcript)
        # the other systematic blocks were already downloaded by the decode step
        blocks = [
            lost if j == other.index else read_node(survivors, NodeId.systematic(j), n)
            for j in range(1, params.k + 1)
        ]
    encoder = parity_a_of if target == PARITY_A else parity_b_of
    return NodeContent(target, encoder(params, blocks)), transcript


def recover_failures(
    params: CodeParams, failed: AbstractSet[NodeId], survivors: Mapping[NodeId, np.ndarray]
) -> dict[NodeId, NodeContent]:
    """
    Restore every node in ``failed``.

    Lone failures are repaired directly. A systematic/parity pair is handled by
    decoding the systematic block through the surviving parity and then
    re-encoding the lost parity from the complete systematic set; two parities
    are simply re-encoded.
    """
    failed = set(failed)
    if not can_tolerate(params, failed):
        raise IntolerableError(f"intolerable failure set {sorted(map(str, failed))}")
    survivors = {node: data for node, data in survivors.items() if node not in failed}
    if len(failed) == 1:
        (node,) = failed
        content, _ = repair(params, node, survivors)
        return {node: content}

    restored: dict[NodeId, NodeContent] = {}
    for node in sorted(failed):
        if node.is_systematic:
            content, _ = recover_node(params, node, failed, survivors)
            restored[node] = content
    blocks = [
        restored[NodeId.systematic(j)].data if NodeId.systematic(j) in restored
        else read_node(survivors, NodeId.systematic(j), params.N)
        for j in range(1, params.k + 1)
    ]
    if PARITY_A in failed:
        restored[PARITY_A] = NodeContent(PARITY_A, parity_a_of(params, blocks))
    if PARITY_B in failed:
        restored[PARITY_B] = NodeContent(PARITY_B, parity_b_of(params, blocks))
    return restored


@dataclass(frozen=True, eq=False)
class ReconstructionPlan:
    """
    Which symbols the data collector downloads and how to combine them.

    Every node in ``access`` is downloaded whole; ``extra`` lists the single
    symbols, as (node, position), taken on top. ``decoder`` maps the downloaded
    symbols, blocks first and extras after, to the kN file symbols.
    """

    access: tuple[NodeId, ...]
    extra: tuple[tuple[NodeId, int], ...]
    decoder: np.ndarray

    @property
    def extra_symbols(self) -> int:
        return len(self.extra)

    def total_symbols(self, n: int) -> int:
        return len(self.access) * n + len(self.extra)


def plan_reconstruction(
    params: CodeParams, access: Iterable[NodeId], extra_source_order: Sequence[NodeId] = ()
) -> ReconstructionPlan:
    return _plan(params.k, frozenset(access), tuple(extra_source_order))


@functools.lru_cache(maxsize=256)
def _plan(k: int, access: frozenset, extra_sources: tuple) -> ReconstructionPlan:
    params = make_code(k)
    nodes = tuple(sorted(access))
    for node in nodes + extra_sources:
        params.check_node(node)
    rows = [node_equations(params, node) for node in nodes]
    space = RowSpace(params.M)
    for block in rows:
        for row in block:
            space.add(row)

    extra: list[tuple[NodeId, int]] = []
    extra_rows = []
    for source in extra_sources:
        if space.rank == params.M:
            break
        if source in access:
            continue
        eq = node_equations(params, source)
        for pos in range(params.N):
            if space.rank == params.M:
                break
            if space.add(eq[pos]):
                extra.append((source, pos))
                extra_rows.append(eq[pos])
    if space.rank < params.M:
        raise InsufficientAccessError(
            f"rank {space.rank} < {params.M}: access {[str(n) for n in nodes]} "
            f"with extras {[str(n) for n in extra_sources]} cannot decode the file"
        )
    system = np.vstack(rows + ([np.array(extra_rows, dtype=DTYPE)] if extra_rows else []))
    decoder = left_inverse(system)
    return ReconstructionPlan(nodes, tuple(extra), decoder)


def gather(plan: ReconstructionPlan, contents: Mapping[NodeId, np.ndarray], n: int) -> np.ndarray:
    """The downloaded symbol vector for ``plan`` read from ``contents``."""
    parts = [read_node(contents, node, n) for node in plan.access]
    parts.append(np.array([read_node(contents, node, n)[pos] for node, pos in plan.extra], dtype=DTYPE))
    return np.concatenate(parts).astype(DTYPE)


def reconstruct_file(
    params: CodeParams,
    access: Iterable[NodeId],
    extra_source_order: Sequence[NodeId],
    contents: Mapping[NodeId, np.ndarray],
) -> tuple[np.ndarray, int]:
    """
    Decode the whole file from the accessed blocks plus greedily chosen extra symbols.

    Extra symbols are taken one at a time from the extra sources in the order
    given, lowest position first, and kept only if they raise the rank. Returns
    the file and the number of symbols downloaded.
    """
    plan = plan_reconstruction(params, access, extra_source_order)
    y = gather(plan, contents, params.N)
    file = (plan.decoder.astype(np.int64) @ y.astype(np.int64)) % 3
    return file.astype(DTYPE), plan.total_symbols(params.N)
