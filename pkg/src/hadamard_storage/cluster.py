"""
A single-host storage cluster kept in one directory.

Each of the k+2 nodes is a chunk file holding its symbols for every stripe,
one symbol per byte, wrapped in a fixed binary header::

    "HDSC" | version u8 | k u8 | role u8 | index u16 | payload length u64 | payload | checksum u32

All integers are big-endian; role is 0 systematic, 1 parity a, 2 parity b;
index is 0 for parities; the checksum is the byte sum of the payload mod 2^32.

``manifest.txt`` holds ``key=value`` lines: k, byte_length, stripes, traffic,
then one ``chunk=<role>:<index>:<filename>:<status>`` line per node. A failed
node's chunk file is renamed with a ``.lost`` suffix.

Input bytes become 6 base-3 digits each, most significant first, and the
stream is zero-padded to whole stripes of kN symbols.
"""

from __future__ import annotations

import logging
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np

from .code import CodeParams, NodeId, Role, encode, make_code
from .exceptions import (
    AlreadyFailedError,
    ChunkFormatError,
    HadamardStorageError,
    IntolerableError,
    UnknownNodeError,
)
from .gf3 import DTYPE
from .reconstruct import can_tolerate, gather, plan_reconstruction, recover_node
from .repair import RepairTranscript

log = logging.getLogger(__name__)

MAGIC = b"HDSC"
VERSION = 1
TRITS_PER_BYTE = 6
MANIFEST = "manifest.txt"

_HEADER = struct.Struct(">4sBBBHQ")
_CHECKSUM = struct.Struct(">I")
_ROLE_NAMES = {Role.SYSTEMATIC: "systematic", Role.PARITY_A: "parityA", Role.PARITY_B: "parityB"}
_ROLE_BY_NAME = {v: k for k, v in _ROLE_NAMES.items()}


class NotFailedError(HadamardStorageError):
    """Repair requested for a node that is still live."""


# -- byte <-> trit bridge ---------------------------------------------------

_POWERS = 3 ** np.arange(TRITS_PER_BYTE - 1, -1, -1, dtype=np.int64)


def bytes_to_trits(data: bytes) -> np.ndarray:
    values = np.frombuffer(data, dtype=np.uint8).astype(np.int64)
    return ((values[:, None] // _POWERS) % 3).astype(DTYPE).reshape(-1)


def trits_to_bytes(trits: np.ndarray) -> bytes:
    t = np.asarray(trits, dtype=np.int64)
    if t.size % TRITS_PER_BYTE:
        raise ValueError(f"trit count {t.size} is not a multiple of {TRITS_PER_BYTE}")
    values = t.reshape(-1, TRITS_PER_BYTE) @ _POWERS
    if (values > 255).any():
        raise ChunkFormatError("trit group does not encode a byte")
    return values.astype(np.uint8).tobytes()


# -- chunk files ------------------------------------------------------------

def _checksum(body: bytes) -> int:
    return int(np.frombuffer(body, dtype=np.uint8).sum(dtype=np.uint64)) & 0xFFFFFFFF


@dataclass(frozen=True, eq=False)
class ChunkFile:
    k: int
    node: NodeId
    payload: np.ndarray

    def to_bytes(self) -> bytes:
        payload = np.asarray(self.payload, dtype=np.uint8)
        header = _HEADER.pack(MAGIC, VERSION, self.k, self.node.role.value, self.node.index or 0, payload.size)
        body = payload.tobytes()
        return header + body + _CHECKSUM.pack(_checksum(body))

    @classmethod
    def from_bytes(cls, raw: bytes) -> ChunkFile:
        if len(raw) < _HEADER.size + _CHECKSUM.size:
            raise ChunkFormatError("chunk shorter than its header")
        magic, version, k, role, index, length = _HEADER.unpack_from(raw)
        if magic != MAGIC:
            raise ChunkFormatError(f"bad magic {magic!r}")
        if version != VERSION:
            raise ChunkFormatError(f"unsupported chunk version {version}")
        end = _HEADER.size + length
        if len(raw) != end + _CHECKSUM.size:
            raise ChunkFormatError(f"payload length {length} disagrees with file size {len(raw)}")
        body = raw[_HEADER.size:end]
        (checksum,) = _CHECKSUM.unpack_from(raw, end)
        if checksum != _checksum(body):
            raise ChunkFormatError("checksum mismatch")
        payload = np.frombuffer(body, dtype=np.uint8).copy()
        if (payload > 2).any():
            raise ChunkFormatError("payload byte outside {0, 1, 2}")
        if length % (2**k):
            raise ChunkFormatError(f"payload length {length} is not a multiple of N={2**k}")
        try:
            node = NodeId(Role(role), index if role == Role.SYSTEMATIC.value else None)
        except ValueError as exc:
            raise ChunkFormatError(str(exc)) from None
        return cls(k, node, payload)

    def write(self, path: Path) -> None:
        Path(path).write_bytes(self.to_bytes())

    @classmethod
    def read(cls, path: Path) -> ChunkFile:
        return cls.from_bytes(Path(path).read_bytes())


# -- cluster state ----------------------------------------------------------

@dataclass
class ChunkEntry:
    filename: str
    status: str = "live"  # live | failed


@dataclass
class ClusterState:
    directory: Path
    k: int
    byte_length: int
    stripes: int
    roster: dict[NodeId, ChunkEntry] = field(default_factory=dict)
    traffic: int = 0

    @property
    def params(self) -> CodeParams:
        return make_code(self.k)

    def chunk_path(self, node: NodeId) -> Path:
        entry = self.roster[node]
        name = entry.filename + (".lost" if entry.status == "failed" else "")
        return self.directory / name

    def failed_nodes(self) -> set[NodeId]:
        return {n for n, e in self.roster.items() if e.status == "failed"}

    def live_nodes(self) -> list[NodeId]:
        return [n for n in self.params.nodes() if self.roster[n].status == "live"]

    def lookup(self, node: NodeId) -> ChunkEntry:
        try:
            return self.roster[node]
        except KeyError:
            raise UnknownNodeError(f"no node {node} in a k={self.k} cluster") from None

    def manifest_text(self) -> str:
        lines = [f"k={self.k}", f"byte_length={self.byte_length}", f"stripes={self.stripes}", f"traffic={self.traffic}"]
        for node in self.params.nodes():
            e = self.roster[node]
            lines.append(f"chunk={_ROLE_NAMES[node.role]}:{node.index or 0}:{e.filename}:{e.status}")
        return "\n".join(lines) + "\n"

    def save(self) -> None:
        (self.directory / MANIFEST).write_text(self.manifest_text())

    @classmethod
    def load(cls, directory) -> ClusterState:
        directory = Path(directory)
        values: dict[str, str] = {}
        roster: dict[NodeId, ChunkEntry] = {}
        for line in (directory / MANIFEST).read_text().splitlines():
            if not line.strip():
                continue
            key, _, value = line.partition("=")
            if key == "chunk":
                role, index, filename, status = value.split(":")
                r = _ROLE_BY_NAME[role]
                roster[NodeId(r, int(index) if r is Role.SYSTEMATIC else None)] = ChunkEntry(filename, status)
            else:
                values[key] = value
        state = cls(
            directory,
            int(values["k"]),
            int(values["byte_length"]),
            int(values["stripes"]),
            roster,
            int(values.get("traffic", 0)),
        )
        if set(roster) != set(state.params.nodes()):
            raise ChunkFormatError("manifest roster does not list exactly k+2 chunks")
        return state

    def read_contents(self, nodes: Iterable[NodeId] | None = None) -> dict[NodeId, np.ndarray]:
        """Payloads of live nodes, validated against the manifest."""
        out = {}
        for node in self.live_nodes() if nodes is None else nodes:
            chunk = ChunkFile.read(self.chunk_path(node))
            if chunk.k != self.k or chunk.node != node or chunk.payload.size != self.stripes * 2**self.k:
                raise ChunkFormatError(f"chunk {self.chunk_path(node).name} does not match the manifest")
            out[node] = chunk.payload
        return out


def _stripe(contents: dict[NodeId, np.ndarray], s: int, n: int) -> dict[NodeId, np.ndarray]:
    return {node: data[s * n:(s + 1) * n] for node, data in contents.items()}


def cluster_init(k: int, data: bytes, directory) -> ClusterState:
    params = make_code(k)
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    trits = bytes_to_trits(data)
    stripes = max(1, -(-trits.size // params.M))
    padded = np.zeros(stripes * params.M, dtype=DTYPE)
    padded[:trits.size] = trits

    payloads: dict[NodeId, list[np.ndarray]] = {node: [] for node in params.nodes()}
    for s in range(stripes):
        for content in encode(params, padded[s * params.M:(s + 1) * params.M]):
            payloads[content.node].append(content.data)

    state = ClusterState(directory, k, len(data), stripes)
    for node in params.nodes():
        state.roster[node] = ChunkEntry(f"{node}.chunk")
        ChunkFile(k, node, np.concatenate(payloads[node])).write(state.chunk_path(node))
    state.save()
    log.debug("initialised k=%d cluster with %d stripe(s) in %s", k, stripes, directory)
    return state


def fail_node(state: ClusterState, node: NodeId) -> ClusterState:
    entry = state.lookup(node)
    if entry.status == "failed":
        raise AlreadyFailedError(f"node {node} has already failed")
    live_path = state.chunk_path(node)
    entry.status = "failed"
    live_path.rename(state.chunk_path(node))
    state.save()
    return state


def run_repair(state: ClusterState, node: NodeId) -> tuple[ClusterState, RepairTranscript]:
    entry = state.lookup(node)
    if entry.status != "failed":
        raise NotFailedError(f"node {node} is live; nothing to repair")
    failed = state.failed_nodes()
    params = state.params
    if not can_tolerate(params, failed):
        raise IntolerableError(f"intolerable failure set {sorted(map(str, failed))}")

    contents = state.read_contents()
    n = params.N
    restored, transcripts = [], []
    for s in range(state.stripes):
        content, transcript = recover_node(params, node, failed, _stripe(contents, s, n))
        restored.append(content.data)
        transcripts.append(transcript)

    lost_path = state.chunk_path(node)
    entry.status = "live"
    ChunkFile(state.k, node, np.concatenate(restored)).write(state.chunk_path(node))
    if lost_path.exists():
        lost_path.unlink()
    combined = RepairTranscript.combine(node, transcripts)
    state.traffic += combined.total_symbols
    state.save()
    return state, combined


class ReconstructResult(NamedTuple):
    byte_count: int
    downloaded_per_stripe: int
    total_downloaded: int


def choose_sources(state: ClusterState, exclude: Iterable[NodeId] = ()) -> tuple[list[NodeId], list[NodeId]]:
    """
    The data collector's connection plan: the first k live, non-excluded nodes
    (systematic before parity), plus the first excluded live node as the one
    source that may be asked for extra symbols.
    """
    exclude = set(exclude)
    for node in exclude:
        state.lookup(node)
    live = state.live_nodes()
    access = [n for n in live if n not in exclude][:state.k]
    extra = [n for n in live if n in exclude][:1]
    return access, extra


def run_reconstruct(state: ClusterState, exclude: Iterable[NodeId], output) -> ReconstructResult:
    params = state.params
    access, extra = choose_sources(state, exclude)
    plan = plan_reconstruction(params, access, extra)
    contents = state.read_contents(list(plan.access) + sorted({node for node, _ in plan.extra}))
    n = params.N
    decoder = plan.decoder.astype(np.int64)
    symbols = np.empty(state.stripes * params.M, dtype=DTYPE)
    for s in range(state.stripes):
        y = gather(plan, _stripe(contents, s, n), n).astype(np.int64)
        symbols[s * params.M:(s + 1) * params.M] = (decoder @ y) % 3
    data = trits_to_bytes(symbols[:state.byte_length * TRITS_PER_BYTE])
    Path(output).write_bytes(data)
    per_stripe = plan.total_symbols(n)
    return ReconstructResult(len(data), per_stripe, per_stripe * state.stripes)
