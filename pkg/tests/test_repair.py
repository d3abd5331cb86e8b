import numpy as np
import pytest

from hadamard_storage.code import PARITY_A, PARITY_B, NodeId, as_survivors, encode, make_code, repair_matrix
from hadamard_storage.exceptions import IndexOutOfRangeError, NodeUnavailableError
from hadamard_storage.gf3 import gf3, identity, mat_mul
from hadamard_storage.hadamard import hadamard_column
from hadamard_storage.repair import (
    RepairTranscript,
    final_system_matrix,
    interference_rank_report,
    pairing,
    project,
    repair_parity,
    repair_systematic,
)

from oracles import brute_force_repair


def _cluster(k, rng):
    p = make_code(k)
    f = gf3(rng.integers(0, 3, p.M))
    return p, f, as_survivors(encode(p, f))


def _without(contents, node):
    return {n: d for n, d in contents.items() if n != node}


def brute_force_systematic(p, i, transcript):
    return brute_force_repair(p.k, i, [(str(d.source), d.payload) for d in transcript.downloads])


def test_repair_systematic_k3(rng):
    p, f, contents = _cluster(3, rng)
    restored, transcript = repair_systematic(p, 2, _without(contents, NodeId.systematic(2)))
    assert np.array_equal(restored.data, f[8:16])
    assert transcript.total_symbols == 16
    assert transcript.per_source() == {
        NodeId.systematic(1): 4, NodeId.systematic(3): 4, PARITY_A: 4, PARITY_B: 4
    }


def test_repair_systematic_k1(rng):
    p, f, contents = _cluster(1, rng)
    restored, transcript = repair_systematic(p, 1, _without(contents, NodeId.systematic(1)))
    assert np.array_equal(restored.data, f)
    assert transcript.total_symbols == 2
    assert transcript.per_source() == {PARITY_A: 1, PARITY_B: 1}


@pytest.mark.parametrize("probe", range(8))
def test_repair_systematic_k2_unit_probes(probe):
    p = make_code(2)
    f = np.zeros(8, dtype=np.uint8)
    f[probe] = 1
    contents = as_survivors(encode(p, f))
    for i in (1, 2):
        restored, transcript = repair_systematic(p, i, _without(contents, NodeId.systematic(i)))
        assert np.array_equal(restored.data, f[(i - 1) * 4:i * 4])
        assert transcript.total_symbols == 6
        assert np.array_equal(brute_force_systematic(p, i, transcript), restored.data)


@pytest.mark.parametrize("k", range(1, 9))
def test_systematic_round_trip_and_exact_bandwidth(k, rng):
    trials = 100 if k <= 5 else 10
    for _ in range(trials):
        p, f, contents = _cluster(k, rng)
        for i in range(1, k + 1):
            restored, transcript = repair_systematic(p, i, _without(contents, NodeId.systematic(i)))
            assert np.array_equal(restored.data, f[(i - 1) * p.N:i * p.N])
            assert transcript.total_symbols == (k + 1) * 2 ** (k - 1)


@pytest.mark.parametrize("k", range(1, 5))
def test_structured_repair_equals_brute_force(k, rng):
    for _ in range(10):
        p, f, contents = _cluster(k, rng)
        for i in range(1, k + 1):
            restored, transcript = repair_systematic(p, i, _without(contents, NodeId.systematic(i)))
            assert np.array_equal(brute_force_systematic(p, i, transcript), restored.data)


def test_projection_equals_dense_product(rng):
    p, f, contents = _cluster(4, rng)
    for i in range(1, 5):
        v = repair_matrix(p, i).dense().astype(np.int64)
        for data in contents.values():
            assert np.array_equal(project(p, i, data), (v.T @ data) % 3)


def test_repair_requires_survivors(rng):
    p, f, contents = _cluster(3, rng)
    partial = _without(_without(contents, NodeId.systematic(1)), PARITY_B)
    with pytest.raises(NodeUnavailableError):
        repair_systematic(p, 1, partial)
    with pytest.raises(NodeUnavailableError):
        repair_parity(p, PARITY_A, _without(contents, PARITY_B) | {PARITY_A: contents[PARITY_A]})


def test_repair_parity_examples(rng):
    p, f, contents = _cluster(3, rng)
    restored, transcript = repair_parity(p, PARITY_A, _without(contents, PARITY_A))
    assert np.array_equal(restored.data, contents[PARITY_A])
    assert transcript.total_symbols == 16

    p1, f1, c1 = _cluster(1, rng)
    restored, transcript = repair_parity(p1, PARITY_B, _without(c1, PARITY_B))
    assert np.array_equal(restored.data, c1[PARITY_B])
    assert transcript.total_symbols == 2 and transcript.per_source() == {PARITY_A: 2}

    p2, f2, c2 = _cluster(2, rng)
    for role in (PARITY_A, PARITY_B):
        restored, transcript = repair_parity(p2, role, _without(c2, role))
        assert np.array_equal(restored.data, encode(p2, f2)[-2 if role == PARITY_A else -1].data)
        assert transcript.total_symbols == 6


@pytest.mark.parametrize("k", range(1, 9))
def test_parity_round_trip_within_bound(k, rng):
    for _ in range(20):
        p, f, contents = _cluster(k, rng)
        for role in (PARITY_A, PARITY_B):
            restored, transcript = repair_parity(p, role, _without(contents, role))
            assert np.array_equal(restored.data, contents[role])
            assert transcript.total_symbols <= (k + 1) * 2 ** (k - 1)


def test_repair_parity_rejects_systematic_target(rng):
    p, f, contents = _cluster(2, rng)
    with pytest.raises(ValueError):
        repair_parity(p, NodeId.systematic(1), contents)


def test_interference_rank_report_examples():
    assert interference_rank_report(make_code(3), 1) == [(1, 8), (2, 4), (3, 4)]
    assert interference_rank_report(make_code(1), 1) == [(1, 2)]
    assert interference_rank_report(make_code(4), 2) == [(1, 8), (2, 16), (3, 8), (4, 8)]


def test_pairing_examples():
    assert pairing(make_code(2), 1, 2).mapping == {(0, 0): (0, 1), (0, 1): (0, 0)}
    pr = pairing(make_code(3), 3, 1)
    assert pr((0, 0, 0)) == (1, 0, 0) and pr((0, 1, 0)) == (1, 1, 0)
    with pytest.raises(IndexOutOfRangeError):
        pairing(make_code(3), 2, 2)


@pytest.mark.parametrize("k", range(2, 7))
def test_pairing_is_an_involution_matching_generator_action(k):
    p = make_code(k)
    for i in range(1, k + 1):
        for j in range(1, k + 1):
            if i == j:
                continue
            pr = pairing(p, i, j)
            assert all(pr(pr(t)) == t for t in pr.mapping)
            assert all(pr(t) != t for t in pr.mapping)
            for t in pr.mapping:
                assert np.array_equal(p.X(j).apply(hadamard_column(t)), hadamard_column(pr(t)))


@pytest.mark.parametrize("k", range(1, 8))
def test_final_system_is_orthogonal(k):
    p = make_code(k)
    for i in range(1, k + 1):
        m = final_system_matrix(p, repair_matrix(p, i))
        assert np.array_equal(mat_mul(m.T, m), (p.N % 3) * identity(p.N))


def test_transcript_report_format(rng):
    p, f, contents = _cluster(3, rng)
    _, transcript = repair_systematic(p, 2, _without(contents, NodeId.systematic(2)))
    assert transcript.report_lines() == [
        "source=s1 symbols=4",
        "source=s3 symbols=4",
        "source=pa symbols=4",
        "source=pb symbols=4",
        "total=16",
    ]
    with pytest.raises(ValueError):
        transcript.record(NodeId.systematic(2), gf3([1]))
    merged = RepairTranscript.combine(transcript.target, [transcript, transcript])
    assert merged.total_symbols == 32
