import itertools

import numpy as np
import pytest

from hadamard_storage.exceptions import DimensionMismatchError, IndexOutOfRangeError
from hadamard_storage.gf3 import gf3, mat_rank, mat_vec
from hadamard_storage.hadamard import (
    HadamardMatrix,
    SignDiagonal,
    column_distance,
    exponent_tuples,
    fwht,
    generator,
    hadamard_column,
    sylvester,
    tuple_index,
    verify_gram,
)

from oracles import generator_kron, hadamard_int


def test_generators_k2():
    assert generator(1, 2).signs().tolist() == [1, 1, -1, -1]
    assert generator(2, 2).signs().tolist() == [1, -1, 1, -1]


def test_generators_match_53_code():
    assert generator(1, 3).signs().tolist() == [1, 1, 1, 1, -1, -1, -1, -1]
    assert generator(2, 3).signs().tolist() == [1, 1, -1, -1, 1, 1, -1, -1]
    assert generator(3, 3).signs().tolist() == [1, -1, 1, -1, 1, -1, 1, -1]


def test_generator_base_case():
    assert generator(1, 1).signs().tolist() == [1, -1]
    assert generator(1, 1).diagonal().tolist() == [1, 2]


@pytest.mark.parametrize("k", range(1, 9))
def test_generator_matches_kronecker_definition(k):
    for i in range(1, k + 1):
        assert np.array_equal(np.diag(generator(i, k).signs()), generator_kron(i, k))


@pytest.mark.parametrize("i, k", [(0, 3), (4, 3), (1, 0)])
def test_generator_index_errors(i, k):
    with pytest.raises(IndexOutOfRangeError):
        generator(i, k)


@pytest.mark.parametrize("k", range(1, 9))
def test_generators_are_involutions_and_commute(k):
    gens = [generator(i, k) for i in range(1, k + 1)]
    identity = SignDiagonal.identity(2**k)
    for a in gens:
        assert a @ a == identity
    for a, b in itertools.combinations(gens, 2):
        assert a @ b == b @ a


def test_sign_diagonal_apply_negates_masked_entries():
    d = SignDiagonal([False, True, False, True])
    assert d.apply(gf3([1, 1, 2, 0])).tolist() == [1, 2, 2, 0]
    assert np.array_equal(d.dense(), np.diag([1, 2, 1, 2]))
    with pytest.raises(ValueError):
        SignDiagonal([True, False, False])
    with pytest.raises(DimensionMismatchError):
        d.apply(gf3([1, 1]))


def test_hadamard_column_examples():
    assert hadamard_column((0, 0, 0)).tolist() == [1] * 8
    assert hadamard_column((0, 1)).tolist() == gf3([1, -1, 1, -1]).tolist()
    assert hadamard_column((1, 1)).tolist() == gf3([1, -1, -1, 1]).tolist()


def test_sylvester_small_orders():
    assert sylvester(0).entries.tolist() == [[1]]
    assert sylvester(1).entries.tolist() == [[1, 1], [1, -1]]
    assert sylvester(2).entries.tolist() == [
        [1, 1, 1, 1],
        [1, -1, 1, -1],
        [1, 1, -1, -1],
        [1, -1, -1, 1],
    ]


def test_h4_decomposes_into_generator_products():
    # [w, X_2 w, X_1 w, X_2 X_1 w]
    h4 = sylvester(2).to_gf3()
    for c, x in enumerate([(0, 0), (0, 1), (1, 0), (1, 1)]):
        assert np.array_equal(h4[:, c], hadamard_column(x))


@pytest.mark.parametrize("k", range(0, 9))
def test_sylvester_matches_scipy_and_canonical_column_order(k):
    h = sylvester(k)
    assert np.array_equal(h.entries, hadamard_int(2**k))
    for x in exponent_tuples(k):
        assert np.array_equal(h.column(tuple_index(x)), hadamard_column(x))


@pytest.mark.parametrize("k", range(1, 9))
def test_tuple_to_column_is_a_bijection(k):
    images = {hadamard_column(x).tobytes() for x in exponent_tuples(k)}
    assert len(images) == 2**k
    assert images == {c.tobytes() for c in sylvester(k).columns()}


@pytest.mark.parametrize("k", range(1, 7))
def test_pointwise_product_is_xor_of_tuples(k):
    for x, y in itertools.product(exponent_tuples(k), repeat=2):
        prod = (hadamard_column(x).astype(int) * hadamard_column(y)) % 3
        xor = tuple(a ^ b for a, b in zip(x, y))
        assert np.array_equal(prod, hadamard_column(xor))


def test_column_distance_examples():
    assert column_distance(gf3([1] * 4), gf3([1] * 4)) == 0
    h4 = sylvester(2)
    assert column_distance(h4.column(0), h4.column(1)) == 2
    assert column_distance(hadamard_column((0, 1, 1)), hadamard_column((1, 0, 1))) == 4
    with pytest.raises(DimensionMismatchError):
        column_distance(gf3([1, 1]), gf3([1, 1, 1, 1]))


def test_verify_gram_examples():
    assert verify_gram(sylvester(0))
    assert verify_gram(sylvester(2))
    flipped = sylvester(2).entries.copy()
    flipped[1, 2] *= -1
    assert not verify_gram(HadamardMatrix(flipped))


@pytest.mark.parametrize("k", range(0, 9))
def test_gf3_rank_is_full(k):
    assert mat_rank(sylvester(k).to_gf3()) == 2**k


@pytest.mark.parametrize("k", range(0, 10))
def test_fwht_equals_dense_product(k, rng):
    x = gf3(rng.integers(0, 3, 2**k))
    assert np.array_equal(fwht(x), mat_vec(gf3(hadamard_int(2**k)), x))
