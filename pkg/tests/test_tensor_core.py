import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from susy_ybe.tensor_core import (
    MAX_DIM,
    DenseOperator,
    DimensionError,
    StateVector,
    apply_embedded,
    embed,
    frobenius_distance,
    identity,
    kron,
    operator_from_json,
    operator_to_json,
    permutation_op,
    zeros,
)

Q = DenseOperator(np.array([[0, 1], [0, 0]]), 2, 1)
SX = DenseOperator(np.array([[0, 1], [1, 0]]), 2, 1)


def _rand_op(rng, d, n):
    dim = d**n
    return DenseOperator(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)), d, n)


def test_kron_identity():
    assert np.array_equal(kron(identity(2), identity(2)).matrix, np.eye(4))


def test_kron_qq_index_oracle():
    out = kron(Q, Q).matrix
    q = Q.matrix
    for row in range(4):
        for col in range(4):
            # big-endian: row = 2*a + b, col = 2*c + d
            a, b = divmod(row, 2)
            c, d = divmod(col, 2)
            assert out[row, col] == q[a, c] * q[b, d]
    assert out[0, 3] == 1 and np.count_nonzero(out) == 1


def test_kron_basis_action():
    out = kron(SX, identity(2)) @ StateVector.basis("00")
    assert out.terms() == {"10": 1}


def test_kron_mismatched_d():
    with pytest.raises(DimensionError):
        kron(identity(2), identity(3))


def test_embed_examples():
    zero = embed(Q, 2, 3) @ StateVector.basis("000")
    assert zero.norm == 0
    out = embed(Q, 2, 3) @ StateVector.basis("010")
    assert out.terms() == {"000": 1}
    assert np.array_equal(embed(SX, 1, 2).matrix, kron(SX, identity(2)).matrix)


def test_embed_basis_oracle():
    # q on site 2 of 3 flips the middle digit 1 -> 0 and kills the rest
    op = embed(Q, 2, 3)
    for i in range(8):
        label = format(i, "03b")
        out = op @ StateVector.basis(label)
        if label[1] == "1":
            assert out.terms() == {label[0] + "0" + label[2]: 1}
        else:
            assert out.norm == 0


def test_embed_window_errors():
    with pytest.raises(DimensionError):
        embed(kron(Q, Q), 2, 2)
    with pytest.raises(DimensionError):
        embed(Q, 0, 2)


def test_apply_embedded_matches_embed():
    rng = np.random.default_rng(1)
    op = _rand_op(rng, 3, 2)
    target = rng.normal(size=(81, 5))
    for start in (1, 2, 3):
        want = embed(op, start, 4).matrix @ target
        assert np.allclose(apply_embedded(op.matrix, 3, start, 4, target), want)


def test_apply_embedded_sparse_path():
    q = kron(Q, Q).matrix
    target = np.random.default_rng(0).normal(size=(16, 16))
    assert np.allclose(apply_embedded(q, 2, 2, 4, target), embed(DenseOperator(q, 2, 2), 2, 4).matrix @ target)


def test_permutation_op():
    p = permutation_op(2)
    assert (p @ StateVector.basis("01")).terms() == {"10": 1}
    assert frobenius_distance(p @ p, identity(2, 2)) == 0
    # P12 P23 P12 = P23 P12 P23 on three sites
    p12, p23 = embed(p, 1, 3), embed(p, 2, 3)
    assert frobenius_distance(p12 @ p23 @ p12, p23 @ p12 @ p23) == 0


def test_permutation_op_qutrit_swaps():
    p = permutation_op(3)
    for x in range(3):
        for y in range(3):
            out = p @ StateVector.basis(f"{x}{y}", 3)
            assert out.terms() == {f"{y}{x}": 1}
    with pytest.raises(DimensionError):
        permutation_op(1)


def test_frobenius_distance():
    assert frobenius_distance(identity(2), identity(2)) == 0
    assert frobenius_distance(identity(2), zeros(2)) == pytest.approx(np.sqrt(2))
    with pytest.raises(DimensionError):
        frobenius_distance(identity(2), identity(2, 2))


def test_bell_matrix_reassembly():
    x = np.kron(np.array([[0, 1], [-1, 0]]), np.array([[0, 1], [1, 0]]))
    display = np.array([[1, 0, 0, 1], [0, 1, 1, 0], [0, -1, 1, 0], [-1, 0, 0, 1]]) / np.sqrt(2)
    assert frobenius_distance(display, (np.eye(4) + x) / np.sqrt(2)) < 1e-12


def test_shape_validation_and_guard():
    with pytest.raises(DimensionError):
        DenseOperator(np.eye(3), 2, 1)
    with pytest.raises(DimensionError):
        identity(2, 13)
    assert 2**12 == MAX_DIM
    with pytest.raises(DimensionError):
        DenseOperator.from_matrix(np.eye(6), 4)


def test_operators_are_read_only():
    op = identity(2)
    with pytest.raises(ValueError):
        op.matrix[0, 0] = 5


def test_state_helpers():
    s = StateVector.from_terms({"01": 1, "10": 1})
    assert s.norm == pytest.approx(1)
    assert s.label(2) == "10"
    assert StateVector.basis("12", 3).terms() == {"12": 1}
    with pytest.raises(DimensionError):
        StateVector.basis("2", 2)
    with pytest.raises(ValueError):
        StateVector(np.zeros(2), 2, 1).normalized()


def test_json_round_trip():
    rng = np.random.default_rng(3)
    op = _rand_op(rng, 2, 2)
    text = operator_to_json(op)
    data = json.loads(text)
    assert data["d"] == 2 and data["N"] == 2 and len(data["entries"]) == 16
    assert data["entries"][1] == [op.matrix[0, 1].real, op.matrix[0, 1].imag]
    assert np.array_equal(operator_from_json(text).matrix, op.matrix)
    with pytest.raises(DimensionError):
        operator_from_json(json.dumps({"d": 2, "N": 1, "entries": [[0, 0]]}))


seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=25, deadline=None)
@given(seeds, st.sampled_from([2, 3]))
def test_kron_associative(seed, d):
    # Gaussian-integer entries keep every product exact
    rng = np.random.default_rng(seed)
    a, b, c = (
        DenseOperator(rng.integers(-9, 10, (d, d)) + 1j * rng.integers(-9, 10, (d, d)), d, 1)
        for _ in range(3)
    )
    assert np.array_equal(kron(kron(a, b), c).matrix, kron(a, kron(b, c)).matrix)


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_adjoint_involution_and_distribution(seed):
    rng = np.random.default_rng(seed)
    a, b = _rand_op(rng, 2, 1), _rand_op(rng, 2, 2)
    assert np.array_equal(a.dag.dag.matrix, a.matrix)
    assert np.allclose(kron(a, b).dag.matrix, kron(a.dag, b.dag).matrix)


@settings(max_examples=25, deadline=None)
@given(seeds, st.integers(1, 2), st.integers(3, 4))
def test_disjoint_embeddings_commute(seed, m, start):
    rng = np.random.default_rng(seed)
    a, b = _rand_op(rng, 2, m), _rand_op(rng, 2, 1)
    total = start + 1
    # windows [1, m] and [start, start] never overlap since start > 2 >= m
    ea, eb = embed(a, 1, total), embed(b, start, total)
    assert np.allclose((ea @ eb).matrix, (eb @ ea).matrix)


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_frobenius_metric(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (_rand_op(rng, 2, 1) for _ in range(3))
    assert frobenius_distance(a, b) == pytest.approx(frobenius_distance(b, a))
    assert frobenius_distance(a, c) <= frobenius_distance(a, b) + frobenius_distance(b, c) + 1e-12
