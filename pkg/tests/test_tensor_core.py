import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from snpcert.tensor_core import (
    SingularMatrixError,
    TensorSpace,
    apply_local,
    aux_blocks,
    embed,
    factor_permutation,
    fitted_residual,
    from_aux_blocks,
    identity,
    inverse,
    kron,
    kron_all,
    partial_trace,
    partial_transpose,
    permutation_operator,
    projector_q,
    proportionality_residual,
    qcomm,
    residual,
    unit,
)

finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)


def cmat(d):
    return st.tuples(arrays(float, (d, d), elements=finite), arrays(float, (d, d), elements=finite)).map(
        lambda ab: ab[0] + 1j * ab[1])


def rand(d, seed=0):
    rng = np.random.default_rng(seed)
    return rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))


# --- kron -----------------------------------------------------------------------

def test_kron_identity():
    assert np.array_equal(kron(identity(2), identity(2)), identity(4))


def test_kron_matrix_units():
    out = kron(unit(2, 0, 1), unit(2, 1, 0))
    expected = np.zeros((4, 4))
    expected[1, 2] = 1
    assert np.array_equal(out, expected)


def test_kron_diagonal():
    z = np.diag([1.0, -1.0])
    assert np.array_equal(kron(z, z), np.diag([1, -1, -1, 1]))


@settings(max_examples=30, deadline=None)
@given(cmat(2), cmat(2), cmat(3))
def test_kron_associative(a, b, c):
    assert residual(kron(kron(a, b), c), kron(a, kron(b, c))) < 1e-14


@settings(max_examples=30, deadline=None)
@given(cmat(2), cmat(2), cmat(2), cmat(2))
def test_kron_mixed_product(a, b, c, d):
    assert residual(kron(a, b) @ kron(c, d), kron(a @ c, b @ d)) < 1e-13


# --- embed ----------------------------------------------------------------------

def test_embed_full_space_is_identity_map():
    # factors are 0-based: [0, 1] is the whole two-factor space
    p = permutation_operator(2)
    assert np.array_equal(embed(p, [0, 1], [2, 2]), p)


def test_embed_single_site():
    x = rand(2)
    assert np.allclose(embed(x, [0], [2, 2]), kron(x, identity(2)))
    assert np.allclose(embed(x, [1], [2, 2]), kron(identity(2), x))


def test_embed_nonadjacent_by_factor_swap():
    p = permutation_operator(2)
    swap12 = factor_permutation([0, 2, 1], [2, 2, 2])
    p01 = embed(p, [0, 1], [2, 2, 2])
    p02 = embed(p, [0, 2], [2, 2, 2])
    assert residual(p02, swap12 @ p01 @ swap12.T) == 0.0
    # brute force: P_02 swaps the first and last tensor indices
    for i in range(8):
        a, b, c = (i >> 2) & 1, (i >> 1) & 1, i & 1
        j = (c << 2) | (b << 1) | a
        assert p02[j, i] == 1


def test_embed_reversed_order_is_conjugated():
    x = rand(4, 1)
    p = permutation_operator(2)
    assert residual(embed(x, [1, 0], [2, 2]), p @ x @ p) < 1e-15


@settings(max_examples=25, deadline=None)
@given(cmat(2), st.sampled_from([[0], [1], [2], [0, 2], [2, 0], [1, 2]]))
def test_apply_local_matches_embed(a, sites):
    d = 2 ** len(sites)
    op = np.kron(a, a) if d == 4 else a
    sp = TensorSpace.uniform(2, 3)
    x = rand(8, 3)
    full = embed(op, sites, sp)
    assert residual(apply_local(op, sites, sp, x, "left"), full @ x) < 1e-13
    assert residual(apply_local(op, sites, sp, x, "right"), x @ full) < 1e-13


def test_embed_rejects_bad_sites():
    with pytest.raises(IndexError):
        embed(identity(2), [3], [2, 2])
    with pytest.raises(ValueError):
        embed(identity(4), [0, 0], [2, 2])
    with pytest.raises(ValueError):
        embed(identity(3), [0], [2, 2])


# --- partial transpose / trace -----------------------------------------------------

def test_partial_transpose_product():
    a, b = rand(3, 1), rand(3, 2)
    assert residual(partial_transpose(kron(a, b), 0, [3, 3]), kron(a.T, b)) == 0.0
    assert residual(partial_transpose(kron(a, b), 1, [3, 3]), kron(a, b.T)) == 0.0


@settings(max_examples=20, deadline=None)
@given(cmat(4))
def test_partial_transpose_involution(a):
    assert np.array_equal(partial_transpose(partial_transpose(a, 0, [2, 2]), 0, [2, 2]), a)


def test_partial_transpose_of_p_is_q():
    assert np.array_equal(partial_transpose(permutation_operator(2), 0, [2, 2]), projector_q(2))


def test_partial_trace_examples():
    a, b = rand(2, 1), rand(2, 2)
    assert residual(partial_trace(kron(a, b), 0, [2, 2]), np.trace(a) * b) < 1e-15
    assert np.array_equal(partial_trace(identity(4), 0, [2, 2]), 2 * identity(2))
    assert np.array_equal(partial_trace(permutation_operator(2), 0, [2, 2]), identity(2))


def test_aux_blocks_roundtrip():
    x = rand(12, 5)
    blocks = aux_blocks(x, 3)
    assert blocks.shape == (3, 3, 4, 4)
    assert np.array_equal(blocks[1, 2], x[4:8, 8:12])
    assert np.array_equal(from_aux_blocks(blocks), x)


# --- inverse / residual -------------------------------------------------------------

def test_inverse_examples():
    assert np.array_equal(inverse(identity(3)), identity(3))
    assert np.allclose(inverse(np.diag([2.0, 4.0])), np.diag([0.5, 0.25]))
    p = permutation_operator(3)
    assert residual(inverse(p), p) == 0.0


@settings(max_examples=30, deadline=None)
@given(cmat(3))
def test_inverse_property(a):
    a = a + 4 * identity(3)  # keep well away from singular
    if abs(np.linalg.det(a)) < 1e-3:
        return
    assert residual(a @ inverse(a), identity(3)) < 1e-10


def test_inverse_singular_raises():
    with pytest.raises(SingularMatrixError) as info:
        inverse(np.array([[1.0, 2.0], [2.0, 4.0]]))
    assert info.value.smallest_pivot < 1e-12
    with pytest.raises(SingularMatrixError):
        inverse(np.zeros((2, 2)))


def test_residual_examples():
    assert residual(identity(2), identity(2)) == 0.0
    assert residual(np.zeros((2, 2)), np.zeros((2, 2))) == 0.0
    r = residual(identity(2), np.diag([1, 1 + 1e-6]))
    assert r == pytest.approx(1e-6 / (2 + 1e-6), rel=1e-6)
    assert abs(r - 5e-7) < 1e-9


def test_proportionality_residual_examples():
    c, r = proportionality_residual(3 * identity(4))
    assert c == 3 and r == 0.0
    c, r = proportionality_residual(identity(2) + unit(2, 0, 1))
    assert c == 1 and r > 0


def test_fitted_residual_recovers_scale():
    x = rand(3)
    s, r = fitted_residual((2 - 1j) * x, x)
    assert abs(s - (2 - 1j)) < 1e-14 and r < 1e-15


def test_pq_algebra():
    for n in (2, 3, 4):
        p, q = permutation_operator(n), projector_q(n)
        assert np.array_equal(p @ p, identity(n * n))
        assert np.array_equal(q @ q, n * q)
        assert np.array_equal(p @ q, q) and np.array_equal(q @ p, q)


def test_kron_all_and_qcomm():
    a, b = rand(2, 1), rand(2, 2)
    assert residual(kron_all([a, b, a]), kron(kron(a, b), a)) < 1e-15
    assert residual(qcomm(a, b, 1.0), a @ b - b @ a) < 1e-15
