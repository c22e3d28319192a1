import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from multchar.algebra import (
    AlgebraMismatch,
    LaurentAlgebra,
    MatrixAlgebra,
    OperatorAlgebra,
    PointwiseAlgebra,
    TensorEmbedding,
    WindowOverflow,
    alg_mul,
    as_matrix,
    block_embed,
    from_dense,
    kron_embed,
    laurent_operator,
    matrix,
    matrix_trace_TR,
    multiply_out,
    phi_star,
    spread,
    tensor,
    to_dense,
)

L = LaurentAlgebra()
small = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)
laurent = st.dictionaries(st.integers(-3, 3), small, max_size=4).map(L.element)


def dense_coeffs(x, lo=-8, hi=8):
    v = np.zeros(hi - lo + 1, dtype=complex)
    for d, c in x.coeffs.items():
        v[d - lo] += c
    return v


@given(laurent, laurent)
def test_laurent_product_matches_convolution(x, y):
    # oracle: shift to non-negative degrees and convolve with numpy
    prod = np.convolve(dense_coeffs(x, -3, 3), dense_coeffs(y, -3, 3))
    assert np.allclose(dense_coeffs(x * y, -6, 6), prod)


@given(laurent, laurent, laurent)
def test_laurent_ring_axioms(x, y, z):
    assert ((x * y) * z).close_to(x * (y * z), 1e-9)
    assert (x * (y + z)).close_to(x * y + x * z, 1e-9)
    assert (x * y).close_to(y * x, 1e-12)
    assert (x * L.unit()).close_to(x, 0)


def test_laurent_operator_is_multiplicative_inside_window():
    x = L.element({1: 2.0, -1: 1j})
    y = L.element({2: -1.0, 0: 0.5})
    N = 10
    Mx, My, Mxy = laurent_operator(x, N), laurent_operator(y, N), laurent_operator(x * y, N)
    inner = slice(4, 2 * N + 1 - 4)
    assert np.allclose((Mx @ My)[inner, inner], Mxy[inner, inner])
    # z raises the mode index by one
    z = laurent_operator(L.monomial(1), 3)
    assert z[4, 3] == 1


def test_window_overflow():
    with pytest.raises(WindowOverflow):
        laurent_operator(L.monomial(5), 4)


@given(st.lists(small, min_size=1, max_size=4), st.lists(small, min_size=1, max_size=4))
def test_operator_algebra_evaluation_is_a_homomorphism(a, b):
    X = np.diag([1.0, -0.5j, 0.3 + 0.2j])
    A = OperatorAlgebra(X)
    x, y = A.poly(a), A.poly(b)
    assert np.allclose(A.evaluate(x * y), A.evaluate(x) @ A.evaluate(y))


def test_operator_algebras_compare_by_identity():
    X = np.eye(2)
    A, B = OperatorAlgebra(X), OperatorAlgebra(X)
    assert A == A and A != B
    with pytest.raises(AlgebraMismatch):
        alg_mul(A.poly([1]), B.poly([1]))


@given(st.integers(0, 2**32 - 1))
def test_matrix_product_matches_numpy(seed):
    rng = np.random.default_rng(seed)
    M1 = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    M2 = rng.normal(size=(3, 3))
    x, y = from_dense(M1), from_dense(M2)
    assert np.allclose(to_dense(x * y), M1 @ M2)


@given(st.integers(0, 2**32 - 1))
def test_kron_embed_matches_numpy_kron(seed):
    rng = np.random.default_rng(seed)
    M1, M2 = rng.normal(size=(2, 2)), rng.normal(size=(3, 3))
    phi = TensorEmbedding(2, 3)
    e = kron_embed(phi, from_dense(M1), from_dense(M2))
    assert np.allclose(to_dense(e), np.kron(M1, M2))
    assert np.allclose(to_dense(phi_star(phi, tensor(from_dense(M1), from_dense(M2)))), np.kron(M1, M2))


def test_tensor_embedding_rejects_non_bijection():
    with pytest.raises(ValueError):
        TensorEmbedding(2, 2, order=(0, 0, 1, 2))


def test_matrix_trace_and_block_embedding():
    a = matrix([[L.monomial(1), L.monomial(2)], [L.zero(), L.monomial(-1, 3.0)]])
    assert matrix_trace_TR(a).close_to(L.element({1: 1.0, -1: 3.0}), 0)
    big = block_embed(a, [0, 2], 3)
    ent = big.algebra.entry
    assert ent(big, 2, 2).close_to(L.monomial(-1, 3.0), 0)
    assert ent(big, 1, 1).close_to(L.unit(), 0)
    assert spread(a) == 2


def test_multiply_out_needs_commutative_square():
    x = tensor(L.monomial(1), L.monomial(2))
    assert multiply_out(x).close_to(L.monomial(3), 0)
    with pytest.raises(AlgebraMismatch):
        multiply_out(tensor(L.monomial(1), PointwiseAlgebra(2).unit()))


def test_matrix_entries_must_share_base():
    with pytest.raises(AlgebraMismatch):
        matrix([[L.unit(), PointwiseAlgebra(1).unit()], [L.zero(), L.zero()]])


def test_as_matrix_is_idempotent():
    m = as_matrix(L.monomial(1))
    assert isinstance(m.algebra, MatrixAlgebra) and as_matrix(m) is m


def test_pointwise_product():
    P = PointwiseAlgebra(3)
    x, y = P.vector([1, 2, 3]), P.vector([0, 1j, -1])
    assert np.allclose(P.values(x * y), [0, 2j, -3])
