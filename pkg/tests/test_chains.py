import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from multchar.algebra import LaurentAlgebra, MatrixAlgebra, PointwiseAlgebra, TensorEmbedding, from_dense
from multchar.chains import (
    EPS_BOUNDARY_SIGN,
    HochschildChain,
    LieChain,
    antisymmetrize_eps,
    boundary_b,
    boundary_b_prime,
    ce_boundary,
    cyclic_t,
    elementary_E,
    extra_degeneracy_s,
    generalized_trace_chain,
    norm_N,
    shuffle_product,
    star_product,
    trace_eps,
    wedge_exterior,
)
from multchar.sampling import random_chain, random_lie_chain
from multchar.verify import leibniz_residual

L = LaurentAlgebra()
M2 = MatrixAlgebra(L, 2)
seeds = st.integers(0, 2**32 - 1)
z, zi, one = L.monomial(1), L.monomial(-1), L.unit()


def lchain(seed, degree, terms=2):
    return random_chain(np.random.default_rng(seed), L, degree, terms=terms, max_degree=2)


# -- dense oracle for the Hochschild boundary over M_2(C) ---------------------

C = PointwiseAlgebra(1)
MC = MatrixAlgebra(C, 2)


def dense_chain(x):
    n = x.degree + 1
    T = np.zeros((2, 2) * n, dtype=complex)
    for key, c in x.coeffs.items():
        T[tuple(v for (i, j, _) in key for v in (i, j))] += c
    return T


def dense_boundary(T):
    """b on a dense tensor of 2x2 factors, by explicit index loops."""
    n = T.ndim // 2
    out = np.zeros((2, 2) * (n - 1), dtype=complex)
    for idx in itertools.product(range(2), repeat=2 * n):
        c = T[idx]
        if c == 0:
            continue
        pairs = [idx[2 * r:2 * r + 2] for r in range(n)]
        for i in range(n):
            if i < n - 1:
                if pairs[i][1] != pairs[i + 1][0]:
                    continue
                new = pairs[:i] + [(pairs[i][0], pairs[i + 1][1])] + pairs[i + 2:]
            else:
                if pairs[n - 1][1] != pairs[0][0]:
                    continue
                new = [(pairs[n - 1][0], pairs[0][1])] + pairs[1:n - 1]
            out[tuple(v for pr in new for v in pr)] += (-1) ** i * c
    return out


@given(seeds, st.integers(1, 3))
def test_boundary_matches_dense_oracle(seed, n):
    rng = np.random.default_rng(seed)
    terms = [(rng.normal() + 1j * rng.normal(), [from_dense(rng.normal(size=(2, 2)), C) for _ in range(n + 1)])
             for _ in range(2)]
    x = HochschildChain.from_terms(MC, terms)
    assert np.allclose(dense_chain(boundary_b(x)), dense_boundary(dense_chain(x)))


# -- Hochschild and cyclic operators -----------------------------------------


@given(seeds, st.integers(2, 4))
def test_b_squared_vanishes(seed, n):
    x = lchain(seed, n)
    assert boundary_b(boundary_b(x)).norm() <= 1e-10 * max(1, x.norm())


@given(seeds, st.integers(0, 4))
def test_t_has_order_n_plus_one(seed, n):
    x = lchain(seed, n)
    y = x
    for _ in range(n + 1):
        y = cyclic_t(y)
    assert y.residual(x) == 0
    assert (norm_N(x) - cyclic_t(norm_N(x))).norm() <= 1e-10 * max(1, x.norm())


@given(seeds, st.integers(1, 4))
def test_extra_degeneracy_contracts_bar_complex(seed, n):
    # b' s + s b' = id (it is b', not b, that s contracts)
    x = lchain(seed, n)
    lhs = boundary_b_prime(extra_degeneracy_s(x)) + extra_degeneracy_s(boundary_b_prime(x))
    assert lhs.residual(x) <= 1e-12


def test_boundary_small_examples():
    # b(a_0 ⊗ a_1) = a_0 a_1 - a_1 a_0 vanishes over a commutative algebra
    assert boundary_b(HochschildChain.tensor(z, zi)).norm() == 0
    # b(1 ⊗ z ⊗ 1/z) = z ⊗ 1/z - 1 ⊗ 1 + 1/z ⊗ z
    got = boundary_b(HochschildChain.tensor(one, z, zi))
    want = (HochschildChain.tensor(z, zi) - HochschildChain.tensor(one, one)
            + HochschildChain.tensor(zi, z))
    assert got.residual(want) == 0


def test_cyclic_operator_sign():
    x = HochschildChain.tensor(one, z, zi)
    assert cyclic_t(x).residual(HochschildChain.tensor(zi, one, z)) == 0
    y = HochschildChain.tensor(one, z)
    assert cyclic_t(y).residual(HochschildChain.tensor(z, one, coeff=-1)) == 0


# -- products -----------------------------------------------------------------


def test_shuffle_product_degree_one_example():
    # (1 ⊗ z) × (1 ⊗ 1/z) = 1 ⊗ z ⊗ 1/z - 1 ⊗ 1/z ⊗ z  (interior)
    x, y = HochschildChain.tensor(one, z), HochschildChain.tensor(one, zi)
    want = HochschildChain.tensor(one, z, zi) - HochschildChain.tensor(one, zi, z)
    assert shuffle_product(x, y, interior=True).residual(want) == 0
    ext = shuffle_product(x, y)
    assert ext.coeffs == {((0, 0), (1, 0), (0, -1)): 1, ((0, 0), (0, -1), (1, 0)): -1}


@given(seeds, st.sampled_from([(0, 0), (1, 0), (0, 1), (1, 1), (2, 1)]))
def test_star_leibniz(seed, nm):
    rng = np.random.default_rng(seed)
    n, m = nm
    x = random_chain(rng, L, n, terms=2, max_degree=2)
    y = random_chain(rng, L, m, terms=2, max_degree=2)
    assert leibniz_residual(x, y) <= 1e-10


@given(seeds, st.sampled_from([(0, 0), (1, 0), (1, 1), (2, 1)]))
def test_star_graded_commutative_mod_cyclic(seed, nm):
    n, m = nm
    x, y = lchain(seed, n), lchain(seed + 1, m)
    xy = star_product(x, y, interior=True)
    yx = star_product(y, x, interior=True)
    assert xy.cyclic_residual((-1) ** ((n + 1) * (m + 1)) * yx) <= 1e-10


@given(seeds, st.sampled_from([(0, 0, 0), (1, 0, 0), (0, 1, 1), (1, 1, 0)]))
def test_star_associative(seed, degs):
    x, y, w = (lchain(seed + i, d) for i, d in enumerate(degs))
    left = star_product(star_product(x, y, interior=True), w, interior=True)
    right = star_product(x, star_product(y, w, interior=True), interior=True)
    assert left.cyclic_residual(right) <= 1e-10


# -- Lie chains ---------------------------------------------------------------


def test_ce_boundary_is_the_bracket_in_degree_two():
    a = M2.element({(0, 1, 1): 1.0})
    b = M2.element({(1, 0, -1): 1.0})
    w = LieChain.wedge(a, b)
    got = ce_boundary(w)
    want = LieChain.wedge(a * b - b * a)
    assert got.residual(want) <= 1e-15


@given(seeds, st.integers(3, 4))
def test_delta_squared_vanishes(seed, n):
    w = random_lie_chain(np.random.default_rng(seed), MatrixAlgebra(L, 3), n, terms=2, entries=3)
    assert ce_boundary(ce_boundary(w)).norm() <= 1e-10 * max(1, w.norm())


def test_wedge_is_alternating():
    a = M2.element({(0, 1, 0): 1.0})
    assert LieChain.wedge(a, a).norm() == 0
    b = M2.element({(1, 1, 2): 1.0})
    assert LieChain.wedge(a, b).residual(-1 * LieChain.wedge(b, a)) == 0


def test_eps_boundary_sign_regression():
    # frozen: ε∘δ = +b∘ε modulo Im(1-t); the opposite sign must fail
    assert EPS_BOUNDARY_SIGN == 1
    rng = np.random.default_rng(7)
    for d in (2, 3, 4):
        w = random_lie_chain(rng, M2, d, terms=2, entries=3)
        lhs = antisymmetrize_eps(ce_boundary(w))
        rhs = boundary_b(antisymmetrize_eps(w))
        assert lhs.cyclic_residual(EPS_BOUNDARY_SIGN * rhs) <= 1e-10
        if rhs.cyclic_residual(HochschildChain.zero(rhs.algebra, rhs.degree)) > 1e-6:
            assert lhs.cyclic_residual(-EPS_BOUNDARY_SIGN * rhs) > 1e-6


@given(seeds, st.sampled_from([(1, 1), (2, 1), (1, 2)]))
def test_antisymmetrization_is_multiplicative_mod_cyclic(seed, nm):
    rng = np.random.default_rng(seed)
    phi = TensorEmbedding(2, 2)
    u, v = random_lie_chain(rng, M2, nm[0]), random_lie_chain(rng, M2, nm[1])
    lhs = antisymmetrize_eps(wedge_exterior(u, v, phi))
    rhs = star_product(antisymmetrize_eps(u), antisymmetrize_eps(v), phi=phi)
    assert lhs.cyclic_residual(rhs) <= 1e-10


@given(seeds, st.sampled_from([(0, 0), (1, 0), (1, 1), (0, 2)]))
def test_trace_is_multiplicative_mod_cyclic(seed, nm):
    rng = np.random.default_rng(seed)
    phi = TensorEmbedding(2, 2)
    x, y = random_chain(rng, M2, nm[0], terms=1), random_chain(rng, M2, nm[1], terms=1)
    lhs = star_product(generalized_trace_chain(x), generalized_trace_chain(y))
    rhs = generalized_trace_chain(star_product(x, y, phi=phi))
    assert lhs.cyclic_residual(rhs) <= 1e-10


@given(seeds, st.integers(0, 3))
def test_trace_eps_inverts_elementary_embedding(seed, n):
    x = lchain(seed, n)
    assert trace_eps(elementary_E(x)).residual(x) <= 1e-14
    assert generalized_trace_chain(antisymmetrize_eps(elementary_E(x))).residual(x) <= 1e-14


@given(seeds, st.sampled_from([(0, 0), (1, 0), (1, 1), (2, 1)]))
def test_star_factorization(seed, nm):
    n, m = nm
    x, y = lchain(seed, n), lchain(seed + 3, m)
    rhs = trace_eps(wedge_exterior(elementary_E(x), elementary_E(y), TensorEmbedding(n + 1, m + 1)))
    assert star_product(x, y).cyclic_residual(rhs) <= 1e-10


def test_degree_and_algebra_checks():
    with pytest.raises(ValueError):
        HochschildChain.tensor(z) + HochschildChain.tensor(z, z)
    with pytest.raises(ValueError):
        HochschildChain(L, 1, {(1,): 1.0})
