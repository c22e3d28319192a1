import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import expm

from multchar.algebra import PointwiseAlgebra, TensorEmbedding
from multchar.perms import enumerate_shuffles
from multchar.simplicial import (
    ExponentialPath,
    ExponentialProduct,
    SingularSimplexError,
    SmoothSimplex,
    TensorOfSimplices,
    degeneracy_coordinates,
    face,
    gamma_j,
    gammas,
    lie_chain_from_flat,
    logarithm_L,
    simplex_rule,
    wedge_coefficients,
)
from multchar.verify import (
    integral_shuffle_residual,
    log_product_residual,
    random_simplex,
    simplicial_identity_residual,
    gamma_shuffle_residual,
)

seeds = st.integers(0, 2**32 - 1)


@given(st.integers(1, 3), st.lists(st.integers(0, 4), min_size=3, max_size=3))
def test_simplex_rule_integrates_monomials_exactly(n, exps):
    # Dirichlet integral: ∫_{Δ^n} Π t_i^{a_i} dt = Π a_i! / (n + Σ a_i)!
    a = exps[:n]
    rule = simplex_rule(n, 8)
    got = rule.integrate(lambda t: np.prod(t ** np.array(a)))
    want = math.prod(math.factorial(k) for k in a) / math.factorial(n + sum(a))
    assert abs(got - want) < 1e-14


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_simplex_rule_volume(n):
    rule = simplex_rule(n, 5)
    assert abs(rule.weights.sum() - 1 / math.factorial(n)) < 1e-15
    assert np.all(rule.weights > 0) and np.all(rule.nodes.sum(axis=1) <= 1)


@given(seeds)
def test_partials_match_central_differences(seed):
    rng = np.random.default_rng(seed)
    s = random_simplex(rng, 2, p=2, factors=3)
    t = rng.dirichlet(np.ones(3))[:2]
    value, parts = s.jet(t)
    assert np.allclose(value, s.value(t))
    h = 1e-6
    for j in (1, 2):
        e = np.zeros(2)
        e[j - 1] = h
        fd = (s.value(t + e) - s.value(t - e)) / (2 * h)
        assert np.allclose(parts[j - 1], fd, atol=1e-7)
        assert np.allclose(s.partial(t, j), parts[j - 1])


def test_exponential_path_value_and_gamma():
    a = np.array([[0.1, 0.4], [-0.2, 0.3j]])
    s = ExponentialPath(a)
    assert np.allclose(s.value([0.3]), expm(-0.3 * a))
    assert np.allclose(gamma_j(s, 1, [0.7]), -a)


@given(seeds)
def test_log_of_exponential_path(seed):
    rng = np.random.default_rng(seed)
    a = 0.5 * (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    got = logarithm_L(ExponentialPath(a))
    expect = lie_chain_from_flat({(r,): -a.reshape(-1)[r] for r in range(4)}, 2, PointwiseAlgebra(1), 1)
    assert got.chain.residual(expect) < 1e-12


def test_wedge_coefficients_are_minors():
    x, y = np.array([[1.0, 2.0], [0, 0]]), np.array([[0.0, 1.0], [3.0, 0]])
    c = wedge_coefficients([x, y])
    # flat letters x = (1,2,0,0), y = (0,1,3,0): the (0,1) minor is 1*1 - 2*0
    assert [c[k] for k in [(0, 1), (0, 2), (1, 2)]] == pytest.approx([1, 3, 6], abs=1e-14)
    assert wedge_coefficients([x, 2 * x]) == {}


def test_linear_shuffle_integrals():
    # α = t, β = 1 on Δ^1: the two (1,1)-shuffle integrals are 1/3 and 1/6
    rule = simplex_rule(2, 6)
    parts = []
    for sh in enumerate_shuffles(1, 1):
        Dn, Dm = degeneracy_coordinates(1, sh.nu), degeneracy_coordinates(1, sh.mu)
        parts.append(rule.integrate(lambda t: (Dn @ t)[0] * 1.0))
    assert sorted(parts) == pytest.approx([1 / 6, 1 / 3], abs=1e-15)
    assert integral_shuffle_residual(lambda t: t[0], lambda t: 1.0, 1, 1) < 1e-14


@given(seeds, st.sampled_from([(1, 1), (2, 1), (1, 2)]))
def test_integral_shuffle_identity(seed, nm):
    rng = np.random.default_rng(seed)
    c1, c2 = rng.normal(size=3), rng.normal(size=3)
    alpha = lambda t: c1[0] + c1[1] * t.sum() + c1[2] * t[0] ** 2
    beta = lambda t: c2[0] + c2[1] * t[-1] + c2[2] * t.sum() ** 2
    assert integral_shuffle_residual(alpha, beta, *nm) < 1e-12


@given(seeds)
def test_log_product_rule(seed):
    rng = np.random.default_rng(seed)
    sigma, tau = random_simplex(rng, 1), random_simplex(rng, 1)
    res, est = log_product_residual(sigma, tau, TensorEmbedding(2, 2))
    assert res < 1e-8 and est < 1e-8


@given(seeds, st.sampled_from([(1, 1), (2, 1), (1, 2)]))
def test_gamma_of_shuffle_pointwise(seed, nm):
    # holds for every shuffle, not only those fixing the first and last positions
    rng = np.random.default_rng(seed)
    sigma, tau = random_simplex(rng, nm[0]), random_simplex(rng, nm[1])
    pts = [rng.dirichlet(np.ones(sum(nm) + 1))[: sum(nm)] for _ in range(5)]
    assert gamma_shuffle_residual(sigma, tau, pts) < 1e-9


@given(seeds, st.integers(1, 3))
def test_simplicial_identities(seed, n):
    rng = np.random.default_rng(seed)
    s = random_simplex(rng, n)
    pts = [rng.dirichlet(np.ones(5))[:4] for _ in range(3)]
    assert simplicial_identity_residual(s, pts) < 1e-12


def test_zeroth_face_is_normalised():
    s = random_simplex(np.random.default_rng(3), 2)
    d0 = face(s, 0)
    assert np.allclose(d0.value([0.0]), np.eye(2))


def test_tensor_of_simplices_uses_kron():
    rng = np.random.default_rng(5)
    s, t = random_simplex(rng, 1), random_simplex(rng, 1)
    st_ = TensorOfSimplices(s, t, TensorEmbedding(2, 2))
    assert np.allclose(st_.value([0.4]), np.kron(s.value([0.4]), t.value([0.4])))


class _Singular(SmoothSimplex):
    degree, size, base = 1, 2, PointwiseAlgebra(1)

    def value(self, t):
        return np.array([[1.0, 1.0], [1.0, 1.0]], dtype=complex)

    def partial(self, t, j):
        return np.zeros((2, 2), dtype=complex)


def test_singular_simplex_raises():
    with pytest.raises(SingularSimplexError):
        gammas(_Singular(), [0.5])


def test_exponential_product_validates_weights():
    with pytest.raises(ValueError):
        ExponentialProduct(((0.1,), (0.1, 0.2)), (np.eye(2), np.eye(2)))
