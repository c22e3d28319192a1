"""Smooth simplices in GL_p, their simplicial structure and the logarithm L.

Points of the standard simplex are ``t = (t_1, ..., t_n)`` with ``t_i >= 0``
and ``Σ t_i <= 1``; the vertex ``F_0`` is the origin and ``F_i`` the i-th unit
vector.  Faces and degeneracies are affine changes of coordinates, so they are
all represented by :class:`Reparametrized`, which carries exact derivatives
through the chain rule.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.linalg import expm

from .algebra import Algebra, MatrixAlgebra, PointwiseAlgebra, TensorAlgebra, TensorEmbedding, unit_key
from .chains import LieChain
from .perms import enumerate_shuffles

DEFAULT_ORDER = 12
SINGULAR_COND = 1e12


class SingularSimplexError(ArithmeticError):
    """A simplex value is not invertible at an evaluation point."""

    def __init__(self, point: np.ndarray, cond: float):
        super().__init__(f"simplex value is singular at t={np.round(point, 12).tolist()} (cond={cond:.3g})")
        self.point = point
        self.cond = cond


def kron_phi(phi: TensorEmbedding | None, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Dense ``a ⊗_φ b``; the default embedding is ``numpy.kron``."""
    K = np.kron(a, b)
    if phi is None or phi.order is None:
        return K
    order = np.asarray(phi.order)
    out = np.empty_like(K)
    out[np.ix_(order, order)] = K
    return out


class SmoothSimplex:
    """A smooth normalised map ``Δ^n -> GL_p``."""

    degree: int
    size: int
    base: Algebra

    def value(self, t: Sequence[float]) -> np.ndarray:
        raise NotImplementedError

    def partial(self, t: Sequence[float], j: int) -> np.ndarray:
        """``∂σ/∂t_j`` at ``t`` for ``1 <= j <= n``."""
        raise NotImplementedError

    def jet(self, t: Sequence[float]) -> tuple[np.ndarray, list[np.ndarray]]:
        """Value and all first partials at ``t`` in one evaluation."""
        return self.value(t), [self.partial(t, j) for j in range(1, self.degree + 1)]

    def _check_direction(self, j: int) -> None:
        if not 1 <= j <= self.degree:
            raise IndexError(f"direction {j} outside 1..{self.degree}")

    def face(self, i: int) -> "SmoothSimplex":
        return face(self, i)

    def degeneracy(self, j: int) -> "SmoothSimplex":
        return degeneracy(self, j)


def _point(t: Sequence[float], n: int) -> np.ndarray:
    t = np.asarray(t, dtype=float).reshape(-1)
    if t.shape[0] != n:
        raise ValueError(f"expected a point of Δ^{n}, got {t.shape[0]} coordinates")
    return t


@dataclass(frozen=True, eq=False)
class ConstantSimplex(SmoothSimplex):
    """The constant identity simplex."""

    degree: int
    size: int
    base: Algebra = PointwiseAlgebra(1)

    def value(self, t):
        _point(t, self.degree)
        return np.eye(self.size, dtype=complex)

    def partial(self, t, j):
        self._check_direction(j)
        return np.zeros((self.size, self.size), dtype=complex)


@dataclass(frozen=True, eq=False)
class ExponentialProduct(SmoothSimplex):
    """``σ(t) = Π_k exp(-(w_k · t) a_k)`` (product taken left to right)."""

    weights: tuple[tuple[float, ...], ...]
    generators: tuple[np.ndarray, ...]
    base: Algebra = PointwiseAlgebra(1)

    def __post_init__(self) -> None:
        gens = tuple(np.asarray(a, dtype=complex) for a in self.generators)
        ws = tuple(tuple(float(v) for v in w) for w in self.weights)
        if len(gens) != len(ws) or not gens:
            raise ValueError("need one weight vector per generator")
        if len({len(w) for w in ws}) != 1:
            raise ValueError("weight vectors must share one length")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "weights", ws)

    @property
    def degree(self) -> int:  # type: ignore[override]
        return len(self.weights[0])

    @property
    def size(self) -> int:  # type: ignore[override]
        return self.generators[0].shape[0]

    def _factors(self, t):
        t = _point(t, self.degree)
        return [expm(-float(np.dot(w, t)) * a) for w, a in zip(self.weights, self.generators)]

    def value(self, t):
        out = np.eye(self.size, dtype=complex)
        for f in self._factors(t):
            out = out @ f
        return out

    def partial(self, t, j):
        self._check_direction(j)
        return self.jet(t)[1][j - 1]

    def jet(self, t):
        fs = self._factors(t)
        r = len(fs)
        eye = np.eye(self.size, dtype=complex)
        prefix = [eye]
        for f in fs:
            prefix.append(prefix[-1] @ f)
        suffix = [eye]
        for f in reversed(fs):
            suffix.append(f @ suffix[-1])
        suffix.reverse()
        # d/dt_j of the k-th factor is -w_kj a_k exp(-(w_k·t) a_k)
        pieces = [prefix[k] @ self.generators[k] @ fs[k] @ suffix[k + 1] for k in range(r)]
        partials = []
        for j in range(self.degree):
            total = np.zeros((self.size, self.size), dtype=complex)
            for k in range(r):
                if self.weights[k][j]:
                    total -= self.weights[k][j] * pieces[k]
            partials.append(total)
        return prefix[-1], partials


def ExponentialPath(a: np.ndarray, base: Algebra = PointwiseAlgebra(1)) -> ExponentialProduct:
    """The 1-simplex ``γ_a(t) = exp(-t a)``."""
    return ExponentialProduct(((1.0,),), (np.asarray(a, dtype=complex),), base)


@dataclass(frozen=True, eq=False)
class PointwiseProduct(SmoothSimplex):
    """``σ(t) = σ_1(t) σ_2(t) ... σ_r(t)`` for simplices of one degree and size."""

    factors: tuple[SmoothSimplex, ...]

    def __post_init__(self) -> None:
        fs = tuple(self.factors)
        if not fs or len({(f.degree, f.size) for f in fs}) != 1:
            raise ValueError("factors must share degree and size")
        object.__setattr__(self, "factors", fs)

    @property
    def degree(self) -> int:  # type: ignore[override]
        return self.factors[0].degree

    @property
    def size(self) -> int:  # type: ignore[override]
        return self.factors[0].size

    @property
    def base(self) -> Algebra:  # type: ignore[override]
        return self.factors[0].base

    def value(self, t):
        out = np.eye(self.size, dtype=complex)
        for f in self.factors:
            out = out @ f.value(t)
        return out

    def partial(self, t, j):
        self._check_direction(j)
        return self.jet(t)[1][j - 1]

    def jet(self, t):
        jets = [f.jet(t) for f in self.factors]
        vals = [v for v, _ in jets]
        partials = []
        for j in range(self.degree):
            total = np.zeros((self.size, self.size), dtype=complex)
            for k in range(len(jets)):
                term = np.eye(self.size, dtype=complex)
                for r, v in enumerate(vals):
                    term = term @ (jets[k][1][j] if r == k else v)
                total += term
            partials.append(total)
        out = np.eye(self.size, dtype=complex)
        for v in vals:
            out = out @ v
        return out, partials


@dataclass(frozen=True, eq=False)
class TensorOfSimplices(SmoothSimplex):
    """``σ ⊗_φ τ`` for simplices of one degree."""

    left: SmoothSimplex
    right: SmoothSimplex
    phi: TensorEmbedding | None = None

    def __post_init__(self) -> None:
        if self.left.degree != self.right.degree:
            raise ValueError("tensor factors must have the same degree")
        phi = self.phi or TensorEmbedding(self.left.size, self.right.size)
        if (phi.p, phi.q) != (self.left.size, self.right.size):
            raise ValueError(f"embedding is {phi.p}x{phi.q}, simplices are {self.left.size} and {self.right.size}")
        object.__setattr__(self, "phi", phi)

    @property
    def degree(self) -> int:  # type: ignore[override]
        return self.left.degree

    @property
    def size(self) -> int:  # type: ignore[override]
        return self.left.size * self.right.size

    @property
    def base(self) -> Algebra:  # type: ignore[override]
        return TensorAlgebra(self.left.base, self.right.base)

    def value(self, t):
        return kron_phi(self.phi, self.left.value(t), self.right.value(t))

    def partial(self, t, j):
        self._check_direction(j)
        return self.jet(t)[1][j - 1]

    def jet(self, t):
        a, da = self.left.jet(t)
        b, db = self.right.jet(t)
        return kron_phi(self.phi, a, b), [kron_phi(self.phi, x, b) + kron_phi(self.phi, a, y)
                                          for x, y in zip(da, db)]


@dataclass(frozen=True, eq=False)
class Reparametrized(SmoothSimplex):
    """``σ'(t) = σ(M t + c) · R`` for an affine map of simplices and a constant ``R``."""

    parent: SmoothSimplex
    M: np.ndarray
    c: np.ndarray
    R: np.ndarray | None = None

    def __post_init__(self) -> None:
        M = np.asarray(self.M, dtype=float)
        if M.ndim != 2 or M.shape[0] != self.parent.degree:
            raise ValueError("coordinate map has the wrong shape")
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "c", np.asarray(self.c, dtype=float).reshape(M.shape[0]))

    @property
    def degree(self) -> int:  # type: ignore[override]
        return self.M.shape[1]

    @property
    def size(self) -> int:  # type: ignore[override]
        return self.parent.size

    @property
    def base(self) -> Algebra:  # type: ignore[override]
        return self.parent.base

    def _u(self, t):
        return self.M @ _point(t, self.degree) + self.c

    def value(self, t):
        v = self.parent.value(self._u(t))
        return v if self.R is None else v @ self.R

    def partial(self, t, j):
        self._check_direction(j)
        return self.jet(t)[1][j - 1]

    def jet(self, t):
        v, dp = self.parent.jet(self._u(t))
        partials = []
        for j in range(self.degree):
            total = np.zeros((self.size, self.size), dtype=complex)
            for i, d in enumerate(dp):
                w = self.M[i, j]
                if w:
                    total += w * d
            partials.append(total if self.R is None else total @ self.R)
        return (v if self.R is None else v @ self.R), partials


@dataclass(frozen=True, eq=False)
class BlockEmbedded(SmoothSimplex):
    """``u ∘ σ``: σ placed on the rows/columns ``injection`` of a larger identity."""

    parent: SmoothSimplex
    injection: tuple[int, ...]
    size: int

    @property
    def degree(self) -> int:  # type: ignore[override]
        return self.parent.degree

    @property
    def base(self) -> Algebra:  # type: ignore[override]
        return self.parent.base

    def _embed(self, X: np.ndarray, fill: float) -> np.ndarray:
        out = fill * np.eye(self.size, dtype=complex)
        idx = np.asarray(self.injection)
        out[np.ix_(idx, idx)] = X
        return out

    def value(self, t):
        return self._embed(self.parent.value(t), 1.0)

    def partial(self, t, j):
        self._check_direction(j)
        return self._embed(self.parent.partial(t, j), 0.0)

    def jet(self, t):
        v, dp = self.parent.jet(t)
        return self._embed(v, 1.0), [self._embed(d, 0.0) for d in dp]


# ---------------------------------------------------------------------------
# simplicial structure


def face_map(n: int, i: int) -> tuple[np.ndarray, np.ndarray]:
    """Affine map ``Δ^{n-1} -> Δ^n`` of the i-th face."""
    if n < 1 or not 0 <= i <= n:
        raise IndexError(f"face d_{i} undefined in degree {n}")
    M = np.zeros((n, n - 1))
    c = np.zeros(n)
    if i == 0:
        M[0, :] = -1.0
        M[1:, :] = np.eye(n - 1)
        c[0] = 1.0
    else:
        rows = [r for r in range(n) if r != i - 1]
        M[rows, :] = np.eye(n - 1)
    return M, c


def degeneracy_map(n: int, j: int) -> np.ndarray:
    """Linear map ``Δ^{n+1} -> Δ^n`` of the j-th degeneracy."""
    if not 0 <= j <= n:
        raise IndexError(f"degeneracy s_{j} undefined in degree {n}")
    D = np.zeros((n, n + 1))
    for r in range(n):
        if j == 0:
            D[r, r + 1] = 1.0
        elif r < j - 1:
            D[r, r] = 1.0
        elif r == j - 1:
            D[r, r] = D[r, r + 1] = 1.0
        else:
            D[r, r + 1] = 1.0
    return D


def face(sigma: SmoothSimplex, i: int) -> SmoothSimplex:
    """``d_i σ``; the 0-th face is renormalised by ``σ(F_1)^{-1}``."""
    n = sigma.degree
    M, c = face_map(n, i)
    R = None
    if i == 0:
        F1 = np.zeros(n)
        F1[0] = 1.0
        R = np.linalg.inv(sigma.value(F1))
    return Reparametrized(sigma, M, c, R)


def degeneracy(sigma: SmoothSimplex, j: int) -> SmoothSimplex:
    D = degeneracy_map(sigma.degree, j)
    return Reparametrized(sigma, D, np.zeros(sigma.degree))


def degenerate(sigma: SmoothSimplex, indices: Sequence[int]) -> SmoothSimplex:
    """``s_{k_r} ... s_{k_1}(σ)`` for ``indices = (k_1, ..., k_r)``, applied first to last."""
    n = sigma.degree
    M = np.eye(n)
    for k in indices:
        M = M @ degeneracy_map(M.shape[1], k)
    return Reparametrized(sigma, M, np.zeros(n))


def degeneracy_coordinates(n: int, indices: Sequence[int]) -> np.ndarray:
    """The linear map of ``s_{k_r} ... s_{k_1}`` on coordinates."""
    M = np.eye(n)
    for k in indices:
        M = M @ degeneracy_map(M.shape[1], k)
    return M


SimplexCombination = list[tuple[int, SmoothSimplex]]


def simplex_shuffle_product(sigma: SmoothSimplex, tau: SmoothSimplex,
                            phi: TensorEmbedding | None = None) -> SimplexCombination:
    """``σ ×_φ τ = Σ sgn(μ, ν) s_ν(σ) ⊗_φ s_μ(τ)`` as a signed list."""
    n, m = sigma.degree, tau.degree
    out: SimplexCombination = []
    for sh in enumerate_shuffles(n, m):
        out.append((sh.sign, TensorOfSimplices(degenerate(sigma, sh.nu), degenerate(tau, sh.mu), phi)))
    return out


# ---------------------------------------------------------------------------
# logarithmic derivatives and wedge integrands


def gamma_j(sigma: SmoothSimplex, j: int, t: Sequence[float]) -> np.ndarray:
    """``Γ_j σ = ∂σ/∂t_j · σ^{-1}`` at ``t``."""
    sigma._check_direction(j)
    v = sigma.value(t)
    _check_invertible(v, t)
    return np.linalg.solve(v.T, sigma.partial(t, j).T).T


def _check_invertible(v: np.ndarray, t) -> None:
    cond = np.linalg.cond(v)
    if not np.isfinite(cond) or cond > SINGULAR_COND:
        raise SingularSimplexError(np.asarray(t, dtype=float), float(cond))


def gammas(sigma: SmoothSimplex, t: Sequence[float]) -> list[np.ndarray]:
    """``[Γ_1 σ(t), ..., Γ_n σ(t)]`` from a single evaluation of the simplex."""
    v, partials = sigma.jet(t)
    _check_invertible(v, t)
    vt = v.T
    return [np.linalg.solve(vt, d.T).T for d in partials]


@lru_cache(maxsize=64)
def _combos(d: int, k: int) -> np.ndarray:
    return np.array(list(itertools.combinations(range(d), k)), dtype=int).reshape(-1, k)


def wedge_minors(mats: Sequence[np.ndarray], combos: np.ndarray) -> np.ndarray:
    """Minors ``det(X[:, I])`` of the letter matrix for each sorted index word ``I``."""
    X = np.stack([np.asarray(m).reshape(-1) for m in mats])
    if len(mats) == 1:
        return X[0, combos[:, 0]]
    return np.linalg.det(np.transpose(X[:, combos], (1, 0, 2)))


def wedge_coefficients(mats: Sequence[np.ndarray]) -> dict[tuple[int, ...], complex]:
    """Coefficients of ``x_1 ∧ ... ∧ x_k`` on sorted flat index words (minors)."""
    k = len(mats)
    if k == 0:
        return {(): 1.0}
    X = np.stack([np.asarray(m).reshape(-1) for m in mats])
    support = np.nonzero(np.any(X != 0, axis=0))[0]
    if len(support) < k:
        return {}
    combos = support[_combos(len(support), k)]
    vals = wedge_minors(mats, combos)
    return {tuple(int(i) for i in c): complex(v) for c, v in zip(combos, vals) if v != 0}


def lie_chain_from_flat(coeffs: dict[tuple[int, ...], complex], size: int, base: Algebra,
                        degree: int) -> LieChain:
    u = unit_key(base)
    words = {tuple((r // size, r % size, u) for r in word): c for word, c in coeffs.items()}
    return LieChain(MatrixAlgebra(base, size), degree, words)


def gamma_wedge(sigma: SmoothSimplex, t: Sequence[float]) -> LieChain:
    """``γ(σ)(t) = Γ_1 σ ∧ ... ∧ Γ_n σ`` as a Lie chain."""
    return lie_chain_from_flat(wedge_coefficients(gammas(sigma, t)), sigma.size, sigma.base, sigma.degree)


# ---------------------------------------------------------------------------
# quadrature


@dataclass(frozen=True)
class QuadratureRule:
    degree: int
    order: int
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, f) -> np.ndarray:
        vals = [w * np.asarray(f(x)) for x, w in zip(self.nodes, self.weights)]
        return np.sum(vals, axis=0)


@lru_cache(maxsize=64)
def simplex_rule(n: int, order: int = DEFAULT_ORDER) -> QuadratureRule:
    """Collapsed tensor Gauss–Legendre rule on ``Δ^n``.

    ``t_1 = u_1``, ``t_2 = (1 - u_1) u_2``, ... with Jacobian
    ``Π_i (1 - u_i)^{n - i}``; weights are positive and sum to ``1/n!``.
    """
    if n == 0:
        return QuadratureRule(0, order, np.zeros((1, 0)), np.ones(1))
    x, w = np.polynomial.legendre.leggauss(order)
    x = (x + 1) / 2
    w = w / 2
    nodes, weights = [], []
    for idx in itertools.product(range(order), repeat=n):
        u = x[list(idx)]
        t = np.empty(n)
        rem = 1.0
        jac = 1.0
        for i in range(n):
            t[i] = rem * u[i]
            jac *= rem
            rem *= 1 - u[i]
        nodes.append(t)
        weights.append(jac * np.prod(w[list(idx)]))
    return QuadratureRule(n, order, np.array(nodes), np.array(weights))


@dataclass(frozen=True)
class LogarithmResult:
    chain: LieChain
    error: float
    order: int


def _integrate_wedge(terms: SimplexCombination, rule: QuadratureRule) -> dict[tuple[int, ...], complex]:
    n, size = terms[0][1].degree, terms[0][1].size
    combos = _combos(size * size, n)
    acc = np.zeros(len(combos), dtype=complex)
    for coeff, sigma in terms:
        for node, w in zip(rule.nodes, rule.weights):
            acc += (coeff * w) * wedge_minors(gammas(sigma, node), combos)
    return {tuple(int(i) for i in c): complex(v) for c, v in zip(combos, acc) if v != 0}


def logarithm_L(sigma: SmoothSimplex | SimplexCombination, order: int = DEFAULT_ORDER,
                refine: int = 2) -> LogarithmResult:
    """``L(σ) = ∫_{Δ^n} Γ_1 σ ∧ ... ∧ Γ_n σ dt`` by quadrature.

    Accepts a single simplex or a signed combination of simplices of one
    degree and size.  The error estimate is ten times the change under an
    order refinement by ``refine`` (plus a rounding floor).
    """
    terms: SimplexCombination = [(1, sigma)] if isinstance(sigma, SmoothSimplex) else list(sigma)
    if not terms:
        raise ValueError("empty simplex combination")
    n, size, base = terms[0][1].degree, terms[0][1].size, terms[0][1].base
    if any((s.degree, s.size) != (n, size) for _, s in terms):
        raise ValueError("all simplices must share degree and size")
    coarse = _integrate_wedge(terms, simplex_rule(n, order))
    fine = _integrate_wedge(terms, simplex_rule(n, order + refine)) if n > 0 else coarse
    scale = max([1.0] + [abs(v) for v in fine.values()])
    change = max((abs(coarse.get(k, 0) - fine.get(k, 0)) for k in set(coarse) | set(fine)), default=0.0)
    error = 10 * change + 64 * np.finfo(float).eps * scale
    return LogarithmResult(lie_chain_from_flat(coarse, size, base, n), float(error), order)


def lie_block_image(x: LieChain, injection: Sequence[int], size: int) -> LieChain:
    """Image of a Lie chain under the (non-unital) block embedding of matrices."""
    alg = x.algebra
    words = {tuple((injection[i], injection[j], b) for i, j, b in word): c for word, c in x.coeffs.items()}
    return LieChain(MatrixAlgebra(alg.base, size), x.degree, words)
