"""Desk-scale odd Fredholm modules, the index cocycle and the cochain T.

Two families are provided.  The Toeplitz module is the Hardy-space model for
Laurent polynomials on the Fourier modes ``-N..N``; every trace is taken only
over modes where the truncated products agree with the infinite ones, and the
window is checked to be wide enough, so results are exact.  The commuting
module represents polynomials in one normal matrix on a finite-dimensional
space together with an arbitrary projection.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .algebra import (
    Algebra,
    AlgebraMismatch,
    Element,
    LaurentAlgebra,
    MatrixAlgebra,
    OperatorAlgebra,
    PointwiseAlgebra,
    WindowOverflow,
    laurent_operator,
    spread,
)
from .chains import HochschildChain, cyclic_t
from .reduce import csum, ordered_map

# The index cocycle is normalised as ``(-1)^p`` times the literal trace formula
# ``c_p / 4^p Tr(F[F,a_0]...[F,a_{2p-1}])``.  With this orientation
# ``T∘(1+t) = τ`` holds in every degree and the p = 1 character of (z, 1/z)
# on the Hardy space is +1, i.e. ``-Tr[PaP, PbP]``.
COCYCLE_ORIENTATION = -1


class WindowOverflowError(WindowOverflow):
    """The band window is too narrow for an exact trace."""


class ModuleError(ValueError):
    """Invalid module data (non-projection, non-normal generator, ...)."""


def c_const(p: int) -> int:
    """``c_p = (-1)^{p-1} (2p-1)! / (p-1)!``."""
    if p < 1:
        raise ValueError("p must be >= 1")
    return (-1) ** (p - 1) * math.factorial(2 * p - 1) // math.factorial(p - 1)


@dataclass(eq=False)
class FredholmModule:
    """An odd Fredholm module ``(F, H)`` with ``F = 2P - 1`` and a representation of ``algebra``.

    ``window`` is the band half-width ``N`` for the Toeplitz model and ``None``
    for finite-dimensional modules.  ``rep`` maps an element of ``algebra`` to
    its operator on ``H``.
    """

    algebra: Algebra
    P: np.ndarray
    p: int
    kind: str
    window: int | None = None
    _rep: Any = field(default=None, repr=False)
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self.P = np.asarray(self.P, dtype=complex)
        self.dim = self.P.shape[0]
        self.Q = np.eye(self.dim) - self.P
        self.F = self.P - self.Q

    # -- representation -------------------------------------------------------
    def _base_rep(self, x: Element) -> np.ndarray:
        if x.algebra != self.algebra:
            raise AlgebraMismatch(f"module acts on {self.algebra!r}, element is over {x.algebra!r}")
        return self._rep(x)

    def represent(self, x: Element) -> np.ndarray:
        """Operator of an algebra element, or block operator of a matrix over the algebra.

        A ``k x k`` matrix acts on ``C^k ⊗ H`` with block ``(i, j)`` equal to
        the operator of its ``(i, j)`` entry.
        """
        alg = x.algebra
        if isinstance(alg, MatrixAlgebra) and alg.base == self.algebra:
            k, d = alg.size, self.dim
            out = np.zeros((k * d, k * d), dtype=complex)
            entries: dict[tuple[int, int], dict] = {}
            for (i, j, b), c in x.coeffs.items():
                entries.setdefault((i, j), {})[b] = c
            for (i, j), coeffs in entries.items():
                out[i * d:(i + 1) * d, j * d:(j + 1) * d] = self._base_rep(Element(alg.base, coeffs))
            return out
        return self._base_rep(x)

    def represent_key(self, key: Any) -> np.ndarray:
        """Cached operator of a single basis key of the algebra."""
        m = self._cache.get(key)
        if m is None:
            m = self._base_rep(Element(self.algebra, {key: 1.0}))
            m.setflags(write=False)
            self._cache[key] = m
        return m

    def blocks(self, k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``P``, ``1 - P`` and ``F`` amplified to ``C^k ⊗ H``."""
        if k == 1:
            return self.P, self.Q, self.F
        I = np.eye(k)
        return np.kron(I, self.P), np.kron(I, self.Q), np.kron(I, self.F)

    # -- traces -----------------------------------------------------------------
    def spread_of(self, x: Element) -> int:
        return spread(x) if self.window is not None else 0

    def trace(self, M: np.ndarray, total_spread: int = 0, max_spread: int = 0) -> complex:
        """Trace of an operator product assembled from truncated factors.

        For the Toeplitz model the sum runs over modes ``|k| <= N - L`` with
        ``L`` the total band spread of the factors; these diagonal entries are
        exact, and every nonzero diagonal entry of a product containing a
        commutator with ``F`` lies within the largest single spread of the
        origin, which the window check guarantees is covered.
        """
        if self.window is None:
            return complex(np.trace(M))
        N = self.window
        interior = N - total_spread
        if interior < max_spread:
            raise WindowOverflowError(
                f"window N={N} too narrow: need N >= {total_spread + max_spread} "
                f"(total spread {total_spread}, largest spread {max_spread})"
            )
        d = self.dim
        k = M.shape[0] // d
        idx = np.concatenate([b * d + np.arange(N - interior, N + interior + 1) for b in range(k)])
        return complex(np.sum(M[idx, idx]))

    def check(self, tol: float = 1e-12) -> None:
        P = self.P
        if np.linalg.norm(P @ P - P) > tol * max(1.0, np.linalg.norm(P)):
            raise ModuleError("P is not idempotent")
        if np.linalg.norm(P - P.conj().T) > tol * max(1.0, np.linalg.norm(P)):
            raise ModuleError("P is not self-adjoint")


# ---------------------------------------------------------------------------
# constructors


def make_toeplitz_module(N: int, p: int = 1) -> FredholmModule:
    """Fourier modes ``-N..N``; ``P`` projects onto the modes ``>= 0``."""
    if N < 1:
        raise ValueError("window N must be >= 1")
    alg = LaurentAlgebra()
    P = np.diag([1.0 if k >= 0 else 0.0 for k in range(-N, N + 1)]).astype(complex)
    return FredholmModule(alg, P, p, "toeplitz", N, lambda x: laurent_operator(x, N))


def make_commuting_module(generator: np.ndarray, P: np.ndarray, p: int = 1,
                          tol: float = 1e-10) -> FredholmModule:
    """Polynomials in a normal matrix ``generator`` with an arbitrary projection ``P``."""
    X = np.asarray(generator, dtype=complex)
    P = np.asarray(P, dtype=complex)
    if X.ndim != 2 or X.shape[0] != X.shape[1] or P.shape != X.shape:
        raise ModuleError("generator and projection must be square of one size")
    scale = max(1.0, np.linalg.norm(X) ** 2)
    if np.linalg.norm(X @ X.conj().T - X.conj().T @ X) > tol * scale:
        raise ModuleError("generator is not normal")
    if np.linalg.norm(P @ P - P) > tol or np.linalg.norm(P - P.conj().T) > tol:
        raise ModuleError("P is not an orthogonal projection")
    alg = OperatorAlgebra(X)
    return FredholmModule(alg, P, p, "commuting", None, alg.evaluate)


def make_pointwise_module(P: np.ndarray, basis: np.ndarray | None = None, p: int = 1,
                          tol: float = 1e-10) -> FredholmModule:
    """``C^k`` acting diagonally in an orthonormal ``basis`` (columns), with projection ``P``."""
    P = np.asarray(P, dtype=complex)
    k = P.shape[0]
    U = np.eye(k, dtype=complex) if basis is None else np.asarray(basis, dtype=complex)
    if np.linalg.norm(U.conj().T @ U - np.eye(k)) > tol:
        raise ModuleError("basis must be unitary")
    if np.linalg.norm(P @ P - P) > tol or np.linalg.norm(P - P.conj().T) > tol:
        raise ModuleError("P is not an orthogonal projection")
    alg = PointwiseAlgebra(k)
    return FredholmModule(alg, P, p, "pointwise", None, lambda x: (U * alg.values(x)) @ U.conj().T)


# ---------------------------------------------------------------------------
# cochains


def _key_spreads(module: FredholmModule, key_tuple: tuple) -> tuple[int, int]:
    if module.window is None:
        return 0, 0
    s = [abs(k) for k in key_tuple]
    return sum(s), max(s, default=0)


def _check_chain(module: FredholmModule, x: HochschildChain) -> None:
    if x.algebra != module.algebra:
        raise AlgebraMismatch(f"chain over {x.algebra!r}, module acts on {module.algebra!r}")
    if x.degree != 2 * module.p - 1:
        raise ValueError(f"cochain of a 2p = {2 * module.p} summable module needs degree {2 * module.p - 1}")


def literal_tau_ops(module: FredholmModule, ops: Sequence[np.ndarray], total_spread: int = 0,
                    max_spread: int = 0) -> complex:
    """``c_p / 4^p Tr(F [F, x_0] ... [F, x_{2p-1}])`` for operators on ``H``."""
    p = len(ops) // 2
    F = module.F
    M = F
    for x in ops:
        M = M @ (F @ x - x @ F)
    return c_const(p) / 4 ** p * module.trace(M, total_spread, max_spread)


def T_ops(module: FredholmModule, ops: Sequence[np.ndarray], total_spread: int = 0,
          max_spread: int = 0) -> complex:
    """``c_p Tr(P x_0 (1-P) x_1 P ... P x_{2p-2} (1-P) x_{2p-1} P)``."""
    p = len(ops) // 2
    P, Q = module.P, module.Q
    M = P
    for i in range(p):
        M = M @ ops[2 * i] @ Q @ ops[2 * i + 1] @ P
    return c_const(p) * module.trace(M, total_spread, max_spread)


def _evaluate_chain(module: FredholmModule, x: HochschildChain, fn, threads: int) -> complex:
    _check_chain(module, x)
    items = sorted(x.coeffs.items(), key=lambda kv: repr(kv[0]))

    def one(item):
        key, c = item
        ops = [module.represent_key(k) for k in key]
        return c * fn(module, ops, *_key_spreads(module, key))

    return csum(ordered_map(one, items, threads))


def literal_tau(module: FredholmModule, x: HochschildChain, threads: int = 1) -> complex:
    """The trace formula for the index cocycle exactly as written, without orientation."""
    return _evaluate_chain(module, x, literal_tau_ops, threads)


def tau_cocycle(module: FredholmModule, x: HochschildChain, threads: int = 1) -> complex:
    """``τ_{2p-1}(x)``, oriented by :data:`COCYCLE_ORIENTATION`."""
    return COCYCLE_ORIENTATION ** module.p * literal_tau(module, x, threads)


def T_cochain(module: FredholmModule, x: HochschildChain, threads: int = 1) -> complex:
    return _evaluate_chain(module, x, T_ops, threads)


def tau_on_elements(module: FredholmModule, xs: Sequence[Element]) -> complex:
    """``τ`` on a single tuple of algebra elements (multilinear evaluation)."""
    ops = [module.represent(x) for x in xs]
    spreads = [module.spread_of(x) for x in xs]
    val = literal_tau_ops(module, ops, sum(spreads), max(spreads, default=0))
    return COCYCLE_ORIENTATION ** (len(xs) // 2) * val


def T_identity_residuals(module: FredholmModule, x: HochschildChain) -> dict[str, float]:
    """Residuals of ``T∘t² = T``, ``T∘(1+t) = τ``, ``T∘N = p τ`` and ``τ∘t = τ``."""
    t1 = cyclic_t(x)
    t2 = cyclic_t(t1)
    T0, T1, T2 = T_cochain(module, x), T_cochain(module, t1), T_cochain(module, t2)
    tau = tau_cocycle(module, x)
    TN = T0
    y = x
    for _ in range(x.degree):
        y = cyclic_t(y)
        TN += T_cochain(module, y)
    tau_t = tau_cocycle(module, t1)
    scale = max(1.0, abs(tau), abs(T0), abs(T1))
    return {
        "T∘t² = T": abs(T2 - T0) / scale,
        "T∘(1+t) = τ": abs(T0 + T1 - tau) / scale,
        "T∘N = p·τ": abs(TN - module.p * tau) / scale,
        "τ∘t = τ": abs(tau_t - tau) / scale,
    }


# ---------------------------------------------------------------------------
# summability and oracles


@dataclass(frozen=True)
class SchattenReport:
    singular_values: tuple[tuple[float, ...], ...]
    norms: tuple[dict[int, float], ...]


def summability_report(module: FredholmModule, elements: Sequence[Element], tol: float = 1e-12) -> SchattenReport:
    """Singular values of ``[F, π(a)]`` and their Schatten q-norms for ``q = 1..2p``."""
    svs, norms = [], []
    for a in elements:
        A = module.represent(a)
        F = module.blocks(A.shape[0] // module.dim)[2]
        s = np.linalg.svd(F @ A - A @ F, compute_uv=False)
        s = s[s > tol * max(1.0, s.max(initial=0.0))]
        svs.append(tuple(float(v) for v in s))
        norms.append({q: float(np.sum(s ** q) ** (1.0 / q)) for q in range(1, 2 * module.p + 1)})
    return SchattenReport(tuple(svs), tuple(norms))


def winding_oracle(f: Element, g: Element) -> complex:
    """``Σ_n n g_n f_{-n}``, the trace of ``[T_f, T_g]`` on the Hardy space."""
    return csum(n * c * f.coeffs.get(-n, 0) for n, c in g.coeffs.items())


def compressed_commutator(module: FredholmModule, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    P = module.P if x.shape[0] == module.dim else module.blocks(x.shape[0] // module.dim)[0]
    return P @ x @ P @ y @ P - P @ y @ P @ x @ P


def commutator_relation_residual(module: FredholmModule, x: np.ndarray, y: np.ndarray) -> float:
    """``[PxP, PyP] + Px(1-P)yP - Py(1-P)xP`` for commuting ``x``, ``y`` (max abs entry)."""
    P, Q = module.P, module.Q
    R = compressed_commutator(module, x, y) + P @ x @ Q @ y @ P - P @ y @ Q @ x @ P
    if module.window is not None:
        # truncated products are exact only away from the window edges
        N = module.window
        edge = 2 * N // 3
        R = R[N - edge:N + edge + 1, N - edge:N + edge + 1]
    return float(np.max(np.abs(R), initial=0.0))
