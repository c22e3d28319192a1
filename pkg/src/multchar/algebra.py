"""Coefficient algebras, matrices over them and the tensor embedding.

An :class:`Element` is a finite complex combination of basis keys of one
:class:`Algebra`.  Keys are ints or (nested) tuples of ints, so the keys of a
single algebra are always mutually comparable; chains rely on this to sort
wedge letters.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

import numpy as np


class AlgebraMismatch(TypeError):
    """Operands live in different algebras."""


class WindowOverflow(ValueError):
    """An element does not fit in the exact band window of a representation."""


class Algebra:
    """Associative unital algebra with a distinguished basis."""

    commutative: bool = False

    def mul_basis(self, a: Any, b: Any) -> dict[Any, complex]:
        raise NotImplementedError

    def unit_coeffs(self) -> dict[Any, complex]:
        raise NotImplementedError

    def check_key(self, key: Any) -> None:
        pass

    # -- conveniences -------------------------------------------------------
    def element(self, coeffs: Mapping[Any, complex]) -> "Element":
        for k in coeffs:
            self.check_key(k)
        return Element(self, coeffs)

    def basis(self, key: Any) -> "Element":
        self.check_key(key)
        return Element(self, {key: 1.0})

    def unit(self) -> "Element":
        return Element(self, self.unit_coeffs())

    def zero(self) -> "Element":
        return Element(self, {})

    def mul(self, x: "Element", y: "Element") -> "Element":
        out: dict[Any, complex] = {}
        for ka, ca in x.coeffs.items():
            for kb, cb in y.coeffs.items():
                for k, c in self.mul_basis(ka, kb).items():
                    out[k] = out.get(k, 0) + ca * cb * c
        return Element(self, out)


class Element:
    """Immutable finite linear combination of basis keys."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: Algebra, coeffs: Mapping[Any, complex]):
        self.algebra = algebra
        self.coeffs = {k: complex(v) for k, v in coeffs.items() if v != 0}

    def _check(self, other: "Element") -> None:
        if not isinstance(other, Element):
            raise TypeError(f"expected Element, got {type(other).__name__}")
        if other.algebra != self.algebra:
            raise AlgebraMismatch(f"{self.algebra!r} vs {other.algebra!r}")

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return Element(self.algebra, out)

    def __neg__(self) -> "Element":
        return Element(self.algebra, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def __mul__(self, other: Any) -> "Element":
        if isinstance(other, Element):
            self._check(other)
            return self.algebra.mul(self, other)
        return Element(self.algebra, {k: v * other for k, v in self.coeffs.items()})

    def __rmul__(self, scalar: Any) -> "Element":
        if isinstance(scalar, Element):
            return scalar.__mul__(self)
        return Element(self.algebra, {k: scalar * v for k, v in self.coeffs.items()})

    def __repr__(self) -> str:
        inner = ", ".join(f"{k!r}: {v:.6g}" for k, v in sorted(self.coeffs.items()))
        return f"Element({self.algebra!r}, {{{inner}}})"

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(abs(v) <= tol for v in self.coeffs.values())

    def close_to(self, other: "Element", tol: float = 1e-10) -> bool:
        self._check(other)
        diff = self - other
        scale = max([1.0] + [abs(v) for v in self.coeffs.values()]
                    + [abs(v) for v in other.coeffs.values()])
        return diff.is_zero(tol * scale)

    def norm(self) -> float:
        return float(sum(abs(v) for v in self.coeffs.values()))


# ---------------------------------------------------------------------------
# concrete commutative algebras


@dataclass(frozen=True)
class PointwiseAlgebra(Algebra):
    """``C^k`` with componentwise product; key ``i`` is the i-th idempotent."""

    k: int
    commutative = True

    def check_key(self, key: Any) -> None:
        if not (isinstance(key, (int, np.integer)) and 0 <= key < self.k):
            raise KeyError(f"slot {key!r} outside C^{self.k}")

    def mul_basis(self, a: int, b: int) -> dict[Any, complex]:
        return {a: 1.0} if a == b else {}

    def mul(self, x: Element, y: Element) -> Element:
        return Element(self, {i: v * y.coeffs[i] for i, v in x.coeffs.items() if i in y.coeffs})

    def unit_coeffs(self) -> dict[Any, complex]:
        return {i: 1.0 for i in range(self.k)}

    def vector(self, values: Sequence[complex]) -> Element:
        if len(values) != self.k:
            raise ValueError(f"expected {self.k} slots, got {len(values)}")
        return Element(self, dict(enumerate(values)))

    def values(self, x: Element) -> np.ndarray:
        return np.array([x.coeffs.get(i, 0) for i in range(self.k)], dtype=complex)


@dataclass(frozen=True)
class LaurentAlgebra(Algebra):
    """Laurent polynomials ``C[z, 1/z]``; key ``d`` is ``z**d``."""

    commutative = True

    def check_key(self, key: Any) -> None:
        if not isinstance(key, (int, np.integer)):
            raise KeyError(f"Laurent degree must be an int, got {key!r}")

    def mul_basis(self, a: int, b: int) -> dict[Any, complex]:
        return {a + b: 1.0}

    def unit_coeffs(self) -> dict[Any, complex]:
        return {0: 1.0}

    def monomial(self, d: int, c: complex = 1.0) -> Element:
        return Element(self, {int(d): c})


@dataclass(frozen=True, eq=False)
class OperatorAlgebra(Algebra):
    """Polynomials in one fixed normal operator; key ``d`` is ``X**d``.

    Two instances are equal only if they are the same object, which is how the
    shared generator handle is enforced.
    """

    generator: np.ndarray = field(repr=False)
    commutative = True

    def __post_init__(self) -> None:
        X = np.asarray(self.generator, dtype=complex)
        if X.ndim != 2 or X.shape[0] != X.shape[1]:
            raise ValueError("generator must be a square matrix")
        X = X.copy()
        X.setflags(write=False)
        object.__setattr__(self, "generator", X)
        object.__setattr__(self, "_powers", [np.eye(X.shape[0], dtype=complex)])

    def __repr__(self) -> str:
        return f"OperatorAlgebra(dim={self.generator.shape[0]}, id={id(self):#x})"

    def check_key(self, key: Any) -> None:
        if not (isinstance(key, (int, np.integer)) and key >= 0):
            raise KeyError(f"polynomial degree must be a non-negative int, got {key!r}")

    def mul_basis(self, a: int, b: int) -> dict[Any, complex]:
        return {a + b: 1.0}

    def unit_coeffs(self) -> dict[Any, complex]:
        return {0: 1.0}

    def poly(self, coeffs: Sequence[complex]) -> Element:
        return Element(self, dict(enumerate(coeffs)))

    def power(self, d: int) -> np.ndarray:
        powers = self._powers  # type: ignore[attr-defined]
        while len(powers) <= d:
            powers.append(powers[-1] @ self.generator)
        return powers[d]

    def evaluate(self, x: Element) -> np.ndarray:
        n = self.generator.shape[0]
        out = np.zeros((n, n), dtype=complex)
        for d, c in x.coeffs.items():
            out += c * self.power(d)
        return out


# ---------------------------------------------------------------------------
# matrices and tensor products


@dataclass(frozen=True)
class MatrixAlgebra(Algebra):
    """``M_size(base)``; key ``(i, j, b)`` is the elementary matrix ``E_ij(b)``."""

    base: Algebra
    size: int

    @property
    def commutative(self) -> bool:  # type: ignore[override]
        return self.size == 1 and self.base.commutative

    def check_key(self, key: Any) -> None:
        i, j, b = key
        if not (0 <= i < self.size and 0 <= j < self.size):
            raise KeyError(f"matrix index {(i, j)} outside {self.size}x{self.size}")
        self.base.check_key(b)

    def mul_basis(self, a: tuple, b: tuple) -> dict[Any, complex]:
        i, j, ka = a
        k, l, kb = b
        if j != k:
            return {}
        return {(i, l, key): c for key, c in self.base.mul_basis(ka, kb).items()}

    def mul(self, x: Element, y: Element) -> Element:
        by_row: dict[int, list] = {}
        for (k, l, kb), cb in y.coeffs.items():
            by_row.setdefault(k, []).append((l, kb, cb))
        out: dict[Any, complex] = {}
        base = self.base
        for (i, j, ka), ca in x.coeffs.items():
            for l, kb, cb in by_row.get(j, ()):
                for key, c in base.mul_basis(ka, kb).items():
                    kk = (i, l, key)
                    out[kk] = out.get(kk, 0) + ca * cb * c
        return Element(self, out)

    def unit_coeffs(self) -> dict[Any, complex]:
        return {(i, i, b): c for i in range(self.size) for b, c in self.base.unit_coeffs().items()}

    def entry(self, x: Element, i: int, j: int) -> Element:
        return Element(self.base, {b: c for (r, s, b), c in x.coeffs.items() if r == i and s == j})


@dataclass(frozen=True)
class TensorAlgebra(Algebra):
    """``left ⊗ right``; key ``(ka, kb)`` is ``ka ⊗ kb``."""

    left: Algebra
    right: Algebra

    @property
    def commutative(self) -> bool:  # type: ignore[override]
        return self.left.commutative and self.right.commutative

    def check_key(self, key: Any) -> None:
        ka, kb = key
        self.left.check_key(ka)
        self.right.check_key(kb)

    def mul_basis(self, a: tuple, b: tuple) -> dict[Any, complex]:
        out: dict[Any, complex] = {}
        for ka, ca in self.left.mul_basis(a[0], b[0]).items():
            for kb, cb in self.right.mul_basis(a[1], b[1]).items():
                out[(ka, kb)] = out.get((ka, kb), 0) + ca * cb
        return out

    def unit_coeffs(self) -> dict[Any, complex]:
        return tensor(self.left.unit(), self.right.unit()).coeffs


def tensor(x: Element, y: Element) -> Element:
    alg = TensorAlgebra(x.algebra, y.algebra)
    return Element(alg, {(ka, kb): ca * cb for ka, ca in x.coeffs.items() for kb, cb in y.coeffs.items()})


def alg_mul(x: Element, y: Element) -> Element:
    if x.algebra != y.algebra:
        raise AlgebraMismatch(f"cannot multiply {x.algebra!r} by {y.algebra!r}")
    return x * y


def multiply_out(x: Element) -> Element:
    """The multiplication map ``A ⊗ A -> A`` of a commutative algebra."""
    alg = x.algebra
    if not isinstance(alg, TensorAlgebra) or alg.left != alg.right:
        raise AlgebraMismatch("multiply_out needs an element of A ⊗ A")
    base = alg.left
    if not base.commutative:
        raise AlgebraMismatch("the multiplication map is a homomorphism only for commutative A")
    out: dict[Any, complex] = {}
    for (ka, kb), c in x.coeffs.items():
        for k, v in base.mul_basis(ka, kb).items():
            out[k] = out.get(k, 0) + c * v
    return Element(base, out)


def matrix(rows: Sequence[Sequence[Element]], base: Algebra | None = None) -> Element:
    """Assemble a square matrix over ``base`` from a grid of elements."""
    m = len(rows)
    if any(len(r) != m for r in rows):
        raise ValueError("matrix must be square")
    if base is None:
        if m == 0:
            raise ValueError("cannot infer the base algebra of an empty matrix")
        base = rows[0][0].algebra
    alg = MatrixAlgebra(base, m)
    out: dict[Any, complex] = {}
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            if x.algebra != base:
                raise AlgebraMismatch(f"entry ({i},{j}) is over {x.algebra!r}, not {base!r}")
            for b, c in x.coeffs.items():
                out[(i, j, b)] = c
    return Element(alg, out)


def elementary(i: int, j: int, x: Element, size: int) -> Element:
    alg = MatrixAlgebra(x.algebra, size)
    alg.check_key((i, j, next(iter(x.algebra.unit_coeffs()))))
    return Element(alg, {(i, j, b): c for b, c in x.coeffs.items()})


def scalar_matrix(x: Element, size: int) -> Element:
    return Element(MatrixAlgebra(x.algebra, size),
                   {(i, i, b): c for i in range(size) for b, c in x.coeffs.items()})


def as_matrix(x: Element) -> Element:
    """View an element of a base algebra as a 1x1 matrix (matrices pass through)."""
    if isinstance(x.algebra, MatrixAlgebra):
        return x
    return scalar_matrix(x, 1)


def matrix_trace_TR(a: Element) -> Element:
    """Sum of the diagonal entries, an element of the base algebra."""
    alg = a.algebra
    if not isinstance(alg, MatrixAlgebra):
        return a
    out: dict[Any, complex] = {}
    for (i, j, b), c in a.coeffs.items():
        if i == j:
            out[b] = out.get(b, 0) + c
    return Element(alg.base, out)


@dataclass(frozen=True)
class TensorEmbedding:
    """Bijection ``{0..p-1} x {0..q-1} -> {0..pq-1}``.

    The default order is row-major, ``(i, k) -> i*q + k``, which matches
    ``numpy.kron``; any other bijection may be given as ``order``.
    """

    p: int
    q: int
    order: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.order is not None:
            order = tuple(int(v) for v in self.order)
            if sorted(order) != list(range(self.p * self.q)):
                raise ValueError("order must be a permutation of range(p*q)")
            object.__setattr__(self, "order", order)

    def __call__(self, i: int, k: int) -> int:
        r = i * self.q + k
        return r if self.order is None else self.order[r]

    def key(self, a: tuple, b: tuple) -> tuple:
        """Image of the key pair ``E_ij(ka) ⊗ E_kl(kb)``."""
        (i, j, ka), (k, l, kb) = a, b
        return (self(i, k), self(j, l), (ka, kb))

    def target(self, left: MatrixAlgebra, right: MatrixAlgebra) -> MatrixAlgebra:
        if left.size != self.p or right.size != self.q:
            raise ValueError(
                f"embedding is {self.p}x{self.q}, matrices are {left.size} and {right.size}"
            )
        return MatrixAlgebra(TensorAlgebra(left.base, right.base), self.p * self.q)


def kron_embed(phi: TensorEmbedding, a: Element, b: Element) -> Element:
    """``a ⊗_φ b``: the entry at ``(φ(i,k), φ(j,l))`` is ``a_ij ⊗ b_kl``."""
    if not isinstance(a.algebra, MatrixAlgebra) or not isinstance(b.algebra, MatrixAlgebra):
        raise AlgebraMismatch("kron_embed needs two matrix elements")
    alg = phi.target(a.algebra, b.algebra)
    return Element(alg, {phi.key(ka, kb): ca * cb
                         for ka, ca in a.coeffs.items() for kb, cb in b.coeffs.items()})


def phi_star(phi: TensorEmbedding, x: Element) -> Element:
    """Apply the homomorphism ``M_p(A) ⊗ M_q(B) -> M_pq(A ⊗ B)`` to ``x``."""
    alg = x.algebra
    if not (isinstance(alg, TensorAlgebra) and isinstance(alg.left, MatrixAlgebra)
            and isinstance(alg.right, MatrixAlgebra)):
        raise AlgebraMismatch("phi_star needs an element of M_p(A) ⊗ M_q(B)")
    target = phi.target(alg.left, alg.right)
    return Element(target, {phi.key(ka, kb): c for (ka, kb), c in x.coeffs.items()})


def block_embed(x: Element, injection: Sequence[int], size: int, unital: bool = True) -> Element:
    """Place ``x`` in ``M_size`` at rows/cols ``injection`` (identity elsewhere if unital)."""
    alg = x.algebra
    if not isinstance(alg, MatrixAlgebra):
        raise AlgebraMismatch("block_embed needs a matrix element")
    out = {(injection[i], injection[j], b): c for (i, j, b), c in x.coeffs.items()}
    if unital:
        hit = set(injection)
        for r in range(size):
            if r not in hit:
                for b, c in alg.base.unit_coeffs().items():
                    out[(r, r, b)] = c
    return Element(MatrixAlgebra(alg.base, size), out)


# ---------------------------------------------------------------------------
# dense matrices for numerically valued entries


def is_scalar_algebra(alg: Algebra) -> bool:
    """True when ``alg`` is one-dimensional (C, C ⊗ C, ...)."""
    if isinstance(alg, PointwiseAlgebra):
        return alg.k == 1
    if isinstance(alg, TensorAlgebra):
        return is_scalar_algebra(alg.left) and is_scalar_algebra(alg.right)
    return False


def unit_key(alg: Algebra) -> Any:
    (k,) = alg.unit_coeffs()
    return k


def from_dense(M: np.ndarray, base: Algebra | None = None) -> Element:
    """A complex matrix as an element of ``M_n(base)`` for a one-dimensional base."""
    base = PointwiseAlgebra(1) if base is None else base
    if not is_scalar_algebra(base):
        raise AlgebraMismatch("from_dense needs a one-dimensional base algebra")
    u = unit_key(base)
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    rows, cols = np.nonzero(M)
    return Element(MatrixAlgebra(base, n), {(int(i), int(j), u): M[i, j] for i, j in zip(rows, cols)})


def to_dense(x: Element) -> np.ndarray:
    alg = x.algebra
    if not isinstance(alg, MatrixAlgebra) or not is_scalar_algebra(alg.base):
        raise AlgebraMismatch("to_dense needs a matrix over a one-dimensional algebra")
    out = np.zeros((alg.size, alg.size), dtype=complex)
    for (i, j, _), c in x.coeffs.items():
        out[i, j] += c
    return out


# ---------------------------------------------------------------------------
# operator models


def laurent_operator(x: Element, N: int) -> np.ndarray:
    """Multiplication by a Laurent polynomial on Fourier modes ``-N..N``.

    Mode ``k`` sits at index ``k + N``; ``z`` sends mode ``k`` to ``k + 1``.
    """
    if not isinstance(x.algebra, LaurentAlgebra):
        raise AlgebraMismatch("laurent_operator needs a Laurent element")
    dim = 2 * N + 1
    out = np.zeros((dim, dim), dtype=complex)
    for d, c in x.coeffs.items():
        if abs(d) > N:
            raise WindowOverflow(f"degree {d} does not fit in the window [-{N}, {N}]")
        idx = np.arange(max(0, -d), min(dim, dim - d))
        out[idx + d, idx] += c
    return out


def spread(x: Element) -> int:
    """Band half-width of the operator of ``x`` (0 for finite-dimensional models)."""
    alg = x.algebra
    if isinstance(alg, LaurentAlgebra):
        return max((abs(d) for d in x.coeffs), default=0)
    if isinstance(alg, MatrixAlgebra):
        return max((spread(Element(alg.base, {b: c})) for (_, _, b), c in x.coeffs.items()), default=0)
    return 0


def terms_of(x: Element) -> Iterable[tuple[Any, complex]]:
    return x.coeffs.items()
