"""Hochschild and Lie chains with the operators and products between them.

Chains are stored on the basis level: a Hochschild chain of degree n over an
algebra ``A`` maps tuples of ``n + 1`` basis keys of ``A`` to coefficients, a
Lie chain maps sorted tuples of ``n`` distinct keys of a matrix algebra to
coefficients.  Element-level tuples and wedge words are expanded
multilinearly on construction.
"""
from __future__ import annotations

import itertools
from typing import Any, Iterable, Iterator, Mapping, Sequence

from .algebra import (
    Algebra,
    AlgebraMismatch,
    Element,
    MatrixAlgebra,
    TensorAlgebra,
    TensorEmbedding,
)
from .perms import enumerate_shuffles, permutations, sign

DEFAULT_TOL = 1e-10

Key = Any
Slot = Mapping[Key, complex]


def _accumulate(out: dict, key: tuple, value: complex) -> None:
    v = out.get(key, 0) + value
    if v == 0:
        out.pop(key, None)
    else:
        out[key] = v


def _expand(slots: Sequence[Slot]) -> Iterator[tuple[tuple, complex]]:
    """All basis tuples of a product of slot combinations with their coefficients."""
    for combo in itertools.product(*(list(s.items()) for s in slots)):
        c = 1
        for _, v in combo:
            c *= v
        yield tuple(k for k, _ in combo), c


def _residual(a: Mapping, b: Mapping) -> float:
    keys = set(a) | set(b)
    if not keys:
        return 0.0
    diff = max(abs(a.get(k, 0) - b.get(k, 0)) for k in keys)
    scale = max([1.0] + [abs(v) for v in a.values()] + [abs(v) for v in b.values()])
    return diff / scale


class HochschildChain:
    """Finite combination of ``a_0 ⊗ ... ⊗ a_n`` over one algebra."""

    __slots__ = ("algebra", "degree", "coeffs")

    def __init__(self, algebra: Algebra, degree: int, coeffs: Mapping[tuple, complex] | None = None):
        if degree < 0:
            raise ValueError("degree must be non-negative")
        self.algebra = algebra
        self.degree = degree
        self.coeffs: dict[tuple, complex] = {}
        for k, v in (coeffs or {}).items():
            if len(k) != degree + 1:
                raise ValueError(f"tuple {k!r} has length {len(k)}, expected {degree + 1}")
            if v != 0:
                self.coeffs[tuple(k)] = complex(v)

    # -- construction ---------------------------------------------------------
    @classmethod
    def from_terms(cls, algebra: Algebra, terms: Iterable[tuple[complex, Sequence[Element]]],
                   degree: int | None = None) -> "HochschildChain":
        out: dict[tuple, complex] = {}
        for coeff, entries in terms:
            entries = tuple(entries)
            if degree is None:
                degree = len(entries) - 1
            if len(entries) != degree + 1:
                raise ValueError("inhomogeneous chain")
            for e in entries:
                if e.algebra != algebra:
                    raise AlgebraMismatch(f"entry over {e.algebra!r}, chain over {algebra!r}")
            for key, c in _expand([e.coeffs for e in entries]):
                _accumulate(out, key, coeff * c)
        if degree is None:
            raise ValueError("cannot infer the degree of an empty chain")
        return cls(algebra, degree, out)

    @classmethod
    def tensor(cls, *entries: Element, coeff: complex = 1.0) -> "HochschildChain":
        if not entries:
            raise ValueError("need at least one entry")
        return cls.from_terms(entries[0].algebra, [(coeff, entries)])

    @classmethod
    def zero(cls, algebra: Algebra, degree: int) -> "HochschildChain":
        return cls(algebra, degree, {})

    def terms(self) -> list[tuple[complex, tuple[Element, ...]]]:
        alg = self.algebra
        return [(c, tuple(Element(alg, {k: 1.0}) for k in key))
                for key, c in sorted(self.coeffs.items(), key=lambda kv: repr(kv[0]))]

    # -- linear structure -------------------------------------------------------
    def _check(self, other: "HochschildChain") -> None:
        if not isinstance(other, HochschildChain):
            raise TypeError(f"expected HochschildChain, got {type(other).__name__}")
        if other.algebra != self.algebra:
            raise AlgebraMismatch(f"{self.algebra!r} vs {other.algebra!r}")
        if other.degree != self.degree:
            raise ValueError(f"degree {self.degree} vs {other.degree}")

    def __add__(self, other: "HochschildChain") -> "HochschildChain":
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            _accumulate(out, k, v)
        return HochschildChain(self.algebra, self.degree, out)

    def __neg__(self) -> "HochschildChain":
        return self.scale(-1)

    def __sub__(self, other: "HochschildChain") -> "HochschildChain":
        return self + (-other)

    def scale(self, c: complex) -> "HochschildChain":
        return HochschildChain(self.algebra, self.degree, {k: c * v for k, v in self.coeffs.items()})

    __rmul__ = scale

    def __mul__(self, c: complex) -> "HochschildChain":
        return self.scale(c)

    def __repr__(self) -> str:
        return f"HochschildChain(deg={self.degree}, terms={len(self.coeffs)}, over {self.algebra!r})"

    def norm(self) -> float:
        return max((abs(v) for v in self.coeffs.values()), default=0.0)

    def is_zero(self, tol: float = DEFAULT_TOL) -> bool:
        return self.norm() <= tol

    def residual(self, other: "HochschildChain") -> float:
        self._check(other)
        return _residual(self.coeffs, other.coeffs)

    def close_to(self, other: "HochschildChain", tol: float = DEFAULT_TOL) -> bool:
        return self.residual(other) <= tol

    def cyclic_residual(self, other: "HochschildChain") -> float:
        """Distance modulo ``Im(1 - t)``, measured through the norm operator."""
        self._check(other)
        return _residual(norm_N(self).coeffs, norm_N(other).coeffs)

    def equal_mod_cyclic(self, other: "HochschildChain", tol: float = DEFAULT_TOL) -> bool:
        return self.cyclic_residual(other) <= tol


def _mul_keys(alg: Algebra, a: Key, b: Key) -> dict:
    return alg.mul_basis(a, b)


def _linear_map(x: HochschildChain, degree: int, images, algebra: Algebra | None = None) -> HochschildChain:
    """Build a chain from ``images(key) -> iterable of (key, coeff)``."""
    out: dict[tuple, complex] = {}
    for key, c in x.coeffs.items():
        for k2, v in images(key):
            _accumulate(out, k2, c * v)
    return HochschildChain(x.algebra if algebra is None else algebra, degree, out)


# ---------------------------------------------------------------------------
# Hochschild operators


def _face(alg: Algebra, key: tuple, i: int) -> Iterator[tuple[tuple, complex]]:
    n = len(key) - 1
    if i < n:
        for k, v in _mul_keys(alg, key[i], key[i + 1]).items():
            yield key[:i] + (k,) + key[i + 2:], v
    else:
        for k, v in _mul_keys(alg, key[n], key[0]).items():
            yield (k,) + key[1:n], v


def boundary_b(x: HochschildChain) -> HochschildChain:
    """``b = Σ_{i=0}^{n} (-1)^i d_i``; zero in degree 0."""
    n = x.degree
    if n == 0:
        return HochschildChain.zero(x.algebra, 0)

    def images(key):
        for i in range(n + 1):
            s = -1 if i % 2 else 1
            for k, v in _face(x.algebra, key, i):
                yield k, s * v

    return _linear_map(x, n - 1, images)


def boundary_b_prime(x: HochschildChain) -> HochschildChain:
    """``b' = Σ_{i=0}^{n-1} (-1)^i d_i`` (the bar boundary)."""
    n = x.degree
    if n == 0:
        return HochschildChain.zero(x.algebra, 0)

    def images(key):
        for i in range(n):
            s = -1 if i % 2 else 1
            for k, v in _face(x.algebra, key, i):
                yield k, s * v

    return _linear_map(x, n - 1, images)


def cyclic_t(x: HochschildChain) -> HochschildChain:
    """``t(a_0 ⊗ ... ⊗ a_n) = (-1)^n a_n ⊗ a_0 ⊗ ... ⊗ a_{n-1}``."""
    n = x.degree
    s = -1 if n % 2 else 1
    return HochschildChain(x.algebra, n, {key[-1:] + key[:-1]: s * c for key, c in x.coeffs.items()})


def norm_N(x: HochschildChain) -> HochschildChain:
    """``N = 1 + t + ... + t^n``."""
    total = x
    y = x
    for _ in range(x.degree):
        y = cyclic_t(y)
        total = total + y
    return total


def extra_degeneracy_s(x: HochschildChain) -> HochschildChain:
    """``s(a_0 ⊗ ... ⊗ a_n) = 1 ⊗ a_0 ⊗ ... ⊗ a_n``."""
    unit = x.algebra.unit_coeffs()
    return _linear_map(x, x.degree + 1, lambda key: (((u,) + key, v) for u, v in unit.items()))


def multiply_out_chain(x: HochschildChain) -> HochschildChain:
    """``∇_*``: apply the multiplication ``A ⊗ A -> A`` in every slot."""
    alg = x.algebra
    if not isinstance(alg, TensorAlgebra) or alg.left != alg.right or not alg.left.commutative:
        raise AlgebraMismatch("∇ needs a chain over A ⊗ A with A commutative")
    base = alg.left
    return _linear_map(
        x, x.degree,
        lambda key: _expand([base.mul_basis(a, b) for a, b in key]),
        base,
    )


def phi_star_chain(phi: TensorEmbedding, x: HochschildChain) -> HochschildChain:
    """Apply ``φ : M_p(A) ⊗ M_q(B) -> M_pq(A ⊗ B)`` in every slot."""
    alg = x.algebra
    if not (isinstance(alg, TensorAlgebra) and isinstance(alg.left, MatrixAlgebra)
            and isinstance(alg.right, MatrixAlgebra)):
        raise AlgebraMismatch("φ_* needs a chain over M_p(A) ⊗ M_q(B)")
    target = phi.target(alg.left, alg.right)
    return HochschildChain(target, x.degree,
                           {tuple(phi.key(a, b) for a, b in key): c for key, c in x.coeffs.items()})


# ---------------------------------------------------------------------------
# products


def shuffle_product(x: HochschildChain, y: HochschildChain, phi: TensorEmbedding | None = None,
                    interior: bool = False) -> HochschildChain:
    """Shuffle product ``x × y`` of degree ``n + m``.

    Exterior (default): the result lives over ``A ⊗ B``, or over ``M_pq(A ⊗ B)``
    when ``phi`` is given for matrix algebras.  Interior: ``A == B`` is
    commutative and the result is composed with the multiplication map.
    """
    n, m = x.degree, y.degree
    A, B = x.algebra, y.algebra
    shuffles = enumerate_shuffles(n, m)
    out: dict[tuple, complex] = {}
    if interior:
        if A != B:
            raise AlgebraMismatch("the interior product needs both chains over one algebra")
        if not A.commutative:
            raise AlgebraMismatch("the interior product needs a commutative algebra")
        for ka, ca in x.coeffs.items():
            for kb, cb in y.coeffs.items():
                head = A.mul_basis(ka[0], kb[0])
                for sh in shuffles:
                    body = [None] * (n + m)
                    for i, pos in enumerate(sh.mu):
                        body[pos] = ka[i + 1]
                    for j, pos in enumerate(sh.nu):
                        body[pos] = kb[j + 1]
                    tail = tuple(body)
                    for h, v in head.items():
                        _accumulate(out, (h,) + tail, sh.sign * ca * cb * v)
        return HochschildChain(A, n + m, out)

    target = TensorAlgebra(A, B)
    ua, ub = A.unit_coeffs(), B.unit_coeffs()
    for ka, ca in x.coeffs.items():
        for kb, cb in y.coeffs.items():
            for sh in shuffles:
                slots: list[Slot] = [None] * (n + m + 1)  # type: ignore[list-item]
                slots[0] = {(ka[0], kb[0]): 1.0}
                for i, pos in enumerate(sh.mu):
                    slots[pos + 1] = {(ka[i + 1], u): v for u, v in ub.items()}
                for j, pos in enumerate(sh.nu):
                    slots[pos + 1] = {(u, kb[j + 1]): v for u, v in ua.items()}
                for key, v in _expand(slots):
                    _accumulate(out, key, sh.sign * ca * cb * v)
    result = HochschildChain(target, n + m, out)
    if phi is not None:
        result = phi_star_chain(phi, result)
    return result


def star_product(x: HochschildChain, y: HochschildChain, phi: TensorEmbedding | None = None,
                 interior: bool = False) -> HochschildChain:
    """Degree-one product ``x * y = x × s(N(y))``."""
    return shuffle_product(x, extra_degeneracy_s(norm_N(y)), phi=phi, interior=interior)


# ---------------------------------------------------------------------------
# Lie chains


def _sort_word(word: tuple) -> tuple[tuple, int]:
    """Sort a wedge word; returns (sorted word, sign) or ((), 0) for repeated letters."""
    if len(set(word)) != len(word):
        return (), 0
    order = sorted(range(len(word)), key=lambda i: word[i])
    return tuple(word[i] for i in order), sign(order) if order else 1


class LieChain:
    """Finite combination of wedge words ``x_1 ∧ ... ∧ x_n`` of basis letters."""

    __slots__ = ("algebra", "degree", "coeffs")

    def __init__(self, algebra: Algebra, degree: int, coeffs: Mapping[tuple, complex] | None = None):
        self.algebra = algebra
        self.degree = degree
        self.coeffs: dict[tuple, complex] = {}
        for word, v in (coeffs or {}).items():
            if len(word) != degree:
                raise ValueError(f"word {word!r} has length {len(word)}, expected {degree}")
            w, s = _sort_word(tuple(word))
            if s:
                _accumulate(self.coeffs, w, s * complex(v))

    @classmethod
    def from_words(cls, algebra: Algebra, words: Iterable[tuple[complex, Sequence[Element]]],
                   degree: int | None = None) -> "LieChain":
        out: dict[tuple, complex] = {}
        for coeff, letters in words:
            letters = tuple(letters)
            if degree is None:
                degree = len(letters)
            if len(letters) != degree:
                raise ValueError("inhomogeneous Lie chain")
            for e in letters:
                if e.algebra != algebra:
                    raise AlgebraMismatch(f"letter over {e.algebra!r}, chain over {algebra!r}")
            for key, c in _expand([e.coeffs for e in letters]):
                w, s = _sort_word(key)
                if s:
                    _accumulate(out, w, s * coeff * c)
        if degree is None:
            raise ValueError("cannot infer the degree of an empty chain")
        return cls(algebra, degree, out)

    @classmethod
    def wedge(cls, *letters: Element, coeff: complex = 1.0) -> "LieChain":
        if not letters:
            raise ValueError("use LieChain(algebra, 0, {(): c}) for the empty word")
        return cls.from_words(letters[0].algebra, [(coeff, letters)])

    def _check(self, other: "LieChain") -> None:
        if not isinstance(other, LieChain):
            raise TypeError(f"expected LieChain, got {type(other).__name__}")
        if other.algebra != self.algebra:
            raise AlgebraMismatch(f"{self.algebra!r} vs {other.algebra!r}")
        if other.degree != self.degree:
            raise ValueError(f"degree {self.degree} vs {other.degree}")

    def __add__(self, other: "LieChain") -> "LieChain":
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            _accumulate(out, k, v)
        return LieChain(self.algebra, self.degree, out)

    def __neg__(self) -> "LieChain":
        return self.scale(-1)

    def __sub__(self, other: "LieChain") -> "LieChain":
        return self + (-other)

    def scale(self, c: complex) -> "LieChain":
        return LieChain(self.algebra, self.degree, {k: c * v for k, v in self.coeffs.items()})

    __rmul__ = scale

    def __mul__(self, c: complex) -> "LieChain":
        return self.scale(c)

    def __repr__(self) -> str:
        return f"LieChain(deg={self.degree}, terms={len(self.coeffs)}, over {self.algebra!r})"

    def norm(self) -> float:
        return max((abs(v) for v in self.coeffs.values()), default=0.0)

    def is_zero(self, tol: float = DEFAULT_TOL) -> bool:
        return self.norm() <= tol

    def residual(self, other: "LieChain") -> float:
        self._check(other)
        return _residual(self.coeffs, other.coeffs)

    def close_to(self, other: "LieChain", tol: float = DEFAULT_TOL) -> bool:
        return self.residual(other) <= tol


def _bracket(alg: Algebra, a: Key, b: Key) -> dict:
    out = dict(alg.mul_basis(a, b))
    for k, v in alg.mul_basis(b, a).items():
        out[k] = out.get(k, 0) - v
    return {k: v for k, v in out.items() if v != 0}


def ce_boundary(x: LieChain) -> LieChain:
    """Chevalley–Eilenberg boundary, normalised so that ``δ(x_1 ∧ x_2) = [x_1, x_2]``.

    ``δ(x_0 ∧ ... ∧ x_{n-1}) = Σ_{i<j} (-1)^{i+j+1} [x_i, x_j] ∧ (rest)`` with
    0-based positions.
    """
    n = x.degree
    if n < 2:
        return LieChain(x.algebra, max(n - 1, 0), {})
    out: dict[tuple, complex] = {}
    alg = x.algebra
    for word, c in x.coeffs.items():
        for i, j in itertools.combinations(range(n), 2):
            s = -1 if (i + j) % 2 == 0 else 1
            rest = word[:i] + word[i + 1:j] + word[j + 1:]
            for k, v in _bracket(alg, word[i], word[j]).items():
                w, ws = _sort_word((k,) + rest)
                if ws:
                    _accumulate(out, w, ws * s * c * v)
    return LieChain(alg, n - 1, out)


def antisymmetrize_eps(x: LieChain) -> HochschildChain:
    """``ε(x_0 ∧ ... ∧ x_n) = Σ_s sgn(s) x_0 ⊗ x_{s(1)} ⊗ ... ⊗ x_{s(n)}``."""
    n = x.degree - 1
    if n < 0:
        raise ValueError("ε needs degree >= 1")
    perms = [(p.images, sign(p)) for p in permutations(n, 1)]
    out: dict[tuple, complex] = {}
    for word, c in x.coeffs.items():
        for images, sg in perms:
            _accumulate(out, (word[0],) + tuple(word[i] for i in images), sg * c)
    return HochschildChain(x.algebra, n, out)


def elementary_E(x: HochschildChain) -> LieChain:
    """``a_0 ⊗ ... ⊗ a_n ↦ E_12(a_0) ∧ E_23(a_1) ∧ ... ∧ E_{n+1,1}(a_n)`` in ``M_{n+1}(A)``."""
    n = x.degree
    size = n + 1
    alg = MatrixAlgebra(x.algebra, size)
    out: dict[tuple, complex] = {}
    for key, c in x.coeffs.items():
        word = tuple((r, (r + 1) % size, k) for r, k in enumerate(key))
        w, s = _sort_word(word)
        if s:
            _accumulate(out, w, s * c)
    return LieChain(alg, n + 1, out)


def generalized_trace_chain(x: HochschildChain) -> HochschildChain:
    """``TR(M_0 ⊗ ... ⊗ M_n) = Σ (M_0)_{i_0 i_1} ⊗ (M_1)_{i_1 i_2} ⊗ ... ⊗ (M_n)_{i_n i_0}``."""
    alg = x.algebra
    if not isinstance(alg, MatrixAlgebra):
        raise AlgebraMismatch("TR needs a chain over a matrix algebra")
    out: dict[tuple, complex] = {}
    for key, c in x.coeffs.items():
        n = len(key)
        if all(key[r][1] == key[(r + 1) % n][0] for r in range(n)):
            _accumulate(out, tuple(k[2] for k in key), c)
    return HochschildChain(alg.base, x.degree, out)


def wedge_exterior(x: LieChain, y: LieChain, phi: TensorEmbedding | None = None) -> LieChain:
    """``x ∧^E y = φ_*(x ⊗ 1) ∧ φ_*(1 ⊗ y)`` over ``M_pq(A ⊗ B)``."""
    A, B = x.algebra, y.algebra
    if not isinstance(A, MatrixAlgebra) or not isinstance(B, MatrixAlgebra):
        raise AlgebraMismatch("∧^E needs Lie chains over matrix algebras")
    phi = TensorEmbedding(A.size, B.size) if phi is None else phi
    target = phi.target(A, B)
    ua, ub = A.unit_coeffs(), B.unit_coeffs()
    out: dict[tuple, complex] = {}
    for wa, ca in x.coeffs.items():
        slots = [{phi.key(a, u): v for u, v in ub.items()} for a in wa]
        for wb, cb in y.coeffs.items():
            tail = [{phi.key(u, b): v for u, v in ua.items()} for b in wb]
            for word, v in _expand(slots + tail):
                w, s = _sort_word(word)
                if s:
                    _accumulate(out, w, s * ca * cb * v)
    return LieChain(target, x.degree + y.degree, out)


# ε∘δ = EPS_BOUNDARY_SIGN · b∘ε modulo Im(1 - t), measured in degrees 2..5
EPS_BOUNDARY_SIGN = 1


def trace_eps(x: LieChain) -> HochschildChain:
    """``TR(ε(x))`` without materialising the orderings that TR discards.

    Walks the letters after the pinned first one in every order whose index
    pairs close up, tracking the permutation sign as inversions accumulate.
    """
    alg = x.algebra
    if not isinstance(alg, MatrixAlgebra):
        raise AlgebraMismatch("TR needs a chain over a matrix algebra")
    n = x.degree - 1
    if n < 0:
        raise ValueError("ε needs degree >= 1")
    out: dict[tuple, complex] = {}
    for word, c in x.coeffs.items():
        first = word[0]
        rest = word[1:]

        def walk(path: list[int], used: int, col: int, inv: int) -> None:
            if len(path) == n:
                if col == first[0]:
                    key = (first[2],) + tuple(rest[i][2] for i in path)
                    _accumulate(out, key, (-c if inv % 2 else c))
                return
            for i in range(n):
                if used >> i & 1 or rest[i][0] != col:
                    continue
                # letters already placed with a larger index
                above = bin(used >> (i + 1)).count("1")
                path.append(i)
                walk(path, used | (1 << i), rest[i][1], inv + above)
                path.pop()

        walk([], 0, first[1], 0)
    return HochschildChain(alg.base, n, out)
