"""The multiplicative character of a Loday symbol and its two evaluation paths.

Path A feeds the relative Chern character of ``[e^{a_0}] * ... * [e^{a_{2p-1}}]``
into the index cocycle.  Path B is the closed commutator-trace formula over
the pair-ordered permutations.  Values are reduced modulo ``(2πi)^p Z``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import expm

from .algebra import Algebra, AlgebraMismatch, Element, MatrixAlgebra, as_matrix, matrix_trace_TR
from .chains import HochschildChain
from .fredholm import FredholmModule, c_const, tau_cocycle
from .perms import EVEN, ODD, enumerate_se, permutations, sign
from .reduce import csum, ordered_map

SNAP = 1e-12


class PreconditionError(ValueError):
    """A stated precondition (e.g. equal exponentials) does not hold."""


@dataclass(frozen=True)
class LodaySymbol:
    """``[e^{a_0}] * ... * [e^{a_{2p-1}}]`` for square matrices over one commutative algebra."""

    entries: tuple[Element, ...]

    def __post_init__(self) -> None:
        entries = tuple(as_matrix(a) for a in self.entries)
        if not entries or len(entries) % 2:
            raise ValueError(f"a Loday symbol needs an even, positive number of entries, got {len(entries)}")
        bases = {a.algebra.base for a in entries}
        if len(bases) != 1:
            raise AlgebraMismatch("all entries must be matrices over one algebra")
        if not next(iter(bases)).commutative:
            raise AlgebraMismatch("the coefficient algebra must be commutative")
        object.__setattr__(self, "entries", entries)

    @property
    def p(self) -> int:
        return len(self.entries) // 2

    @property
    def algebra(self) -> Algebra:
        return self.entries[0].algebra.base

    def traces(self) -> list[Element]:
        return [matrix_trace_TR(a) for a in self.entries]

    def replace(self, index: int, value: Element) -> "LodaySymbol":
        entries = list(self.entries)
        entries[index] = value
        return LodaySymbol(tuple(entries))


def chern_rel_loday(sym: LodaySymbol) -> HochschildChain:
    """``Σ_{μ ∈ Σ_{2p-1}} sgn(μ) TR(a_0) ⊗ TR(a_{μ(1)}) ⊗ ... ⊗ TR(a_{μ(2p-1)})``."""
    tr = sym.traces()
    n = len(tr) - 1
    terms = [(sign(mu), [tr[0]] + [tr[i] for i in mu.images]) for mu in permutations(n, 1)]
    return HochschildChain.from_terms(sym.algebra, terms, degree=n)


def _compressed(sym: LodaySymbol, module: FredholmModule) -> tuple[list[np.ndarray], list[int]]:
    if sym.algebra != module.algebra:
        raise AlgebraMismatch(f"symbol over {sym.algebra!r}, module acts on {module.algebra!r}")
    if sym.p != module.p:
        raise ValueError(f"symbol has p={sym.p}, module is {2 * module.p}-summable")
    P = module.P
    xs, spreads = [], []
    for x in sym.traces():
        X = module.represent(x)
        xs.append(P @ X @ P)
        spreads.append(module.spread_of(x))
    return xs, spreads


def commutator_terms(sym: LodaySymbol, module: FredholmModule, threads: int = 1) -> list[complex]:
    """The signed traces ``sgn(s) Tr(Π_i [P x_{s(2i)} P, P x_{s(2i+1)} P])`` with ``s(0) = 0``."""
    xs, spreads = _compressed(sym, module)
    total, top = sum(spreads), max(spreads, default=0)
    members = list(enumerate_se(2 * sym.p - 1, ODD)) if sym.p > 1 else [None]
    brackets: dict[tuple[int, int], np.ndarray] = {}

    def bracket(i: int, j: int) -> np.ndarray:
        if (i, j) not in brackets:
            brackets[(i, j)] = xs[i] @ xs[j] - xs[j] @ xs[i]
        return brackets[(i, j)]

    words = []
    for s in members:
        order = (0,) + (s.images if s is not None else (1,))
        words.append(((1 if s is None else sign(s)), order))
    for _, order in words:  # fill the cache before any fan-out
        for i in range(0, len(order), 2):
            bracket(order[i], order[i + 1])

    def one(word):
        sg, order = word
        M = bracket(order[0], order[1])
        for i in range(2, len(order), 2):
            M = M @ bracket(order[i], order[i + 1])
        return sg * module.trace(M, total, top)

    return ordered_map(one, words, threads)


def commutator_form(sym: LodaySymbol, module: FredholmModule, threads: int = 1) -> complex:
    """``(-1)^p c_p Σ_{s ∈ SE_{2p-1}} sgn(s) Tr([P x_0 P, P x_{s(1)} P] ...)``."""
    p = sym.p
    return (-1) ** p * c_const(p) * csum(commutator_terms(sym, module, threads))


def path_a(sym: LodaySymbol, module: FredholmModule, threads: int = 1) -> complex:
    return tau_cocycle(module, chern_rel_loday(sym), threads)


@dataclass(frozen=True)
class PathReport:
    path_a: complex
    path_b: complex
    residual: float
    scale: float


def path_equivalence_check(sym: LodaySymbol, module: FredholmModule, threads: int = 1) -> PathReport:
    """Both evaluation paths and their difference relative to the size of the summands.

    The scale is ``max(1, |A|, |B|, Σ|terms|)``: in finite dimensions both
    paths vanish identically while the individual traces do not, so only a
    residual measured against the summands is informative there.
    """
    a = path_a(sym, module, threads)
    terms = commutator_terms(sym, module, threads)
    b = (-1) ** sym.p * c_const(sym.p) * csum(terms)
    scale = max(1.0, abs(a), abs(b), abs(c_const(sym.p)) * math.fsum(abs(t) for t in terms))
    return PathReport(a, b, abs(a - b) / scale, scale)


# ---------------------------------------------------------------------------
# the pair expansion of the full antisymmetrisation


@dataclass(frozen=True)
class PairExpansion:
    left: dict[tuple[int, ...], int]
    right: dict[tuple[int, ...], int]


def pair_expansion(k: int) -> PairExpansion:
    """Index words of ``Σ_μ sgn(μ) x_{μ(0)} ⊗ ... `` and of ``Σ_{s ∈ SE_{2p}} sgn(s) X_{s0,s1} ⊗ ...``.

    ``k = 2p`` is the number of tensor factors and ``X_{ij} = x_i ⊗ x_j - x_j ⊗ x_i``.
    Both sides are returned as maps from index words to integer coefficients.
    """
    if k < 2 or k % 2:
        raise ValueError("need an even number >= 2 of factors")
    left: dict[tuple[int, ...], int] = {}
    for mu in permutations(k, 0):
        left[mu.images] = left.get(mu.images, 0) + sign(mu)
    right: dict[tuple[int, ...], int] = {}
    for s in enumerate_se(k, EVEN):
        pairs = [s.images[i:i + 2] for i in range(0, k, 2)]
        for flips in range(1 << len(pairs)):
            word: list[int] = []
            sg = sign(s)
            for r, (i, j) in enumerate(pairs):
                if flips >> r & 1:
                    word += [j, i]
                    sg = -sg
                else:
                    word += [i, j]
            right[tuple(word)] = right.get(tuple(word), 0) + sg
    clean = lambda d: {w: c for w, c in d.items() if c}
    return PairExpansion(clean(left), clean(right))


def evaluate_words(words: dict[tuple[int, ...], int], ops: Sequence[np.ndarray]) -> complex:
    """``Σ c Tr(x_{w_0} x_{w_1} ...)`` over the index words."""
    vals = []
    for w, c in sorted(words.items()):
        M = ops[w[0]]
        for i in w[1:]:
            M = M @ ops[i]
        vals.append(c * np.trace(M))
    return csum(vals)


def pair_commutator_trace(ops: Sequence[np.ndarray]) -> complex:
    """``Σ_{s ∈ SE_{2p}} sgn(s) Tr([x_{s0}, x_{s1}] ... )`` evaluated directly with commutators."""
    k = len(ops)
    vals = []
    for s in enumerate_se(k, EVEN):
        M = np.eye(ops[0].shape[0], dtype=complex)
        for i in range(0, k, 2):
            a, b = ops[s.images[i]], ops[s.images[i + 1]]
            M = M @ (a @ b - b @ a)
        vals.append(sign(s) * np.trace(M))
    return csum(vals)


# ---------------------------------------------------------------------------
# lattice reduction and the character


def lattice_direction(p: int) -> complex:
    """``(2πi)^p``, computed so that even powers are exactly real and odd ones exactly imaginary."""
    r = (2 * math.pi) ** p
    return complex(*{0: (r, 0.0), 1: (0.0, r), 2: (-r, 0.0), 3: (0.0, -r)}[p % 4])


@dataclass(frozen=True)
class LatticeValue:
    raw: complex
    p: int
    representative: complex
    quotient: int

    @property
    def coordinate(self) -> float:
        return (self.representative / lattice_direction(self.p)).real

    def distance_to_lattice(self) -> float:
        """Distance from ``raw`` to the nearest point of ``(2πi)^p Z``."""
        w = lattice_direction(self.p)
        n = round((self.raw / w).real)
        return abs(self.raw - n * w)


def lattice_reduce(z: complex, p: int) -> LatticeValue:
    """Split ``z = representative + quotient·(2πi)^p`` with coordinate in ``[0, 1)``.

    The coordinate of a complex number is the real part of ``z / (2πi)^p``;
    values within ``1e-12`` of an integer are snapped onto it, so the
    coordinate may fall below 0 by at most that much.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    z = complex(z)
    w = lattice_direction(p)
    x = (z / w).real
    n = round(x)
    q = n if abs(x - n) < SNAP else math.floor(x)
    # no residue is dropped from the representative, so the round trip stays exact
    return LatticeValue(z, p, z - q * w, int(q))


@dataclass(frozen=True)
class CharacterReport:
    value: LatticeValue
    paths: PathReport


def multiplicative_character(sym: LodaySymbol, module: FredholmModule, threads: int = 1) -> CharacterReport:
    paths = path_equivalence_check(sym, module, threads)
    return CharacterReport(lattice_reduce(paths.path_b, sym.p), paths)


@dataclass(frozen=True)
class BranchReport:
    difference: LatticeValue
    nearest: int
    distance: float
    in_lattice: bool
    exp_gap: float
    tolerance: float = field(default=1e-6)


def exponential_gap(module: FredholmModule, a: Element, b: Element) -> float:
    """Operator-norm distance between ``exp(π(a))`` and ``exp(π(b))``."""
    return float(np.linalg.norm(expm(module.represent(as_matrix(a))) - expm(module.represent(as_matrix(b))), 2))


def branch_difference(sym: LodaySymbol, index: int, alt_log: Element, module: FredholmModule,
                      tol: float = 1e-6, exp_tol: float = 1e-10, threads: int = 1) -> BranchReport:
    """Change of the character when ``a_index`` is replaced by another logarithm of ``e^{a_index}``."""
    if not 0 <= index < len(sym.entries):
        raise IndexError(f"symbol has no entry {index}")
    alt = as_matrix(alt_log)
    if alt.algebra != sym.entries[index].algebra:
        raise AlgebraMismatch("alternative logarithm must have the shape and algebra of the entry it replaces")
    gap = exponential_gap(module, sym.entries[index], alt)
    if not gap <= exp_tol:
        raise PreconditionError(f"exp(b) differs from exp(a) by {gap:.3e} in operator norm (tolerance {exp_tol:g})")
    d = commutator_form(sym.replace(index, alt), module, threads) - commutator_form(sym, module, threads)
    value = lattice_reduce(d, sym.p)
    w = lattice_direction(sym.p)
    n = round((d / w).real)
    dist = abs(d - n * w)
    return BranchReport(value, int(n), float(dist), bool(dist <= tol), gap, tol)


def spectral_projection_poly(module: FredholmModule, cluster: Sequence[int]) -> Element:
    """The spectral projection of the generator onto the eigenvalues indexed by ``cluster``,
    as a Lagrange interpolation polynomial in the generator.
    """
    X = module.algebra.generator  # type: ignore[attr-defined]
    lam = np.linalg.eigvals(X)
    lam = lam[np.lexsort((lam.imag, lam.real))]
    n = len(lam)
    coeffs = np.zeros(n, dtype=complex)
    for i in cluster:
        basis = np.array([1.0 + 0j])
        denom = 1.0 + 0j
        for j in range(n):
            if j != i:
                basis = np.convolve(basis, np.array([-lam[j], 1.0]))
                denom *= lam[i] - lam[j]
        coeffs[: len(basis)] += basis / denom
    return module.algebra.poly(coeffs)  # type: ignore[attr-defined]
