"""Seeded random instances for property checks and the verify suites.

All draws go through a ``numpy.random.Generator`` so a seed pins every value.
"""
from __future__ import annotations

import numpy as np

from .algebra import (
    Algebra,
    Element,
    LaurentAlgebra,
    MatrixAlgebra,
    OperatorAlgebra,
    PointwiseAlgebra,
)
from .chains import HochschildChain, LieChain


def rng_from(seed: int | np.random.Generator | None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def complex_normal(rng: np.random.Generator, size=None):
    return rng.normal(size=size) + 1j * rng.normal(size=size)


def random_laurent(rng: np.random.Generator, max_degree: int = 2, terms: int = 2,
                   algebra: LaurentAlgebra | None = None) -> Element:
    alg = LaurentAlgebra() if algebra is None else algebra
    degrees = rng.choice(np.arange(-max_degree, max_degree + 1), size=min(terms, 2 * max_degree + 1),
                         replace=False)
    return alg.element({int(d): complex_normal(rng) for d in degrees})


def random_pointwise(rng: np.random.Generator, algebra: PointwiseAlgebra) -> Element:
    return algebra.vector(complex_normal(rng, algebra.k))


def random_polynomial(rng: np.random.Generator, algebra: OperatorAlgebra, poly_degree: int = 2,
                      scale: float = 1.0) -> Element:
    return algebra.poly(scale * complex_normal(rng, poly_degree + 1))


def random_element(rng: np.random.Generator, algebra: Algebra, **kw) -> Element:
    if isinstance(algebra, LaurentAlgebra):
        return random_laurent(rng, algebra=algebra, **kw)
    if isinstance(algebra, PointwiseAlgebra):
        return random_pointwise(rng, algebra)
    if isinstance(algebra, OperatorAlgebra):
        return random_polynomial(rng, algebra, **kw)
    if isinstance(algebra, MatrixAlgebra):
        return random_matrix(rng, algebra, **kw)
    raise TypeError(f"no sampler for {algebra!r}")


def random_matrix(rng: np.random.Generator, algebra: MatrixAlgebra, entries: int = 2,
                  terms: int = 1) -> Element:
    """A matrix with ``entries`` random nonzero positions, each a short random element."""
    k = algebra.size
    cells = rng.choice(k * k, size=min(entries, k * k), replace=False)
    out: dict = {}
    for cell in cells:
        i, j = divmod(int(cell), k)
        base = algebra.base
        if isinstance(base, LaurentAlgebra):
            e = random_laurent(rng, terms=terms, algebra=base)
        else:
            e = random_element(rng, base)
        for b, c in e.coeffs.items():
            out[(i, j, b)] = c
    return Element(algebra, out)


def random_chain(rng: np.random.Generator, algebra: Algebra, degree: int, terms: int = 2,
                 **kw) -> HochschildChain:
    return HochschildChain.from_terms(
        algebra,
        [(complex_normal(rng), [random_element(rng, algebra, **kw) for _ in range(degree + 1)])
         for _ in range(terms)],
        degree=degree,
    )


def random_lie_chain(rng: np.random.Generator, algebra: MatrixAlgebra, degree: int, terms: int = 1,
                     **kw) -> LieChain:
    return LieChain.from_words(
        algebra,
        [(complex_normal(rng), [random_matrix(rng, algebra, **kw) for _ in range(degree)])
         for _ in range(terms)],
        degree=degree,
    )


def random_normal_matrix(rng: np.random.Generator, n: int, spread: float = 1.0) -> np.ndarray:
    """``U diag(λ) U*`` with Haar-like unitary ``U`` (QR of a Gaussian matrix)."""
    Z = complex_normal(rng, (n, n))
    U, R = np.linalg.qr(Z)
    U = U * (np.diag(R) / np.abs(np.diag(R)))
    lam = spread * complex_normal(rng, n)
    return (U * lam) @ U.conj().T


def random_projection(rng: np.random.Generator, n: int, rank: int) -> np.ndarray:
    V, _ = np.linalg.qr(complex_normal(rng, (n, rank)))
    return V @ V.conj().T
