"""Seeded identity suites behind ``multchar --task verify``.

Every check evaluates one identity on a batch of random or fixed instances and
records the worst residual next to the tolerance it was judged against.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import algebra as alg
from .algebra import LaurentAlgebra, MatrixAlgebra, PointwiseAlgebra, TensorAlgebra, TensorEmbedding
from .chains import (
    EPS_BOUNDARY_SIGN,
    HochschildChain,
    LieChain,
    antisymmetrize_eps,
    boundary_b,
    ce_boundary,
    cyclic_t,
    elementary_E,
    generalized_trace_chain,
    norm_N,
    star_product,
    trace_eps,
    wedge_exterior,
)
from .character import (
    LodaySymbol,
    branch_difference,
    commutator_form,
    evaluate_words,
    lattice_direction,
    lattice_reduce,
    path_equivalence_check,
    spectral_projection_poly,
    pair_expansion,
    pair_commutator_trace,
)
from .fredholm import (
    T_identity_residuals,
    commutator_relation_residual,
    make_commuting_module,
    make_toeplitz_module,
    winding_oracle,
)
from .perms import EVEN, ODD, enumerate_se, enumerate_shuffles, se_cyclic_classes
from .sampling import (
    complex_normal,
    random_chain,
    random_laurent,
    random_lie_chain,
    random_normal_matrix,
    random_polynomial,
    random_projection,
)
from .simplicial import (
    ConstantSimplex,
    ExponentialPath,
    ExponentialProduct,
    TensorOfSimplices,
    degenerate,
    degeneracy,
    degeneracy_coordinates,
    face,
    gamma_wedge,
    gammas,
    lie_chain_from_flat,
    logarithm_L,
    simplex_rule,
    simplex_shuffle_product,
    wedge_coefficients,
)

SUITES = ("combinatorics", "chains", "simplicial", "fredholm", "character")


@dataclass
class Check:
    name: str
    identity: str
    tolerance: float
    instances: int = 0
    residual: float = 0.0
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tolerance) and self.instances > 0

    def add(self, residual: float) -> None:
        self.instances += 1
        r = float(residual)
        self.residual = max(self.residual, r) if not math.isnan(r) else math.inf

    def as_dict(self) -> dict:
        out = {
            "name": self.name,
            "identity": self.identity,
            "instances": self.instances,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }
        if self.detail:
            out["detail"] = self.detail
        return out


def _laurent_chain(rng, degree: int, terms: int = 2) -> HochschildChain:
    return random_chain(rng, LaurentAlgebra(), degree, terms=terms, max_degree=2)


# ---------------------------------------------------------------------------
# combinatorics


def suite_combinatorics(rng: np.random.Generator, instances: int, tol: float) -> list[Check]:
    shuffles = Check("shuffle-count", "|Σ_(n,m)| = binom(n+m, n) for n+m <= 8", 0.0)
    interleave = Check("shuffle-interleavings",
                       "shuffles list every monotone interleaving once, with sign (-1)^inversions", 0.0)
    for n in range(9):
        for m in range(9 - n):
            S = enumerate_shuffles(n, m)
            shuffles.add(abs(len(S) - math.comb(n + m, n)))
            if n + m <= 6:
                seen = set()
                bad = 0
                for sh in S:
                    word = [None] * (n + m)
                    for i, pos in enumerate(sh.mu):
                        word[pos] = ("a", i)
                    for j, pos in enumerate(sh.nu):
                        word[pos] = ("b", j)
                    seen.add(tuple(word))
                    bad += sh.sign != sh.permutation.parity
                interleave.add(bad + abs(len(seen) - len(S)))
    se_even = Check("se-even-count", "|SE_2p| = (2p)!/2^p for p <= 3", 0.0)
    se_odd = Check("se-odd-count", "|SE_(2p-1)| · 2^(p-1) = (2p-1)! for p <= 4", 0.0)
    fibers = Check("se-cyclic-fibers", "SE_2p -> SE_(2p-1) has all fibres of size p, p <= 3", 0.0)
    for p in range(1, 5):
        se_odd.add(abs(len(enumerate_se(2 * p - 1, ODD)) * 2 ** (p - 1) - math.factorial(2 * p - 1)))
        if p <= 3:
            se_even.add(abs(len(enumerate_se(2 * p, EVEN)) - math.factorial(2 * p) // 2 ** p))
            classes = se_cyclic_classes(p)
            counts: dict = {}
            for rep in classes.values():
                counts[rep] = counts.get(rep, 0) + 1
            odd = set(enumerate_se(2 * p - 1, ODD))
            fibers.add(max(abs(c - p) for c in counts.values()) + len(odd ^ set(counts)))
    return [shuffles, interleave, se_even, se_odd, fibers]


# ---------------------------------------------------------------------------
# chains


LEIBNIZ_DEGREES = [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2), (2, 1), (1, 2)]
ASSOC_DEGREES = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (0, 1, 1), (1, 0, 1), (2, 0, 0)]
ANTISYM_DEGREES = [(1, 1), (2, 1), (1, 2), (2, 2), (3, 1), (1, 3)]


def leibniz_residual(x: HochschildChain, y: HochschildChain) -> float:
    n = x.degree
    lhs = boundary_b(star_product(x, y, interior=True))
    rhs = HochschildChain.zero(x.algebra, n + y.degree)
    if n > 0:
        rhs = rhs + star_product(boundary_b(x), y, interior=True)
    if y.degree > 0:
        rhs = rhs + (-1) ** (n + 1) * star_product(x, boundary_b(y), interior=True)
    return lhs.residual(rhs)


def suite_chains(rng: np.random.Generator, instances: int, tol: float) -> list[Check]:
    A = LaurentAlgebra()
    M2, M3 = MatrixAlgebra(A, 2), MatrixAlgebra(A, 3)
    bb = Check("b-squared", "b∘b = 0", tol)
    tt = Check("t-order", "t^(n+1) = id", tol)
    tn = Check("one-minus-t-N", "(1-t)∘N = 0", tol)
    dd = Check("delta-squared", "δ∘δ = 0 (Chevalley–Eilenberg)", tol)
    leib = Check("star-leibniz", "b(x*y) = (bx)*y + (-1)^(|x|+1) x*(by)", tol)
    assoc = Check("star-associative", "(x*y)*z = x*(y*z) modulo Im(1-t)", tol)
    comm = Check("star-commutative", "x*y = (-1)^((|x|+1)(|y|+1)) y*x modulo Im(1-t)", tol)
    epsd = Check("eps-boundary", f"ε∘δ = ({EPS_BOUNDARY_SIGN:+d})·b∘ε modulo Im(1-t)", tol)
    antp = Check("antisymmetrization-product", "ε(x ∧^E y) = ε(x) * ε(y) modulo Im(1-t)", tol)
    trp = Check("trace-product", "TR(x) * TR(y) = TR(φ_*(x * y)) modulo Im(1-t)", tol)
    fact = Check("star-factorization", "x * y = TR∘ε(E(x) ∧^E E(y)) modulo Im(1-t)", tol)
    for k in range(instances):
        n = k % 5
        x = _laurent_chain(rng, n)
        y = x
        for _ in range(n + 1):
            y = cyclic_t(y)
        tt.add(y.residual(x))
        tn.add((norm_N(x) - cyclic_t(norm_N(x))).norm() / max(1.0, x.norm()))
        if n >= 2:
            bb.add(boundary_b(boundary_b(x)).norm() / max(1.0, x.norm()))
        else:
            bb.add(boundary_b(boundary_b(_laurent_chain(rng, 2 + k % 3))).norm())

        ld = 3 + k % 2
        w = random_lie_chain(rng, M3, ld, terms=2, entries=3)
        dd.add(ce_boundary(ce_boundary(w)).norm() / max(1.0, w.norm()))

        n, m = LEIBNIZ_DEGREES[k % len(LEIBNIZ_DEGREES)]
        x, y = _laurent_chain(rng, n), _laurent_chain(rng, m)
        leib.add(leibniz_residual(x, y))
        xy = star_product(x, y, interior=True)
        yx = star_product(y, x, interior=True)
        comm.add(xy.cyclic_residual((-1) ** ((n + 1) * (m + 1)) * yx))

        n, m, r = ASSOC_DEGREES[k % len(ASSOC_DEGREES)]
        x, y, z = _laurent_chain(rng, n), _laurent_chain(rng, m), _laurent_chain(rng, r)
        left = star_product(star_product(x, y, interior=True), z, interior=True)
        right = star_product(x, star_product(y, z, interior=True), interior=True)
        assoc.add(left.cyclic_residual(right))

        ld = 2 + k % 4
        w = random_lie_chain(rng, M2 if ld < 5 else M3, ld, terms=2, entries=3)
        lhs = antisymmetrize_eps(ce_boundary(w))
        rhs = EPS_BOUNDARY_SIGN * boundary_b(antisymmetrize_eps(w))
        epsd.add(lhs.cyclic_residual(rhs))

        n, m = ANTISYM_DEGREES[k % len(ANTISYM_DEGREES)]
        phi = TensorEmbedding(2, 2)
        u, v = random_lie_chain(rng, M2, n), random_lie_chain(rng, M2, m)
        lhs = antisymmetrize_eps(wedge_exterior(u, v, phi))
        rhs = star_product(antisymmetrize_eps(u), antisymmetrize_eps(v), phi=phi)
        antp.add(lhs.cyclic_residual(rhs))

        n, m = LEIBNIZ_DEGREES[k % len(LEIBNIZ_DEGREES)]
        x, y = random_chain(rng, M2, n, terms=1), random_chain(rng, M2, m, terms=1)
        lhs = star_product(generalized_trace_chain(x), generalized_trace_chain(y))
        rhs = generalized_trace_chain(star_product(x, y, phi=phi))
        trp.add(lhs.cyclic_residual(rhs))

        x, y = _laurent_chain(rng, n), _laurent_chain(rng, m)
        lhs = star_product(x, y)
        rhs = trace_eps(wedge_exterior(elementary_E(x), elementary_E(y), TensorEmbedding(n + 1, m + 1)))
        fact.add(lhs.cyclic_residual(rhs))
    return [bb, tt, tn, dd, leib, assoc, comm, epsd, antp, trp, fact]


# ---------------------------------------------------------------------------
# simplicial


def _rand_gen(rng, p: int, scale: float = 0.5) -> np.ndarray:
    return scale * complex_normal(rng, (p, p))


def random_simplex(rng, n: int, p: int = 2, factors: int = 2) -> ExponentialProduct:
    """Product of exponentials with non-negative linear exponents in the coordinates."""
    weights = tuple(tuple(rng.uniform(0, 1, n)) for _ in range(factors))
    return ExponentialProduct(weights, tuple(_rand_gen(rng, p) for _ in range(factors)))


def log_product_residual(sigma, tau, phi=None, order: int = 12) -> tuple[float, float]:
    lhs = logarithm_L(simplex_shuffle_product(sigma, tau, phi), order=order)
    rhs = wedge_exterior(logarithm_L(sigma, order=order).chain, logarithm_L(tau, order=order).chain, phi)
    return lhs.chain.residual(rhs), lhs.error


def gamma_shuffle_residual(sigma, tau, points, phi=None) -> float:
    n, m = sigma.degree, tau.degree
    phi = phi or TensorEmbedding(sigma.size, tau.size)
    left1 = TensorOfSimplices(sigma, ConstantSimplex(n, tau.size), phi)
    right1 = TensorOfSimplices(ConstantSimplex(m, sigma.size), tau, phi)
    worst = 0.0
    for sh in enumerate_shuffles(n, m):
        prod = TensorOfSimplices(degenerate(sigma, sh.nu), degenerate(tau, sh.mu), phi)
        Dn, Dm = degeneracy_coordinates(n, sh.nu), degeneracy_coordinates(m, sh.mu)
        for u in points:
            lhs = gamma_wedge(prod, u)
            mats = gammas(left1, Dn @ u) + gammas(right1, Dm @ u)
            rhs = lie_chain_from_flat(wedge_coefficients(mats), prod.size, prod.base, n + m).scale(sh.sign)
            worst = max(worst, lhs.residual(rhs))
    return worst


def integral_shuffle_residual(alpha, beta, n: int, m: int, order: int = 12) -> float:
    """``Σ_shuffles ∫ s_ν(α) s_μ(β) = ∫α · ∫β`` for scalar functions on simplices."""
    rule = simplex_rule(n + m, order)
    total = 0.0
    for sh in enumerate_shuffles(n, m):
        Dn, Dm = degeneracy_coordinates(n, sh.nu), degeneracy_coordinates(m, sh.mu)
        total += rule.integrate(lambda t: alpha(Dn @ t) * beta(Dm @ t))
    expect = simplex_rule(n, order).integrate(alpha) * simplex_rule(m, order).integrate(beta)
    return abs(total - expect) / max(1.0, abs(expect))


def simplicial_identity_residual(sigma, points) -> float:
    """Max deviation over ``d_i d_j = d_{j-1} d_i`` (i<j) and the ``d_i s_j`` relations."""
    n = sigma.degree
    worst = 0.0

    def diff(a, b, pts):
        return max(float(np.max(np.abs(a.value(t) - b.value(t)))) for t in pts)

    low = [u[: n - 2] / max(1.0, u[: n - 2].sum()) for u in points] if n >= 2 else []
    for j in range(n + 1):
        for i in range(j):
            if n >= 2:
                worst = max(worst, diff(face(face(sigma, j), i), face(face(sigma, i), j - 1), low))
    same = [u[:n] for u in points]
    for j in range(n + 1):
        s = degeneracy(sigma, j)
        for i in range(n + 2):
            if i in (j, j + 1):
                other = sigma
            elif i < j:
                other = degeneracy(face(sigma, i), j - 1) if n >= 1 else None
            else:
                other = degeneracy(face(sigma, i - 1), j) if n >= 1 else None
            if other is None:
                continue
            worst = max(worst, diff(face(s, i), other, same))
    return worst


def suite_simplicial(rng: np.random.Generator, instances: int, tol: float) -> list[Check]:
    qtol = max(tol, 1e-8)
    log_gamma = Check("log-exponential-path", "L(γ_a) = -a for γ_a(t) = exp(-t a)", qtol)
    logp = Check("log-product", "L(σ ×_φ τ) = φ_*(L(σ) ∧^E L(τ)) by quadrature", qtol)
    ints = Check("integral-shuffle", "Σ_shuffles ∫ s_ν(α) ⊗ s_μ(β) = ∫α ⊗ ∫β", max(tol, 1e-9))
    tg = Check("gamma-shuffle", "γ(s_ν σ ⊗_φ s_μ τ) = sgn(μ,ν) s_ν γ(σ⊗1) ∧ s_μ γ(1⊗τ) pointwise",
               max(tol, 1e-9))
    simp = Check("simplicial-identities", "d_i d_j = d_(j-1) d_i, d_i s_j relations pointwise", tol)
    fixed = Check("integral-shuffle-linear", "α = t, β = 1 on Δ^1: 1/3 + 1/6 = 1/2", max(tol, 1e-9))
    fixed.add(integral_shuffle_residual(lambda t: t[0], lambda t: 1.0, 1, 1))
    count = max(1, instances // 4)
    for k in range(count):
        a = _rand_gen(rng, 2)
        res = logarithm_L(ExponentialPath(a)).chain
        expect = lie_chain_from_flat({(r,): -a.reshape(-1)[r] for r in range(4)}, 2, PointwiseAlgebra(1), 1)
        log_gamma.add(res.residual(expect))
        n, m = [(1, 1), (1, 1), (2, 1), (1, 2)][k % 4]
        sigma, tau = random_simplex(rng, n), random_simplex(rng, m)
        if k == 0:
            sigma, tau = ExponentialPath(_rand_gen(rng, 2)), ExponentialPath(_rand_gen(rng, 2))
        r, est = log_product_residual(sigma, tau, TensorEmbedding(2, 2), order=12 if n + m == 2 else 8)
        logp.add(max(r, 0.0))
        logp.detail["max_error_estimate"] = max(logp.detail.get("max_error_estimate", 0.0), est)
        c1, c2 = complex_normal(rng, 3), complex_normal(rng, 3)
        alpha = lambda t, c=c1: c[0] + c[1] * np.sum(t) + c[2] * t[0] ** 2
        beta = lambda t, c=c2: c[0] + c[1] * t[-1] + c[2] * np.sum(t) ** 2
        ints.add(integral_shuffle_residual(alpha, beta, n, m))
        pts = [rng.dirichlet(np.ones(n + m + 1))[: n + m] for _ in range(20)]
        tg.add(gamma_shuffle_residual(sigma, tau, pts))
        s3 = random_simplex(rng, 1 + k % 3)
        simp.add(simplicial_identity_residual(s3, [rng.dirichlet(np.ones(5))[:4] for _ in range(5)]))
    return [log_gamma, logp, fixed, ints, tg, simp]


# ---------------------------------------------------------------------------
# fredholm


def suite_fredholm(rng: np.random.Generator, instances: int, tol: float) -> list[Check]:
    L = LaurentAlgebra()
    z, zi = L.monomial(1), L.monomial(-1)
    anchor = Check("hardy-anchor", "T(z ⊗ 1/z) = 1, T(1/z ⊗ z) = 0, τ_1(z ⊗ 1/z) = 1 on the Hardy space", tol)
    M1 = make_toeplitz_module(16, 1)
    from .fredholm import T_cochain, literal_tau, tau_cocycle

    anchor.add(abs(T_cochain(M1, HochschildChain.tensor(z, zi)) - 1))
    anchor.add(abs(T_cochain(M1, HochschildChain.tensor(zi, z))))
    anchor.add(abs(tau_cocycle(M1, HochschildChain.tensor(z, zi)) - 1))
    anchor.detail["literal_trace_formula"] = [literal_tau(M1, HochschildChain.tensor(z, zi)).real, 0.0]
    checks = {name: Check(label, name, tol) for label, name in
              [("T-twisted-cyclic", "T∘t² = T"), ("T-symmetrized", "T∘(1+t) = τ"),
               ("T-cyclic-norm", "T∘N = p·τ"), ("tau-cyclic", "τ∘t = τ")]}
    wind = Check("winding-oracle", "Tr[PfP, PgP] = Σ n g_n f_(-n)", tol)
    rel = Check("compressed-commutator", "[PxP, PyP] = -Px(1-P)yP + Py(1-P)xP", max(tol, 1e-12))
    for k in range(instances):
        p = 1 + k % 2
        if k % 4 < 2:
            module = make_toeplitz_module(24, p)
            x = random_chain(rng, L, 2 * p - 1, terms=2, max_degree=2)
        else:
            X = random_normal_matrix(rng, 8)
            module = make_commuting_module(X, random_projection(rng, 8, 3), p)
            x = random_chain(rng, module.algebra, 2 * p - 1, terms=2, poly_degree=2)
        for name, r in T_identity_residuals(module, x).items():
            checks[name].add(r)
        f, g = random_laurent(rng, 3, 3), random_laurent(rng, 3, 3)
        T = make_toeplitz_module(16, 1)
        Pf, Pg = T.P @ T.represent(f) @ T.P, T.P @ T.represent(g) @ T.P
        val = T.trace(Pf @ Pg - Pg @ Pf, 6, 3)
        wind.add(abs(val - winding_oracle(f, g)) / max(1.0, abs(val)))
        X = random_normal_matrix(rng, 8)
        C = make_commuting_module(X, random_projection(rng, 8, 3), 1)
        a, b = random_polynomial(rng, C.algebra), random_polynomial(rng, C.algebra)
        A, B = C.represent(a), C.represent(b)
        rel.add(commutator_relation_residual(C, A, B) / max(1.0, np.linalg.norm(A) * np.linalg.norm(B)))
    return [anchor, *checks.values(), wind, rel]


# ---------------------------------------------------------------------------
# character


def roots_generator(rng, n: int) -> np.ndarray:
    """Normal matrix with spectrum a rotated, scaled set of n-th roots of unity."""
    U, _ = np.linalg.qr(complex_normal(rng, (n, n)))
    lam = rng.uniform(0.6, 1.2) * np.exp(2j * np.pi * (np.arange(n) / n + rng.uniform()))
    return (U * lam) @ U.conj().T


def random_instance(rng, p: int, kind: str):
    """A module and a symbol for the path-equivalence checks."""
    if kind == "toeplitz":
        module = make_toeplitz_module(16, p)
        sym = LodaySymbol(tuple(random_laurent(rng, 3 if p == 1 else 2, 3) for _ in range(2 * p)))
    else:
        module = make_commuting_module(random_normal_matrix(rng, 8), random_projection(rng, 8, 3), p)
        sym = LodaySymbol(tuple(random_polynomial(rng, module.algebra) for _ in range(2 * p)))
    return module, sym


def rebranching(rng, p: int, k: int):
    """A symbol, an entry index and another logarithm of that entry's exponential."""
    if k % 2 == 0:
        module = make_toeplitz_module(16, p)
        sym = LodaySymbol(tuple(random_laurent(rng, 2, 2) for _ in range(2 * p)))
        i = int(rng.integers(2 * p))
        shift = int(rng.integers(1, 4)) * (1 if rng.uniform() < 0.5 else -1)
        alt = sym.entries[i] + alg.as_matrix(LaurentAlgebra().monomial(0, 2j * math.pi * shift))
    else:
        module = make_commuting_module(roots_generator(rng, 8), random_projection(rng, 8, 3), p)
        sym = LodaySymbol(tuple(random_polynomial(rng, module.algebra, scale=0.5) for _ in range(2 * p)))
        i = int(rng.integers(2 * p))
        cluster = sorted(rng.choice(8, size=int(rng.integers(1, 4)), replace=False).tolist())
        E = spectral_projection_poly(module, cluster)
        alt = sym.entries[i] + alg.as_matrix(E * (2j * math.pi * int(rng.integers(1, 3))))
    return module, sym, i, alt


def suite_character(rng: np.random.Generator, instances: int, tol: float, threads: int = 1) -> list[Check]:
    L = LaurentAlgebra()
    anchor = Check("hardy-anchor-character", "commutator form of (z, 1/z) = -Tr[PzP, P(1/z)P] = 1", max(tol, 1e-12))
    M = make_toeplitz_module(16, 1)
    sym = LodaySymbol((L.monomial(1), L.monomial(-1)))
    cf = commutator_form(sym, M, threads)
    Pz, Pzi = M.P @ M.represent(L.monomial(1)) @ M.P, M.P @ M.represent(L.monomial(-1)) @ M.P
    direct = -M.trace(Pz @ Pzi - Pzi @ Pz, 2, 1)
    anchor.add(max(abs(cf - 1), abs(cf - direct), abs(cf - winding_oracle(L.monomial(-1), L.monomial(1)))))
    paths = Check("path-equivalence", "τ(ch(a_0,...)) = (-1)^p c_p Σ_SE sgn Tr(Π[P x P, P x P])", max(tol, 1e-9))
    for k in range(instances):
        p = 1 + k % 2
        kind = "toeplitz" if (p == 1 or k % 4 == 3) else "commuting"
        module, s = random_instance(rng, p, kind)
        paths.add(path_equivalence_check(s, module, threads).residual)
    tc = Check("pair-expansion", "Σ_μ sgn(μ) x_μ(0) ⊗ ... = Σ_SE sgn(s) X_s(0)s(1) ⊗ ...", 1e-12)
    for p in (1, 2):
        e = pair_expansion(2 * p)
        keys = set(e.left) | set(e.right)
        tc.add(sum(abs(e.left.get(w, 0) - e.right.get(w, 0)) for w in keys))
        ops = [complex_normal(rng, (2, 2)) for _ in range(2 * p)]
        full = evaluate_words(e.left, ops)
        tc.add(abs(full - pair_commutator_trace(ops)) / max(1.0, abs(full)))
    br = Check("branch-lattice", "changing one logarithm moves the character by (2πi)^p Z", 1e-6)
    gaps = 0.0
    for p in (1, 2):
        for k in range(max(1, instances // 2)):
            module, s, i, alt = rebranching(rng, p, k)
            rep = branch_difference(s, i, alt, module, threads=threads)
            br.add(rep.distance)
            gaps = max(gaps, rep.exp_gap)
    br.detail["max_exp_gap"] = gaps
    lat = Check("lattice-roundtrip", "raw = representative + quotient·(2πi)^p, coordinate in [0,1)", 1e-12)
    for k in range(instances):
        p = 1 + k % 3
        w = lattice_direction(p)
        z = complex_normal(rng) * abs(w) * 3
        v = lattice_reduce(z, p)
        bad = 0.0 if 0 <= v.coordinate < 1 else 1.0
        lat.add(abs(v.representative + v.quotient * w - z) / max(1.0, abs(z)) + bad)
    return [anchor, paths, tc, br, lat]


RUNNERS: dict[str, Callable] = {
    "combinatorics": suite_combinatorics,
    "chains": suite_chains,
    "simplicial": suite_simplicial,
    "fredholm": suite_fredholm,
    "character": suite_character,
}


def run_suite(name: str, seed: int = 0, instances: int = 20, tol: float = 1e-10, threads: int = 1) -> dict:
    """Run one suite (or ``"all"``) and return a JSON-ready report."""
    names = list(SUITES) if name == "all" else [name]
    for n in names:
        if n not in RUNNERS:
            raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES + ('all',))}")
    suites = {}
    for n in names:
        # one independent stream per suite so suites reproduce in isolation
        rng = np.random.default_rng([seed, SUITES.index(n)])
        fn = RUNNERS[n]
        checks = fn(rng, instances, tol, threads) if n == "character" else fn(rng, instances, tol)
        suites[n] = [c.as_dict() for c in checks]
    failed = [f"{n}/{c['name']}: {c['identity']} (residual {c['residual']:.3e} > {c['tolerance']:g})"
              for n, cs in suites.items() for c in cs if not c["passed"]]
    return {"suites": suites, "passed": not failed, "failures": failed}
