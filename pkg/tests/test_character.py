import cmath
import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from multchar.algebra import AlgebraMismatch, LaurentAlgebra, PointwiseAlgebra, as_matrix, laurent_operator, matrix
from multchar.chains import HochschildChain, star_product
from multchar.character import (
    LodaySymbol,
    PreconditionError,
    branch_difference,
    chern_rel_loday,
    commutator_form,
    evaluate_words,
    lattice_direction,
    lattice_reduce,
    multiplicative_character,
    path_equivalence_check,
    pair_expansion,
    pair_commutator_trace,
)
from multchar.fredholm import make_commuting_module, make_toeplitz_module
from multchar.perms import permutations, sign
from multchar.sampling import random_laurent, random_polynomial, random_projection
from multchar.verify import random_instance, rebranching, roots_generator

L = LaurentAlgebra()
z, zi = L.monomial(1), L.monomial(-1)
seeds = st.integers(0, 2**32 - 1)
TWO_PI_I = 2j * math.pi


def test_anchor_character():
    M = make_toeplitz_module(16, 1)
    sym = LodaySymbol((z, zi))
    value = commutator_form(sym, M)
    P = M.P
    Z, Zi = laurent_operator(z, 16), laurent_operator(zi, 16)
    C = (P @ Z @ P) @ (P @ Zi @ P) - (P @ Zi @ P) @ (P @ Z @ P)
    direct = -np.trace(C[4:-4, 4:-4])
    assert abs(value - 1) < 1e-12 and abs(value - direct) < 1e-12
    rep = multiplicative_character(sym, M)
    assert rep.value.quotient == 0 and abs(rep.value.representative - 1) < 1e-12
    assert rep.paths.residual < 1e-12


def test_constant_entry_gives_zero():
    M = make_toeplitz_module(8, 1)
    sym = LodaySymbol((L.monomial(0, 2.5), z + zi))
    assert commutator_form(sym, M) == 0
    assert multiplicative_character(sym, M).value.representative == 0


def test_chern_character_small_cases():
    a, b = as_matrix(z), as_matrix(L.monomial(2))
    got = chern_rel_loday(LodaySymbol((a, b)))
    assert got.residual(HochschildChain.tensor(z, L.monomial(2))) == 0
    # degree-zero star product of the negated traces gives the same tensor
    x, y = HochschildChain.tensor(-1 * z), HochschildChain.tensor(-1 * L.monomial(2))
    assert star_product(x, y, interior=True).residual(got) == 0
    four = chern_rel_loday(LodaySymbol((z, zi, z * z, zi * zi)))
    assert len(four.coeffs) == 6


@given(seeds, st.sampled_from([(1, "toeplitz"), (2, "toeplitz"), (1, "commuting"), (2, "commuting")]))
def test_paths_agree(seed, case):
    p, kind = case
    module, sym = random_instance(np.random.default_rng(seed), p, kind)
    assert path_equivalence_check(sym, module).residual < 1e-9


def test_paths_vanish_for_identity_projection():
    rng = np.random.default_rng(1)
    module = make_commuting_module(roots_generator(rng, 4), np.eye(4), 2)
    sym = LodaySymbol(tuple(random_polynomial(rng, module.algebra) for _ in range(4)))
    rep = path_equivalence_check(sym, module)
    assert abs(rep.path_a) < 1e-12 and abs(rep.path_b) < 1e-12


def test_matrix_valued_symbol():
    # a 2x2 symbol enters only through its trace
    M = make_toeplitz_module(12, 1)
    a = matrix([[z, L.monomial(3)], [L.zero(), L.zero()]])
    b = matrix([[L.zero(), L.zero()], [zi, zi]])
    sym = LodaySymbol((a, b))
    assert abs(commutator_form(sym, M) - commutator_form(LodaySymbol((z, zi)), M)) < 1e-12
    assert path_equivalence_check(sym, M).residual < 1e-12


@given(seeds)
def test_multilinear_in_each_slot(seed):
    rng = np.random.default_rng(seed)
    M = make_toeplitz_module(16, 2)
    ents = [random_laurent(rng, 2, 2) for _ in range(4)]
    extra = random_laurent(rng, 2, 2)
    i = int(rng.integers(4))
    c = complex(rng.normal(), rng.normal())

    def cf(e):
        return commutator_form(LodaySymbol(tuple(e)), M)

    mixed = list(ents)
    mixed[i] = ents[i] * c + extra
    other = list(ents)
    other[i] = extra
    assert abs(cf(mixed) - (c * cf(ents) + cf(other))) < 1e-10 * max(1, abs(cf(mixed)))


@given(seeds)
def test_swapping_two_later_entries_negates(seed):
    rng = np.random.default_rng(seed)
    M = make_toeplitz_module(16, 2)
    ents = [random_laurent(rng, 2, 2) for _ in range(4)]
    swapped = [ents[0], ents[2], ents[1], ents[3]]
    a = chern_rel_loday(LodaySymbol(tuple(ents)))
    b = chern_rel_loday(LodaySymbol(tuple(swapped)))
    assert a.residual(-1 * b) < 1e-14
    assert abs(commutator_form(LodaySymbol(tuple(ents)), M) + commutator_form(LodaySymbol(tuple(swapped)), M)) < 1e-9


# -- the pair expansion -------------------------------------------------------


@pytest.mark.parametrize("k", [2, 4, 6])
def test_pair_expansion_symbolic(k):
    ex = pair_expansion(k)
    # independent brute force of the left side
    brute = Counter()
    for mu in permutations(k):
        brute[mu.images] += sign(mu)
    assert ex.left == {w: c for w, c in brute.items() if c}
    assert ex.left == ex.right


def test_pair_expansion_p1():
    ex = pair_expansion(2)
    assert ex.left == {(0, 1): 1, (1, 0): -1} == ex.right


@given(seeds, st.sampled_from([2, 4]))
def test_pair_expansion_numeric(seed, k):
    rng = np.random.default_rng(seed)
    ops = [rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(k)]
    ex = pair_expansion(k)
    a, b = evaluate_words(ex.left, ops), pair_commutator_trace(ops)
    assert abs(a - b) < 1e-12 * max(1, abs(a))


# -- lattice ------------------------------------------------------------------


def test_lattice_direction():
    assert lattice_direction(1) == complex(0, 2 * math.pi)
    assert lattice_direction(2) == complex(-4 * math.pi**2, 0)
    assert abs(lattice_direction(3) - TWO_PI_I**3) < 1e-9


def test_lattice_examples():
    v = lattice_reduce(0, 1)
    assert (v.quotient, v.representative) == (0, 0)
    v = lattice_reduce(4j * math.pi, 1)
    assert v.quotient == 2 and v.representative == 0
    # coordinate 1 - 1/(4π²) already lies in [0, 1), so nothing is removed
    v = lattice_reduce(-4 * math.pi**2 + 1, 2)
    assert v.quotient == 0 and v.representative == -4 * math.pi**2 + 1
    v = lattice_reduce(-8 * math.pi**2 - 1, 2)
    assert v.quotient == 2 and abs(v.representative + 1) < 1e-12


@given(st.floats(-50, 50), st.floats(-50, 50), st.integers(1, 3))
def test_lattice_roundtrip(re, im, p):
    z_ = complex(re, im)
    v = lattice_reduce(z_, p)
    w = lattice_direction(p)
    assert abs(v.representative + v.quotient * w - z_) <= 8 * np.finfo(float).eps * max(1, abs(z_), abs(w))
    assert 0 <= v.coordinate < 1 or abs(v.coordinate) < 1e-12


# -- branches ------------------------------------------------------------------


@pytest.mark.parametrize("p", [1, 2])
@pytest.mark.parametrize("k", range(4))
def test_rebranchings_land_in_lattice(p, k):
    module, sym, i, alt = rebranching(np.random.default_rng([p, k]), p, k)
    rep = branch_difference(sym, i, alt, module)
    assert rep.in_lattice and rep.exp_gap <= 1e-10


def test_identity_branch_and_constant_shift():
    M = make_toeplitz_module(8, 1)
    sym = LodaySymbol((z, zi))
    assert branch_difference(sym, 0, z, M).difference.raw == 0
    rep = branch_difference(sym, 1, zi + L.monomial(0, TWO_PI_I), M)
    assert rep.nearest == 0 and rep.in_lattice


def test_branch_precondition_failure():
    M = make_toeplitz_module(8, 1)
    with pytest.raises(PreconditionError, match="operator norm"):
        branch_difference(LodaySymbol((z, zi)), 0, z + L.monomial(0, 1.0), M)


def test_symbol_validation():
    with pytest.raises(ValueError):
        LodaySymbol((z,))
    with pytest.raises(AlgebraMismatch):
        LodaySymbol((z, PointwiseAlgebra(1).unit()))
    with pytest.raises(ValueError):
        commutator_form(LodaySymbol((z, zi)), make_toeplitz_module(8, 2))
