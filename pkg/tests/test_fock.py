"""Creation-polynomial algebra: constructors, products, inner products,
unitary substitution, and degree extraction."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dominooptics.domino import build_domino_set
from dominooptics.fock import (
    CreationPolynomial,
    ModeUnitary,
    PRUNE_TOL,
    apply_unitary,
    coefficient_of_power,
    degree_in_mode,
    embed_poly,
    fock_vector_form,
    poly_add,
    poly_allclose,
    poly_from_terms,
    poly_multiply,
    poly_norm,
    poly_scale,
    poly_zero,
    remove_mode,
    single_mode_power,
    vacuum_inner_product,
)
from dominooptics.optics import random_unitary

PSI0_TERMS = [((0, 1, 0, 0, 1, 0), 1.0)]


def random_poly(rng, modes=4, max_degree=3, terms=4):
    built = []
    for _ in range(terms):
        e = [0] * modes
        for _ in range(int(rng.integers(0, max_degree + 1))):
            e[int(rng.integers(modes))] += 1
        built.append((tuple(e), complex(rng.standard_normal(), rng.standard_normal())))
    return poly_from_terms(built, mode_count=modes)


# ---------------------------------------------------------------------------
# poly_from_terms
# ---------------------------------------------------------------------------

def test_from_terms_single_monomial():
    p = poly_from_terms(PSI0_TERMS)
    assert p.mode_count == 6
    assert p.terms == {(0, 1, 0, 0, 1, 0): 1.0 + 0j}


def test_from_terms_empty_is_zero():
    p = poly_from_terms([], mode_count=6)
    assert p.is_zero and p.mode_count == 6


def test_from_terms_cancellation():
    e = (1, 0, 2)
    p = poly_from_terms([(e, 1.0), (e, -1.0)])
    assert p.is_zero


def test_from_terms_rejects_mixed_lengths():
    with pytest.raises(ValueError):
        poly_from_terms([((1, 0), 1.0), ((1, 0, 0), 1.0)])


def test_from_terms_rejects_negative_exponent():
    with pytest.raises(ValueError):
        poly_from_terms([((1, -1), 1.0)])


def test_pruning_drops_tiny_amplitudes():
    p = poly_from_terms([((1, 0), 1.0), ((0, 1), PRUNE_TOL / 10)])
    assert list(p.terms) == [(1, 0)]


# ---------------------------------------------------------------------------
# poly_multiply
# ---------------------------------------------------------------------------

def test_multiply_squares_single_mode():
    a = single_mode_power(0, 1, 2)
    sq = poly_multiply(a, a)
    assert sq.terms == {(2, 0): 1.0 + 0j}


def test_multiply_by_constant_is_identity():
    psi0 = poly_from_terms(PSI0_TERMS)
    one = poly_from_terms([((0,) * 6, 1.0)])
    assert poly_allclose(poly_multiply(psi0, one), psi0, 1e-15)


def test_multiply_difference_of_squares():
    a1 = single_mode_power(0, 1, 2)
    a2 = single_mode_power(1, 1, 2)
    lhs = poly_multiply(poly_add(a1, a2), poly_add(a1, poly_scale(a2, -1)))
    rhs = poly_from_terms([((2, 0), 1.0), ((0, 2), -1.0)])
    assert poly_allclose(lhs, rhs, 1e-14)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_multiply_commutative_associative(data):
    seed = data.draw(st.integers(0, 10**6))
    rng = np.random.default_rng(seed)
    p, q, r = (random_poly(rng) for _ in range(3))
    assert poly_allclose(poly_multiply(p, q), poly_multiply(q, p), 1e-12)
    assert poly_allclose(poly_multiply(poly_multiply(p, q), r),
                         poly_multiply(p, poly_multiply(q, r)), 1e-12)


# ---------------------------------------------------------------------------
# vacuum_inner_product
# ---------------------------------------------------------------------------

def test_inner_product_normalized_monomial():
    psi0 = poly_from_terms(PSI0_TERMS)
    assert vacuum_inner_product(psi0, psi0) == pytest.approx(1.0)


def test_inner_product_orthogonal_pair():
    dset = build_domino_set()
    assert abs(vacuum_inner_product(dset.states[1], dset.states[-1])) < 1e-15


def test_inner_product_double_occupation_weight():
    p = single_mode_power(0, 2, 1)
    assert vacuum_inner_product(p, p) == pytest.approx(2.0)


def test_inner_product_brute_force_oracle():
    # Explicit Fock-basis amplitudes (amp * prod sqrt(n!)) must give the same
    # inner products on every monomial of total degree <= 4 over 6 modes.
    modes = 6
    monomials = []

    def fill(prefix, left):
        if len(prefix) == modes:
            monomials.append(tuple(prefix))
            return
        for n in range(left + 1):
            fill(prefix + [n], left - n)

    for d in range(5):
        fill([], d)
    rng = np.random.default_rng(123)
    for _ in range(40):
        picks = rng.choice(len(monomials), size=5, replace=False)
        p = poly_from_terms([(monomials[k], complex(*rng.standard_normal(2)))
                             for k in picks], mode_count=modes)
        picks = rng.choice(len(monomials), size=5, replace=False)
        q = poly_from_terms([(monomials[k], complex(*rng.standard_normal(2)))
                             for k in picks], mode_count=modes)
        fast = vacuum_inner_product(p, q)
        fp, fq = fock_vector_form(p), fock_vector_form(q)
        slow = sum(fp[e].conjugate() * a for e, a in fq.items() if e in fp)
        assert fast == pytest.approx(slow, abs=1e-12)


# ---------------------------------------------------------------------------
# apply_unitary
# ---------------------------------------------------------------------------

def test_apply_identity_is_noop():
    psi0 = poly_from_terms(PSI0_TERMS)
    assert poly_allclose(apply_unitary(psi0, ModeUnitary(np.eye(6))), psi0, 1e-15)


def test_apply_unitary_dimension_mismatch():
    psi0 = poly_from_terms(PSI0_TERMS)
    with pytest.raises(ValueError):
        apply_unitary(psi0, ModeUnitary(np.eye(5)))


def test_balanced_mixer_on_psi0():
    # Hand substitution with the declared block [[c, s], [-s, c]] at theta =
    # pi/4 on modes (1, 4): a2 -> (d1 + d2)/sqrt2, b2 -> (-d1 + d2)/sqrt2,
    # so psi0 = a2 b2 becomes (d2^2 - d1^2)/2.
    psi0 = poly_from_terms(PSI0_TERMS)
    u = np.eye(6, dtype=complex)
    c = s = 1.0 / math.sqrt(2.0)
    u[1, 1], u[1, 4], u[4, 1], u[4, 4] = c, s, -s, c
    out = apply_unitary(psi0, ModeUnitary(u))
    expected = poly_from_terms([((0, 2, 0, 0, 0, 0), -0.5), ((0, 0, 0, 0, 2, 0), 0.5)])
    assert poly_allclose(out, expected, 1e-12)
    assert degree_in_mode(out, 1) == 2
    q = coefficient_of_power(out, 1, 2)
    assert q.terms == pytest.approx({(0,) * 6: -0.5 + 0j})


def test_unitary_invariance_of_inner_products():
    rng = np.random.default_rng(7)
    for trial in range(20):
        p = random_poly(rng, modes=5)
        q = random_poly(rng, modes=5)
        u = random_unitary(5, rng)
        lhs = vacuum_inner_product(p, q)
        rhs = vacuum_inner_product(apply_unitary(p, u), apply_unitary(q, u))
        assert lhs == pytest.approx(rhs, abs=1e-10)


def test_two_photon_state_stays_homogeneous():
    dset = build_domino_set()
    for seed in range(5):
        u = random_unitary(6, seed)
        for lab, p in dset.states.items():
            out = apply_unitary(p, u)
            assert out.total_degrees() == {2}, (seed, lab)


# ---------------------------------------------------------------------------
# degree extraction and reconstruction
# ---------------------------------------------------------------------------

def test_degree_in_mode_examples():
    psi0 = poly_from_terms(PSI0_TERMS)
    assert degree_in_mode(psi0, 1) == 1
    assert degree_in_mode(poly_zero(6), 3) == 0


def test_coefficient_of_power_examples():
    psi0 = poly_from_terms(PSI0_TERMS)
    b2 = coefficient_of_power(psi0, 1, 1)
    assert b2.terms == {(0, 0, 0, 0, 1, 0): 1.0 + 0j}
    assert coefficient_of_power(psi0, 1, 0).is_zero


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 3))
def test_power_reconstruction(seed, mode):
    rng = np.random.default_rng(seed)
    p = random_poly(rng)
    rebuilt = poly_zero(p.mode_count)
    for n in range(degree_in_mode(p, mode) + 1):
        piece = poly_multiply(single_mode_power(mode, n, p.mode_count),
                              coefficient_of_power(p, mode, n))
        rebuilt = poly_add(rebuilt, piece)
    assert rebuilt.terms == p.terms


def test_remove_mode_requires_empty_mode():
    psi0 = poly_from_terms(PSI0_TERMS)
    with pytest.raises(ValueError):
        remove_mode(psi0, 1)
    stripped = remove_mode(coefficient_of_power(psi0, 1, 1), 1)
    assert stripped.mode_count == 5
    assert stripped.terms == {(0, 0, 0, 1, 0): 1.0 + 0j}


def test_embed_poly_shifts_indices():
    p = poly_from_terms([((1, 1), 2.0)])
    wide = embed_poly(p, 5, offset=2)
    assert wide.terms == {(0, 0, 1, 1, 0): 2.0 + 0j}


def test_mode_unitary_rejects_non_unitary():
    with pytest.raises(ValueError):
        ModeUnitary(np.ones((3, 3)))


def test_poly_norm_matches_inner_product():
    rng = np.random.default_rng(3)
    p = random_poly(rng)
    assert poly_norm(p) == pytest.approx(
        math.sqrt(vacuum_inner_product(p, p).real))
