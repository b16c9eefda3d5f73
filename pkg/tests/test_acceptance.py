"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines.  Criteria 8 and 10 carry real search budgets (minutes); everything
else is seconds.
"""

import itertools
import math
import time

import numpy as np
import pytest

from dominooptics.domino import (
    LABELS,
    build_domino_set,
    compose_symmetries,
    quadratic_form_poly,
    state_permutation,
    symmetry_R,
    symmetry_S,
    symmetry_T,
)
from dominooptics.fock import (
    ModeUnitary,
    apply_unitary,
    embed_poly,
    poly_allclose,
    poly_from_terms,
)
from dominooptics.measure import (
    conditional_state,
    optimal_guess_success,
    outcome_distribution,
)
from dominooptics.nogo import (
    OptimizeConfig,
    aux_factorization_trials,
    c0_residual_map,
    certify_c0_infeasibility,
    complete_first_column,
    detected_column,
    first_row_vector,
    forced_form_c0,
    i0_residual_multiset,
    optimize_discrimination,
    reduce_by_symmetry,
)
from dominooptics.optics import Beamsplitter, compose_elements, random_unitary

SEED = 20260810
T_TABLE = {0: 0, 1: 2, -1: -2, 2: 3, -2: -3, 3: 4, -3: -4, 4: 1, -4: -1}


@pytest.fixture(scope="module")
def dset():
    return build_domino_set()


class Timer:
    def __enter__(self):
        self.start = time.monotonic()
        self._stop = None
        return self

    def __exit__(self, *exc):
        self._stop = time.monotonic()

    @property
    def elapsed(self):
        return (self._stop if self._stop is not None else time.monotonic()) - self.start


def report(number, passed, timer, detail):
    status = "PASS" if passed else "FAIL"
    print(f"ACCEPTANCE {number:02d} {status} ({timer.elapsed:.2f} s): {detail}")
    assert passed, f"criterion {number}: {detail}"


def test_criterion_01_orthonormality(dset):
    with Timer() as t:
        from dominooptics.domino import gram_matrix
        dev = float(np.max(np.abs(gram_matrix(dset) - np.eye(9))))
    report(1, dev < 1e-12 and t.elapsed < 1.0, t,
           f"gram deviation {dev:.2e} < 1e-12")


def test_criterion_02_symmetry_table(dset):
    with Timer() as t:
        ok = True
        t_perm = state_permutation(symmetry_T(), dset)
        for i, (j, phase) in t_perm.items():
            ok &= j == T_TABLE[i] and abs(phase - 1.0) < 1e-12
        s_perm = state_permutation(symmetry_S(), dset)
        for i, (j, phase) in s_perm.items():
            ok &= j == -i and abs(phase - 1.0) < 1e-12
        tm = symmetry_T().matrix.matrix
        sm = symmetry_S().matrix.matrix
        ok &= np.array_equal(np.linalg.matrix_power(tm, 4), np.eye(6))
        ok &= np.array_equal(sm @ sm, np.eye(6))
        for k in (1, 2, 3, 4, -1, -2, -3, -4):
            ok &= state_permutation(symmetry_R(k), dset)[1][0] == k
    report(2, ok and t.elapsed < 1.0, t,
           "T/S action table, group relations, and R labels all exact")


def test_criterion_03_balanced_mixer_bunching(dset):
    with Timer() as t:
        u = compose_elements([Beamsplitter(1, 4, math.pi / 4)], 6)
        dist = outcome_distribution(dset.states[0], u)
        bunched = [(0, 2, 0, 0, 0, 0), (0, 0, 0, 0, 2, 0)]
        coincidence = sum(p for occ, p in dist.items() if occ not in bunched)
        devs = [abs(dist.get(occ, 0.0) - 0.5) for occ in bunched]
        ok = coincidence == 0.0 and max(devs) < 1e-12
    report(3, ok, t,
           f"coincidence {coincidence:.1e}, bunching deviations {max(devs):.2e}")


def test_criterion_04_direct_counting_baseline(dset):
    with Timer() as t:
        # Independent oracle: hand-enumerated occupation patterns per state.
        def occ(a, b):
            e = [0] * 6
            e[a] += 1
            e[3 + b] += 1
            return tuple(e)

        oracle = {0: {occ(1, 1): 1.0}}
        for k, (pat_a, pats_b) in {1: (0, (0, 1)), 3: (2, (2, 1))}.items():
            for sign in (k, -k):
                oracle[sign] = {occ(pat_a, b): 0.5 for b in pats_b}
        for k, (pats_a, pat_b) in {2: ((2, 1), 0), 4: ((0, 1), 2)}.items():
            for sign in (k, -k):
                oracle[sign] = {occ(a, pat_b): 0.5 for a in pats_a}
        outcomes = set().union(*oracle.values())
        oracle_success = sum(
            max(d.get(o, 0.0) for d in oracle.values()) for o in outcomes) / 9.0

        ident = ModeUnitary(np.eye(6))
        dists = {lab: outcome_distribution(dset.states[lab], ident)
                 for lab in LABELS}
        success = optimal_guess_success(dists)
        ok = (abs(oracle_success - 5.0 / 9.0) < 1e-15
              and abs(success - 5.0 / 9.0) < 1e-12)
    report(4, ok, t, f"direct counting success {success!r} vs 5/9 "
                     f"(oracle {oracle_success!r})")


def test_criterion_05_pair_indistinguishability(dset):
    with Timer() as t:
        ident = ModeUnitary(np.eye(6))
        worst = 0.0
        ok = True
        for k in (1, 2, 3, 4):
            plus = outcome_distribution(dset.states[k], ident)
            minus = outcome_distribution(dset.states[-k], ident)
            ok &= set(plus) == set(minus)
            worst = max(worst, max(abs(plus[o] - minus[o]) for o in plus))
        ok &= worst < 1e-14
    report(5, ok, t, f"equal supports, max probability deviation {worst:.2e}")


def test_criterion_06_aux_factorization(dset):
    with Timer() as t:
        summary = aux_factorization_trials(200, seed=SEED, dset=dset, tol=1e-8)
        ok = summary.all_passed and t.elapsed < 120.0
    report(6, ok, t,
           f"200 instances, max deviations top {summary.max_top_deviation:.2e} "
           f"next {summary.max_next_deviation:.2e} < 1e-8")


def test_criterion_07_matrix_consistency(dset):
    with Timer() as t:
        worst_state = worst_m00 = worst_cond = 0.0
        for trial in range(100):
            u = random_unitary(7, (SEED, trial))
            c0 = detected_column(u)
            for lab in LABELS:
                m = dset.matrices[lab]
                mpad = np.zeros((7, 7))
                mpad[:6, :6] = m
                mt = u.matrix.T @ mpad @ u.matrix
                via_matrix = quadratic_form_poly(mt)
                via_poly = apply_unitary(embed_poly(dset.states[lab], 7), u)
                diff = poly_from_terms(
                    list(via_matrix.terms.items())
                    + [(e, -a) for e, a in via_poly.terms.items()], mode_count=7)
                worst_state = max(worst_state,
                                  max((abs(a) for a in diff.terms.values()),
                                      default=0.0))
                worst_m00 = max(worst_m00, abs(mt[0, 0] - c0 @ m @ c0))
            for lab in (0, 1, -2):  # conditional-state identity per instance
                mvec = first_row_vector(u, dset.matrices[lab])
                cond, _ = conditional_state(embed_poly(dset.states[lab], 7),
                                            u, 0, 1)
                expected = poly_from_terms(
                    [(tuple(1 if m_ == k else 0 for m_ in range(6)),
                      2.0 * mvec[k]) for k in range(6)], mode_count=6)
                worst_cond = max(worst_cond, 0.0 if poly_allclose(
                    cond, expected, 1e-10) else 1.0)
        ok = worst_state < 1e-10 and worst_m00 < 1e-10 and worst_cond == 0.0
    report(7, ok, t,
           f"100 unitaries: state dev {worst_state:.2e}, quadratic-form dev "
           f"{worst_m00:.2e}, conditional identity holds")


def test_criterion_08_c0_certificate(dset):
    with Timer() as t:
        certs = {i0: certify_c0_infeasibility(i0, restarts=200, seed=SEED,
                                              dset=dset)
                 for i0 in (0, 1)}
        ok = all(c.passed and c.residual_at_unit_norm > 1e-4
                 for c in certs.values())

        # Forced-form regressions: the quadratic constraints vanish and the
        # surviving pair residuals are the advertised |u|^2 ||r||^2 terms.
        rng = np.random.default_rng(SEED)
        for _ in range(10):
            a, b = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            u0 = forced_form_c0(0, a, b)
            q0, p0 = c0_residual_map(ModeUnitary(complete_first_column(u0)), dset)
            ok &= all(q0[lab] < 1e-12 for lab in LABELS if lab != 0)
            ok &= abs(p0[(-1, 1)] - abs(u0[4]) ** 2 / 8) < 1e-10
            ok &= abs(p0[(-2, 2)] - abs(u0[1]) ** 2 / 8) < 1e-10
            ok &= max(p0[(-1, 1)], p0[(-2, 2)]) > 1.0 / 32.0

            u1 = forced_form_c0(1, a, b)
            q1, p1 = c0_residual_map(ModeUnitary(complete_first_column(u1)), dset)
            ok &= all(q1[lab] < 1e-12 for lab in LABELS if lab != 1)
            ok &= abs(p1[(-3, 3)] - abs(u1[3]) ** 2 / 8) < 1e-10
            ok &= abs(p1[(-4, 4)] - abs(u1[0]) ** 2 / 8) < 1e-10
            ok &= max(p1[(-3, 3)], p1[(-4, 4)]) > 0.0
        ok &= t.elapsed < 300.0
    report(8, ok, t,
           "floors " + ", ".join(
               f"i0={i0}: {c.residual_at_unit_norm:.4f}"
               for i0, c in certs.items()) + " > 1e-4; forced forms verified")


def test_criterion_09_symmetry_reduction(dset):
    with Timer() as t:
        worst = 0.0
        for i0 in (-4, -3, -2, -1, 2, 3, 4):
            red = reduce_by_symmetry(i0)
            for trial in range(20):
                u = random_unitary(7, (SEED, i0 + 100, trial))
                before = i0_residual_multiset(u, i0, dset)
                after = i0_residual_multiset(red.conjugate(u), 1, dset)
                worst = max(worst, float(np.max(np.abs(before - after))))
        # Label 1 itself: identity conjugation.
        red1 = reduce_by_symmetry(1)
        u = random_unitary(7, (SEED, 1))
        worst = max(worst, float(np.max(np.abs(
            i0_residual_multiset(u, 1, dset)
            - i0_residual_multiset(red1.conjugate(u), 1, dset)))))
        ok = worst < 1e-10
    report(9, ok, t, f"20 trials per label, worst multiset deviation {worst:.2e}")


def test_criterion_10_empirical_no_go(dset):
    # Falsification attempt at the configured bounds, not a proof: the
    # search must reach the direct-counting baseline and must never reach
    # perfect discrimination.
    with Timer() as t:
        config = OptimizeConfig(aux_modes=2, aux_photons=2, cascade_depth=2,
                                restarts=50, seed=SEED)
        strategy, rep, trace = optimize_discrimination(config, dset)
        values = [r["best_value"] for r in trace.records]
        ok = (len(values) == 50
              and max(values) < 0.999
              and rep.success_probability < 0.999
              and rep.success_probability >= 5.0 / 9.0 - 1e-12
              and not trace.budget_exhausted
              and t.elapsed < 1800.0)
    report(10, ok, t,
           f"50 restarts, best success {rep.success_probability:.6f} in "
           f"[5/9, 0.999)")
