"""Machine checks of the impossibility of a perfect linear discriminator.

The pieces, in the order a full verification runs them:

* ``compute_ns`` / ``condition_residuals``: the detected-mode degree and the
  pairwise orthogonality residuals of the two highest-count conditional
  states, with no auxiliary photons.
* ``verify_aux_factorization``: on random instances, the top-count
  conditional overlap factors into (auxiliary part) x (system part), and the
  next-to-top overlap is a two-term combination with pair-independent
  coefficients - auxiliary photons cannot create orthogonality that was not
  already there.
* ``certify_c0_infeasibility``: multi-restart minimization over unit-norm
  detected-column vectors (completed to full unitaries, so the row-vector
  constraints of unitarity hold exactly) showing the residual of the
  special-label constraint system stays above a floor: only the trivial
  all-zero column satisfies it.
* ``reduce_by_symmetry``: reduces every special label except the fixed
  point to label +1 by conjugating candidate unitaries with the symmetry
  that maps psi_1 to psi_i0.
* ``optimize_discrimination``: a derivative-free search over cascaded mesh
  strategies that empirically never reaches perfect discrimination.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .domino import LABELS, DominoSet, build_domino_set, symmetry_R
from .fock import (
    CreationPolynomial,
    ModeUnitary,
    apply_unitary,
    coefficient_of_power,
    degree_in_mode,
    embed_poly,
    poly_multiply,
    poly_zero,
    vacuum_inner_product,
)
from .measure import CountLeaf, DiscriminationReport, Stage, evaluate_strategy
from .optics import (
    AuxiliaryPreparation,
    embed_with_aux,
    fock_aux,
    normalized_aux,
    random_unitary,
    vacuum_aux,
)
from .sector import (
    apply_mesh_params,
    mesh_matrix,
    mesh_param_count,
    poly_to_sector,
    sector_space,
    split_by_mode,
)

_PAIRS = [(i, j) for a, i in enumerate(LABELS) for j in LABELS[a + 1:]]


# ---------------------------------------------------------------------------
# Detected-mode degree and bare orthogonality conditions
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class NsAnalysis:
    """Maximal detected-mode degree over the nine transformed states."""

    n_s: int
    per_state_degrees: dict


@dataclass(frozen=True, eq=False)
class ConditionResiduals:
    """Magnitudes of the two top conditional overlaps for every state pair.

    ``pairs`` maps (i, j) with i < j to (top residual, next residual); the
    next entry is None when n_s = 0 (degenerate detected mode).
    """

    n_s: int
    pairs: dict
    degenerate: bool = False

    def get(self, i: int, j: int):
        return self.pairs[(i, j) if i < j else (j, i)]

    def max_residual(self) -> float:
        vals = [r for pair in self.pairs.values() for r in pair if r is not None]
        return max(vals, default=0.0)


def _padded_matrices(dset: DominoSet, dim: int) -> dict:
    out = {}
    for lab in LABELS:
        m = np.zeros((dim, dim))
        m[:6, :6] = dset.matrices[lab]
        out[lab] = m
    return out


def _transformed_states(U: ModeUnitary, dset: DominoSet) -> dict:
    return {lab: apply_unitary(embed_poly(dset.states[lab], U.dim), U)
            for lab in LABELS}


def compute_ns(U: ModeUnitary, d: int, dset: DominoSet | None = None) -> NsAnalysis:
    """Detected-mode degree per state and their maximum (0, 1 or 2)."""
    if dset is None:
        dset = build_domino_set()
    if U.dim < 6:
        raise ValueError("apparatus must span at least the six system modes")
    degrees = {lab: degree_in_mode(p, d)
               for lab, p in _transformed_states(U, dset).items()}
    return NsAnalysis(max(degrees.values()), degrees)


def condition_residuals(U: ModeUnitary, d: int,
                        dset: DominoSet | None = None) -> ConditionResiduals:
    """Pairwise overlaps of the n_s and n_s - 1 conditional states, no auxiliaries.

    A perfect discriminator needs every entry to vanish.  n_s = 0 marks a
    detected mode decoupled from all inputs; residuals are then undefined.
    """
    if dset is None:
        dset = build_domino_set()
    transformed = _transformed_states(U, dset)
    n_s = max(degree_in_mode(p, d) for p in transformed.values())
    if n_s == 0:
        return ConditionResiduals(0, {}, degenerate=True)
    top = {lab: coefficient_of_power(p, d, n_s) for lab, p in transformed.items()}
    nxt = {lab: coefficient_of_power(p, d, n_s - 1) for lab, p in transformed.items()}
    pairs = {}
    for i, j in _PAIRS:
        pairs[(i, j)] = (
            abs(vacuum_inner_product(top[i], top[j])),
            abs(vacuum_inner_product(nxt[i], nxt[j])),
        )
    return ConditionResiduals(n_s, pairs)


# ---------------------------------------------------------------------------
# Auxiliary photons do not help: factorization of conditional overlaps
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AuxFactorizationReport:
    """Deviations of the factorization identities for one (aux, unitary) pair."""

    n_a: int
    n_s: int
    max_top_deviation: float
    max_next_deviation: float
    coeff_top: float          # weight of the n_s overlap in the two-term form
    coeff_next: float         # weight of the n_s - 1 overlap
    coeff_next_expected: float  # squared norm of the top auxiliary coefficient
    tolerance: float
    passed: bool


def _coeff_or_zero(pieces: dict, n: int, mode_count: int) -> CreationPolynomial:
    if n < 0:
        return poly_zero(mode_count)
    return pieces.get(n, poly_zero(mode_count))


def verify_aux_factorization(aux: AuxiliaryPreparation, U: ModeUnitary,
                             dset: DominoSet | None = None,
                             tol: float = 1e-8) -> AuxFactorizationReport:
    """Check both factorization identities for every one of the 36 state pairs.

    Top count: <psi_i^(Nmax)|psi_j^(Nmax)> equals the auxiliary norm factor
    times the bare system overlap.  Next count: the overlap is a_top X_ij +
    a_next Y_ij where X, Y are the bare n_s and n_s - 1 system overlaps and
    the two real weights are fit once from a single well-conditioned pair,
    then verified on all others.
    """
    if dset is None:
        dset = build_domino_set()
    m = U.dim
    if m != 6 + aux.aux_mode_count:
        raise ValueError(f"unitary dimension {m} does not match 6 + "
                         f"{aux.aux_mode_count} auxiliary modes")
    d = 0
    taux = apply_unitary(embed_poly(aux.polynomial, m, offset=6), U)
    n_a = degree_in_mode(taux, d)
    qa = {n: coefficient_of_power(taux, d, n) for n in range(n_a + 1)}

    tsys = _transformed_states(U, dset)
    n_s = max(degree_in_mode(p, d) for p in tsys.values())
    qs = {lab: {n: coefficient_of_power(p, d, n) for n in range(n_s + 1)}
          for lab, p in tsys.items()}

    n_max = n_a + n_s
    qtop, qnext = {}, {}
    for lab in LABELS:
        total = poly_multiply(taux, tsys[lab])
        qtop[lab] = coefficient_of_power(total, d, n_max)
        qnext[lab] = coefficient_of_power(total, d, n_max - 1) if n_max >= 1 \
            else poly_zero(m)

    aux_top_norm = vacuum_inner_product(qa[n_a], qa[n_a]).real

    max_top_dev = 0.0
    rows = []
    for i, j in _PAIRS:
        lhs_top = vacuum_inner_product(qtop[i], qtop[j])
        sys_top = vacuum_inner_product(qs[i][n_s], qs[j][n_s])
        max_top_dev = max(max_top_dev, abs(lhs_top - aux_top_norm * sys_top))

        lhs_next = vacuum_inner_product(qnext[i], qnext[j])
        sys_next = vacuum_inner_product(
            _coeff_or_zero(qs[i], n_s - 1, m), _coeff_or_zero(qs[j], n_s - 1, m))
        rows.append((sys_top, sys_next, lhs_next))

    # Fit the two real weights from the best-conditioned single pair; fall
    # back to a least-squares fit over all pairs when every 2x2 is singular.
    best, best_det = None, 0.0
    for x1, x2, y in rows:
        det = abs(x1.real * x2.imag - x1.imag * x2.real)
        if det > best_det:
            best, best_det = (x1, x2, y), det
    if best is not None and best_det > 1e-12:
        x1, x2, y = best
        a = np.linalg.solve(np.array([[x1.real, x2.real], [x1.imag, x2.imag]]),
                            np.array([y.real, y.imag]))
    else:
        lhs = np.array([[x1.real, x2.real] for x1, x2, _ in rows]
                       + [[x1.imag, x2.imag] for x1, x2, _ in rows])
        rhs = np.array([y.real for *_, y in rows] + [y.imag for *_, y in rows])
        a, *_ = np.linalg.lstsq(lhs, rhs, rcond=None)
    coeff_top, coeff_next = float(a[0]), float(a[1])

    max_next_dev = max(abs(y - coeff_top * x1 - coeff_next * x2)
                       for x1, x2, y in rows)
    passed = max_top_dev <= tol and max_next_dev <= tol
    return AuxFactorizationReport(n_a, n_s, max_top_dev, max_next_dev,
                                  coeff_top, coeff_next, aux_top_norm, tol, passed)


def _random_aux(rng: np.random.Generator, aux_modes: int,
                max_degree: int = 3) -> AuxiliaryPreparation:
    n_terms = int(rng.integers(1, 4))
    terms = []
    for _ in range(n_terms):
        degree = int(rng.integers(1, max_degree + 1))
        e = [0] * aux_modes
        for _ in range(degree):
            e[int(rng.integers(aux_modes))] += 1
        amp = complex(rng.standard_normal(), rng.standard_normal())
        terms.append((tuple(e), amp))
    return normalized_aux(terms, aux_mode_count=aux_modes)


@dataclass(frozen=True, eq=False)
class AuxTrialsSummary:
    trials: int
    max_top_deviation: float
    max_next_deviation: float
    tolerance: float
    all_passed: bool
    failures: int


def aux_factorization_trials(trials: int, seed: int,
                             dset: DominoSet | None = None,
                             aux_mode_choices=(1, 2),
                             max_degree: int = 3,
                             tol: float = 1e-8) -> AuxTrialsSummary:
    """Randomized sweep of the factorization identities (seeded, deterministic)."""
    if dset is None:
        dset = build_domino_set()
    worst_top = worst_next = 0.0
    failures = 0
    for t in range(trials):
        rng = np.random.default_rng((seed, t))
        aux_modes = int(rng.choice(aux_mode_choices))
        aux = _random_aux(rng, aux_modes, max_degree)
        U = random_unitary(6 + aux_modes, rng)
        rep = verify_aux_factorization(aux, U, dset, tol=tol)
        worst_top = max(worst_top, rep.max_top_deviation)
        worst_next = max(worst_next, rep.max_next_deviation)
        failures += 0 if rep.passed else 1
    return AuxTrialsSummary(trials, worst_top, worst_next, tol,
                            failures == 0, failures)


# ---------------------------------------------------------------------------
# The detected-column constraint system and its numerical certificate
# ---------------------------------------------------------------------------

def complete_first_column(u: np.ndarray) -> np.ndarray:
    """Some unitary whose first column is the given unit vector.

    Any completion gives the same constraint residuals (the system depends
    on the rows only through their pairwise inner products, fixed by
    unitarity), so a deterministic QR completion is fine.
    """
    u = np.asarray(u, dtype=complex)
    n = len(u)
    m = np.eye(n, dtype=complex)
    m[:, 0] = u
    q, _ = np.linalg.qr(m)
    c = np.vdot(q[:, 0], u)
    q[:, 0] = q[:, 0] * (c / abs(c))
    return q


def detected_column(U: ModeUnitary) -> np.ndarray:
    """First six entries of the detected-output column (the c0 vector)."""
    return np.array(U.matrix[:6, 0])


def first_row_vector(U: ModeUnitary, M: np.ndarray) -> np.ndarray:
    """Detected-row vector of the transformed coefficient matrix (0th entry off).

    Equals both the first row of U^T M_pad U past its zeroth entry and the
    unitarity-form sum over (M u)_l times row l of the non-detected block.
    """
    u6 = U.matrix[:6, 0]
    r6 = U.matrix[:6, 1:]
    return (M[:6, :6] @ u6) @ r6


def c0_residual_map(U: ModeUnitary, dset: DominoSet | None = None):
    """Quadratic residuals per label and pair residuals of the row vectors."""
    if dset is None:
        dset = build_domino_set()
    u6 = U.matrix[:6, 0]
    quad = {}
    mvec = {}
    for lab in LABELS:
        v = dset.matrices[lab] @ u6
        quad[lab] = abs(u6 @ v)
        mvec[lab] = v @ U.matrix[:6, 1:]
    pairs = {(i, j): abs(np.vdot(mvec[i], mvec[j])) for i, j in _PAIRS}
    return quad, pairs


def i0_residual_multiset(U: ModeUnitary, i0: int,
                         dset: DominoSet | None = None) -> np.ndarray:
    """Sorted residual magnitudes of the constraint system for a special label."""
    quad, pairs = c0_residual_map(U, dset)
    vals = [quad[lab] for lab in LABELS if lab != i0]
    vals += list(pairs.values())
    return np.sort(np.array(vals))


def forced_form_c0(i0: int, a: complex, b: complex) -> np.ndarray:
    """The only quadratic-constraint-compatible column patterns, normalized.

    i0 = 0 keeps entries (a2, b2) = (a, b); i0 = 1 keeps (a1, b1, b2) =
    (a, b, b).
    """
    if i0 == 0:
        u = np.array([0, a, 0, 0, b, 0], dtype=complex)
    elif i0 == 1:
        u = np.array([a, 0, 0, b, b, 0], dtype=complex)
    else:
        raise ValueError("forced forms are tabulated for special labels 0 and 1")
    n = np.linalg.norm(u)
    if n == 0:
        raise ValueError("forced form requires a nonzero parameter")
    return u / n


@dataclass(frozen=True, eq=False)
class C0Certificate:
    """Best constraint violation found over all restarts, at unit column norm."""

    i0: int
    best_c0: np.ndarray
    residual_at_unit_norm: float
    restarts: int
    seed: int
    floor: float
    passed: bool


def _certificate_objective(x: np.ndarray, mats: list, skip: int) -> float:
    u = x[:6] + 1j * x[6:]
    n = np.linalg.norm(u)
    if n < 1e-9:
        return 1e6
    u = u / n
    q = complete_first_column(u)
    r = q[:, 1:]
    total = 0.0
    mvecs = []
    for idx, m in enumerate(mats):
        v = m @ u
        if idx != skip:
            total += abs(u @ v) ** 2
        mvecs.append(v @ r)
    for a in range(len(mvecs)):
        for b in range(a + 1, len(mvecs)):
            total += abs(np.vdot(mvecs[a], mvecs[b])) ** 2
    return total


def certify_c0_infeasibility(i0: int, restarts: int = 200, seed: int = 0,
                             floor: float = 1e-4,
                             maxfev: int = 2000,
                             dset: DominoSet | None = None) -> C0Certificate:
    """Search for a unit-norm detected column satisfying the constraint system.

    The certificate passes when the smallest residual found over all seeded
    restarts stays above the floor: no nontrivial column comes close to
    satisfying the system, matching the conclusion that only the zero
    column (a decoupled detector) does.
    """
    if i0 not in (0, 1):
        raise ValueError("the symmetry reduction leaves special labels 0 and 1")
    if restarts < 1:
        raise ValueError("at least one restart is required")
    if dset is None:
        dset = build_domino_set()
    mats = [dset.matrices[lab] for lab in LABELS]
    skip = LABELS.index(i0)
    best_val, best_x = math.inf, None
    for r in range(restarts):
        rng = np.random.default_rng((seed, i0, r))
        x0 = rng.standard_normal(12)
        x0 /= np.linalg.norm(x0)
        res = minimize(_certificate_objective, x0, args=(mats, skip),
                       method="Nelder-Mead",
                       options={"maxfev": maxfev, "xatol": 1e-10,
                                "fatol": 1e-14, "adaptive": False})
        if res.fun < best_val:
            best_val, best_x = res.fun, res.x
    u = best_x[:6] + 1j * best_x[6:]
    u /= np.linalg.norm(u)
    residual = math.sqrt(max(best_val, 0.0))
    return C0Certificate(i0, u, residual, restarts, seed, floor,
                         passed=residual > floor)


# ---------------------------------------------------------------------------
# Symmetry reduction of the special label
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SymmetryReduction:
    """Conjugation taking a candidate for special label i0 to one for label 1."""

    i0: int
    op: object  # SymmetryOp mapping psi_1 to psi_i0

    def conjugate(self, U: ModeUnitary) -> ModeUnitary:
        pad = np.eye(U.dim, dtype=complex)
        pad[:6, :6] = self.op.matrix.matrix
        return ModeUnitary(pad @ U.matrix)


def reduce_by_symmetry(i0: int) -> SymmetryReduction:
    """Reduction record for any special label except the fixed point 0."""
    if i0 == 0:
        raise ValueError("label 0 is the fixed point; it needs its own analysis")
    return SymmetryReduction(i0, symmetry_R(i0))


# ---------------------------------------------------------------------------
# Empirical stress test: derivative-free search over cascade strategies
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OptimizeConfig:
    """Search bounds and budget; deterministic per seed."""

    aux_modes: int = 0
    aux_photons: int = 0
    cascade_depth: int = 1
    restarts: int = 20
    seed: int = 0
    nm_maxfev: int | None = None     # default scales with the parameter count
    max_seconds: float | None = None

    def validate(self):
        if not 0 <= self.aux_modes <= 6:
            raise ValueError("aux_modes must be between 0 and 6")
        if self.aux_photons < 0 or self.aux_photons + 2 > 6:
            raise ValueError("total photon number must stay at most 6")
        if self.aux_photons > 0 and self.aux_modes == 0:
            raise ValueError("auxiliary photons need at least one auxiliary mode")
        if not 1 <= self.cascade_depth <= 3:
            raise ValueError("cascade depth must be between 1 and 3")
        if self.cascade_depth >= 6 + self.aux_modes:
            raise ValueError("cascade deeper than the available modes")
        if self.restarts < 1:
            raise ValueError("at least one restart is required")


@dataclass(frozen=True, eq=False)
class OptimizeTrace:
    """Per-restart search records plus the merge outcome."""

    records: list
    best_restart: int
    best_value: float
    budget_exhausted: bool


def _subtree_params(modes: int, depth: int, branches: int) -> int:
    if depth == 0:
        return 0
    return mesh_param_count(modes) + branches * _subtree_params(modes - 1,
                                                                depth - 1, branches)


def _aux_for_config(config: OptimizeConfig) -> AuxiliaryPreparation:
    if config.aux_modes == 0:
        return vacuum_aux()
    photons = [config.aux_photons] + [0] * (config.aux_modes - 1)
    return fock_aux(config.aux_modes, photons)


def _input_vectors(config: OptimizeConfig, dset: DominoSet):
    aux = _aux_for_config(config)
    modes = 6 + config.aux_modes
    photons = 2 + config.aux_photons
    space = sector_space(modes, photons)
    vecs = np.zeros((space.dim, len(LABELS)), dtype=complex)
    for col, lab in enumerate(LABELS):
        vecs[:, col] = poly_to_sector(embed_with_aux(aux, dset.states[lab]), space)
    return aux, space, vecs


def _cascade_success(params: np.ndarray, space, vecs: np.ndarray,
                     depth: int, branches: int) -> float:
    """Uniform-prior greedy success of the cascade defined by raw mesh angles."""

    def rec(sp, v, depth_left, p):
        n_mesh = mesh_param_count(sp.modes)
        w = v.copy()
        apply_mesh_params(w, sp, p[:n_mesh])
        rest = p[n_mesh:]
        total = 0.0
        if depth_left == 1:
            for _, _, cv in split_by_mode(w, sp, 0):
                if cv.size:
                    total += float(np.sum(np.max(np.abs(cv) ** 2, axis=1)))
            return total
        sub = len(rest) // branches
        for count, child, cv in split_by_mode(w, sp, 0):
            if np.max(np.abs(cv)) < 1e-12:
                continue
            total += rec(child, cv, depth_left - 1,
                         rest[count * sub:(count + 1) * sub])
        return total

    return rec(space, vecs, depth, params) / len(LABELS)


def _cascade_rows(params: np.ndarray, space, vecs: np.ndarray,
                  depth: int, branches: int) -> dict:
    """Joint outcome table: (counts path, pattern) -> per-label probabilities."""
    rows = {}

    def rec(sp, v, depth_left, p, counts):
        n_mesh = mesh_param_count(sp.modes)
        w = v.copy()
        apply_mesh_params(w, sp, p[:n_mesh])
        rest = p[n_mesh:]
        for count, child, cv in split_by_mode(w, sp, 0):
            if cv.size == 0 or np.max(np.abs(cv)) < 1e-12:
                continue
            if depth_left == 1:
                probs = np.abs(cv) ** 2
                for k, occ in enumerate(child.occupations):
                    if probs[k].max() > 1e-15:
                        rows[(counts + (count,), occ)] = probs[k]
            else:
                sub = len(rest) // branches
                rec(child, cv, depth_left - 1,
                    rest[count * sub:(count + 1) * sub], counts + (count,))

    rec(space, vecs, depth, params, ())
    return rows


def _report_from_rows(rows: dict) -> DiscriminationReport:
    from .measure import _path_key

    per_state = {lab: 0.0 for lab in LABELS}
    confusion = {}
    for (counts, pattern), probs in sorted(rows.items()):
        best = max(range(len(LABELS)), key=lambda k: (probs[k], -LABELS[k]))
        guess = LABELS[best]
        per_state[guess] += float(probs[best])
        confusion[_path_key(counts, pattern)] = {
            "probs": {str(LABELS[k]): float(probs[k]) for k in range(len(LABELS))
                      if probs[k] > 0.0},
            "guess": guess,
        }
    success = sum(per_state.values()) / len(LABELS)
    return DiscriminationReport(success, per_state, confusion)


def strategy_from_params(config: OptimizeConfig, params: np.ndarray) -> Stage:
    """Export raw mesh angles as an explicit cascade strategy tree."""
    photons = 2 + config.aux_photons
    branches = photons + 1

    def build(modes, depth_left, p):
        n_mesh = mesh_param_count(modes)
        unitary = mesh_matrix(modes, p[:n_mesh])
        rest = p[n_mesh:]
        if depth_left == 1:
            return Stage(unitary, 0, {}, default=CountLeaf())
        sub = len(rest) // branches
        children = {n: build(modes - 1, depth_left - 1,
                             rest[n * sub:(n + 1) * sub])
                    for n in range(branches)}
        return Stage(unitary, 0, children)

    return build(6 + config.aux_modes, config.cascade_depth, params)


def optimize_discrimination(config: OptimizeConfig,
                            dset: DominoSet | None = None):
    """Seeded multi-restart simplex search for the best cascade strategy.

    Returns (best strategy, its report, trace).  Restart 0 starts from the
    all-zero mesh (the direct-counting baseline), so the search never ends
    below that; the remaining restarts start from uniform random angles.
    This is an empirical stress test of the no-go statement, not a proof.
    """
    config.validate()
    if dset is None:
        dset = build_domino_set()
    aux, space, vecs = _input_vectors(config, dset)
    branches = space.photons + 1
    n_params = _subtree_params(space.modes, config.cascade_depth, branches)
    maxfev = config.nm_maxfev or max(400, 4 * n_params)

    def objective(p):
        return -_cascade_success(p, space, vecs, config.cascade_depth, branches)

    records = []
    best = None  # (negative success, restart index, params)
    exhausted = False
    started = time.monotonic()
    for r in range(config.restarts):
        if config.max_seconds is not None and r > 0 \
                and time.monotonic() - started > config.max_seconds:
            exhausted = True
            break
        if r == 0:
            x0 = np.zeros(n_params)
        else:
            rng = np.random.default_rng((config.seed, r))
            x0 = rng.uniform(0.0, 2.0 * math.pi, size=n_params)
        res = minimize(objective, x0, method="Nelder-Mead",
                       options={"maxfev": maxfev, "xatol": 1e-6,
                                "fatol": 1e-10, "adaptive": n_params >= 20})
        value = -float(res.fun)
        records.append({"restart": r, "seed": config.seed,
                        "start": "baseline" if r == 0 else "random",
                        "iterations": int(res.nit),
                        "evaluations": int(res.nfev),
                        "best_value": value})
        if best is None or (-value, r) < best[:2]:
            best = (-value, r, res.x)
    _, best_restart, best_params = best
    rows = _cascade_rows(best_params, space, vecs, config.cascade_depth, branches)
    report = _report_from_rows(rows)
    strategy = strategy_from_params(config, best_params)
    trace = OptimizeTrace(records, best_restart, report.success_probability,
                          exhausted)
    return strategy, report, trace
