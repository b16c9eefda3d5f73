"""The nine orthogonal two-photon product states and their symmetries.

Mode ordering is fixed as indices 0..5 = a1, a2, a3, b1, b2, b3 (one photon
lives in the a modes, one in the b modes).  The states, labeled -4..+4, are

    psi_0   = a2 b2
    psi_+-1 = a1 (b1 +- b2) / sqrt(2)
    psi_+-2 = b1 (a3 +- a2) / sqrt(2)
    psi_+-3 = a3 (b3 +- b2) / sqrt(2)
    psi_+-4 = b3 (a1 +- a2) / sqrt(2)

Every state is also carried as a real symmetric 6x6 coefficient matrix M
with psi = A^T M A |0>, A = (a1, a2, a3, b1, b2, b3).

Symmetry operators are returned in the substitution convention consumed by
``apply_unitary`` (the transpose of the matrix that acts on single-photon
amplitude columns), so applying them reproduces the label permutations
documented on each constructor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import (
    CreationPolynomial,
    ModeUnitary,
    apply_unitary,
    poly_allclose,
    poly_from_terms,
    poly_norm,
    poly_scale,
    poly_zero,
    vacuum_inner_product,
)

LABELS = (-4, -3, -2, -1, 0, 1, 2, 3, 4)

_SQ2 = 1.0 / np.sqrt(2.0)

# (label, [(exponent vector over a1,a2,a3,b1,b2,b3, amplitude), ...])
_STATE_TERMS = {
    0: [((0, 1, 0, 0, 1, 0), 1.0)],
    +1: [((1, 0, 0, 1, 0, 0), _SQ2), ((1, 0, 0, 0, 1, 0), +_SQ2)],
    -1: [((1, 0, 0, 1, 0, 0), _SQ2), ((1, 0, 0, 0, 1, 0), -_SQ2)],
    +2: [((0, 0, 1, 1, 0, 0), _SQ2), ((0, 1, 0, 1, 0, 0), +_SQ2)],
    -2: [((0, 0, 1, 1, 0, 0), _SQ2), ((0, 1, 0, 1, 0, 0), -_SQ2)],
    +3: [((0, 0, 1, 0, 0, 1), _SQ2), ((0, 0, 1, 0, 1, 0), +_SQ2)],
    -3: [((0, 0, 1, 0, 0, 1), _SQ2), ((0, 0, 1, 0, 1, 0), -_SQ2)],
    +4: [((1, 0, 0, 0, 0, 1), _SQ2), ((0, 1, 0, 0, 0, 1), +_SQ2)],
    -4: [((1, 0, 0, 0, 0, 1), _SQ2), ((0, 1, 0, 0, 0, 1), -_SQ2)],
}


@dataclass(frozen=True, eq=False)
class DominoSet:
    """The nine labeled states with their symmetric coefficient matrices."""

    states: dict   # label -> CreationPolynomial over 6 modes
    matrices: dict  # label -> real symmetric 6x6 ndarray

    @property
    def labels(self):
        return LABELS


@dataclass(frozen=True, eq=False)
class SymmetryOp:
    """A 6x6 real symmetry of the state set, in substitution convention."""

    matrix: ModeUnitary
    name: str


def symmetrized_matrix(p: CreationPolynomial) -> np.ndarray:
    """Real symmetric M with p = A^T M A |0> for a degree-2 polynomial."""
    m = np.zeros((p.mode_count, p.mode_count))
    for e, a in p.terms.items():
        if abs(a.imag) > 1e-15:
            raise ValueError("symmetrized_matrix expects real amplitudes")
        occupied = [k for k, n in enumerate(e) for _ in range(n)]
        if len(occupied) != 2:
            raise ValueError(f"term {e} is not of total degree 2")
        k, l = occupied
        if k == l:
            m[k, k] += a.real
        else:
            m[k, l] += a.real / 2.0
            m[l, k] += a.real / 2.0
    return m


def quadratic_form_poly(m: np.ndarray) -> CreationPolynomial:
    """The state A^T M A |0> for a coefficient matrix M of any dimension."""
    m = np.asarray(m)
    dim = m.shape[0]
    terms = []
    for k in range(dim):
        for l in range(dim):
            if m[k, l] != 0:
                e = [0] * dim
                e[k] += 1
                e[l] += 1
                terms.append((tuple(e), m[k, l]))
    return poly_from_terms(terms, mode_count=dim)


def build_domino_set() -> DominoSet:
    """Construct all nine states plus their coefficient matrices."""
    states = {lab: poly_from_terms(t) for lab, t in _STATE_TERMS.items()}
    matrices = {lab: symmetrized_matrix(p) for lab, p in states.items()}
    return DominoSet(states=states, matrices=matrices)


def gram_matrix(dset: DominoSet) -> np.ndarray:
    """9x9 Gram matrix in label order -4..+4 (identity for an orthonormal set)."""
    g = np.zeros((9, 9), dtype=complex)
    for i, li in enumerate(LABELS):
        for j, lj in enumerate(LABELS):
            g[i, j] = vacuum_inner_product(dset.states[li], dset.states[lj])
    return g


def _action_matrix_T() -> np.ndarray:
    # Column convention: photon-A mode i -> photon-B mode i, photon-B mode i
    # -> photon-A mode 4-i (1-based), on the basis a1,a2,a3,b1,b2,b3.
    t = np.zeros((6, 6))
    for i in range(3):
        t[3 + i, i] = 1.0       # a_i -> b_i
        t[2 - i, 3 + i] = 1.0   # b_i -> a_{4-i}
    return t


def symmetry_T() -> SymmetryOp:
    """Mode swap T: psi_0 fixed, psi_{+-k} -> psi_{+-(k+1)} cyclically (T^4 = 1)."""
    return SymmetryOp(ModeUnitary(_action_matrix_T().T), "T")


def symmetry_S() -> SymmetryOp:
    """Sign flip on a2 and b2: psi_i -> psi_{-i} (S^2 = 1)."""
    s = np.diag([1.0, -1.0, 1.0, 1.0, -1.0, 1.0])
    return SymmetryOp(ModeUnitary(s), "S")


def compose_symmetries(*ops: SymmetryOp) -> SymmetryOp:
    """Apply the given symmetries in order (leftmost acts first)."""
    m = np.eye(6)
    names = []
    for op in ops:
        m = m @ op.matrix.matrix
        names.append(op.name)
    return SymmetryOp(ModeUnitary(m), "*".join(names) if names else "I")


def symmetry_R(k: int) -> SymmetryOp:
    """Composite symmetry mapping psi_1 to psi_k, for k in +-1..+-4.

    R_{+k} applies the mode swap |k|-1 times; R_{-k} follows with the sign
    flip.  k = 0 is rejected: psi_0 is the fixed point of the whole group.
    """
    if k == 0:
        raise ValueError("psi_0 is a fixed point; no symmetry maps psi_1 to it")
    if not -4 <= k <= 4:
        raise ValueError(f"label {k} out of range")
    ops = [symmetry_T()] * (abs(k) - 1)
    if k < 0:
        ops.append(symmetry_S())
    op = compose_symmetries(*ops)
    return SymmetryOp(op.matrix, f"R{k:+d}")


def apply_symmetry(op: SymmetryOp, p: CreationPolynomial) -> CreationPolynomial:
    return apply_unitary(p, op.matrix)


def state_permutation(op: SymmetryOp, dset: DominoSet | None = None, tol: float = 1e-10) -> dict:
    """Label permutation induced by op: {i: (j, phase)} with op(psi_i) = phase psi_j.

    Raises when some image fails to match a basis state up to a global
    phase, naming the first offending label.  All group elements here are
    real so phases come out +-1, but detection handles any unit phase.
    """
    if dset is None:
        dset = build_domino_set()
    result = {}
    for i in LABELS:
        image = apply_unitary(dset.states[i], op.matrix)
        matched = None
        for j in LABELS:
            overlap = vacuum_inner_product(dset.states[j], image)
            if abs(abs(overlap) - 1.0) <= tol:
                phase = overlap / abs(overlap)
                if poly_allclose(image, poly_scale(dset.states[j], phase), tol):
                    matched = (j, phase)
                    break
        if matched is None:
            raise ValueError(
                f"operator {op.name} does not map psi_{i:+d} onto the state set"
            )
        result[i] = matched
    return result


def domino_set_to_json_dict(dset: DominoSet) -> dict:
    """JSON-ready document: labels, monomials, amplitudes as [re, im] pairs."""
    states = {}
    for lab in LABELS:
        p = dset.states[lab]
        states[str(lab)] = [
            {"exponents": list(e), "amplitude": [a.real, a.imag]}
            for e, a in sorted(p.terms.items())
        ]
    matrices = {str(lab): [[float(x) for x in row] for row in dset.matrices[lab]]
                for lab in LABELS}
    return {"mode_count": 6, "labels": list(LABELS), "states": states, "matrices": matrices}
