"""Vectorized simulation of a fixed-photon-number sector in the Fock basis.

The polynomial algebra in ``fock`` is exact but slow inside optimization
loops.  For a homogeneous state (definite total photon number) the same
physics lives in one finite sector, where a mesh of two-mode elements acts
through small precomputed blocks.  States are amplitude columns over the
sector's occupation basis; several states batch into one matrix.

Conventions match ``fock.apply_unitary``: applying elements in list order
here equals one ``apply_unitary`` with ``compose_elements`` of that list.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .fock import CreationPolynomial, ModeUnitary
from .optics import Beamsplitter, PhaseShifter, reck_decompose, reck_layout

_FACT = [math.factorial(n) for n in range(24)]
_SQRT_FACT = [math.sqrt(f) for f in _FACT]


@lru_cache(maxsize=None)
def sector_space(modes: int, photons: int) -> "SectorSpace":
    occs = []

    def fill(prefix, remaining, slots):
        if slots == 1:
            occs.append(prefix + (remaining,))
            return
        for n in range(remaining + 1):
            fill(prefix + (n,), remaining - n, slots - 1)

    if modes == 0:
        occs = [()] if photons == 0 else []
    else:
        fill((), photons, modes)
    return SectorSpace(modes, photons, tuple(occs),
                       {occ: k for k, occ in enumerate(occs)})


@dataclass(frozen=True, eq=False)
class SectorSpace:
    """Occupation basis of all states with a fixed total photon number."""

    modes: int
    photons: int
    occupations: tuple
    index: dict

    @property
    def dim(self) -> int:
        return len(self.occupations)


def poly_to_sector(p: CreationPolynomial, space: SectorSpace) -> np.ndarray:
    """Amplitude column of a homogeneous polynomial state in the sector basis."""
    v = np.zeros(space.dim, dtype=complex)
    for e, a in p.terms.items():
        if sum(e) != space.photons:
            raise ValueError(f"term {e} has degree {sum(e)}, sector wants "
                             f"{space.photons}")
        w = 1.0
        for n in e:
            w *= _SQRT_FACT[n]
        v[space.index[e]] = a * w
    return v


def sector_to_poly(v: np.ndarray, space: SectorSpace) -> CreationPolynomial:
    terms = {}
    for k, occ in enumerate(space.occupations):
        if abs(v[k]) > 1e-16:
            w = 1.0
            for n in occ:
                w *= _SQRT_FACT[n]
            terms[occ] = v[k] / w
    return CreationPolynomial(space.modes, terms)


def _pair_amplitude_map(s2: np.ndarray, t: int) -> np.ndarray:
    """(t+1)x(t+1) induced action on |n_i, n_j> with n_i + n_j = t.

    ``s2`` acts on single-photon amplitude columns of the two modes; basis
    order is n_i = 0..t.
    """
    block = np.zeros((t + 1, t + 1), dtype=complex)
    for n_i in range(t + 1):
        n_j = t - n_i
        # (s00 x + s10 y)^n_i (s01 x + s11 y)^n_j, coefficients by x-degree
        a = np.array([math.comb(n_i, k) * s2[0, 0] ** k * s2[1, 0] ** (n_i - k)
                      for k in range(n_i + 1)])
        b = np.array([math.comb(n_j, k) * s2[0, 1] ** k * s2[1, 1] ** (n_j - k)
                      for k in range(n_j + 1)])
        coeffs = np.convolve(a, b)
        for m_i in range(t + 1):
            m_j = t - m_i
            block[m_i, n_i] = (coeffs[m_i] * _SQRT_FACT[m_i] * _SQRT_FACT[m_j]
                               / (_SQRT_FACT[n_i] * _SQRT_FACT[n_j]))
    return block


@lru_cache(maxsize=None)
def _pair_groups(modes: int, photons: int, i: int, j: int):
    """Index blocks mixed by a two-mode element, stacked per local total.

    Groups with local total 0 are single invariant basis states and are
    dropped.  The result maps t >= 1 to an integer array of shape
    (groups, t + 1) whose rows are ordered by the occupation of mode i.
    """
    space = sector_space(modes, photons)
    groups: dict = {}
    for k, occ in enumerate(space.occupations):
        rest = tuple(n for m, n in enumerate(occ) if m not in (i, j))
        t = occ[i] + occ[j]
        if t == 0:
            continue
        groups.setdefault((rest, t), [0] * (t + 1))[occ[i]] = k
    by_t: dict = {}
    for (_, t), idx in groups.items():
        by_t.setdefault(t, []).append(idx)
    return {t: np.array(rows) for t, rows in by_t.items()}


@lru_cache(maxsize=None)
def _raising_coefficients(t: int):
    """Angle-independent weights of the raising recursion at local total t."""
    sq_up = np.sqrt(np.arange(1.0, t + 1))        # sqrt(m') for rows 1..t
    sq_down = np.sqrt(t - np.arange(0.0, t))      # sqrt(t - m') for rows 0..t-1
    inv_cols = 1.0 / np.sqrt(np.arange(1.0, t + 1))
    return sq_up[:, None], sq_down[:, None], inv_cols[None, :], 1.0 / math.sqrt(t)


def _pair_blocks(s2: np.ndarray, tmax: int) -> list:
    """All induced blocks up to local total tmax, via the raising recursion.

    Equivalent to ``_pair_amplitude_map`` for each t (tested against it),
    but built in a few whole-array operations per total.
    """
    s00, s01, s10, s11 = s2[0, 0], s2[0, 1], s2[1, 0], s2[1, 1]
    blocks = [np.ones((1, 1), dtype=complex)]
    for t in range(1, tmax + 1):
        prev = blocks[-1]
        sq_up, sq_down, inv_cols, inv0 = _raising_coefficients(t)
        b = np.zeros((t + 1, t + 1), dtype=complex)
        b[1:, 1:] = (s00 * sq_up) * prev
        b[:t, 1:] += (s10 * sq_down) * prev
        b[:, 1:] *= inv_cols
        b[1:, 0] = (s01 * inv0) * (sq_up[:, 0] * prev[:, 0])
        b[:t, 0] += (s11 * inv0) * (sq_down[:, 0] * prev[:, 0])
        blocks.append(b)
    return blocks


def apply_pair(vecs: np.ndarray, space: SectorSpace, i: int, j: int,
               s2: np.ndarray) -> None:
    """In-place two-mode update of amplitude columns (vecs is dim x k)."""
    groups = _pair_groups(space.modes, space.photons, i, j)
    if not groups:
        return
    blocks = _pair_blocks(s2, max(groups))
    for t, idx in groups.items():
        vecs[idx] = np.einsum("ab,gbk->gak", blocks[t], vecs[idx])


@lru_cache(maxsize=None)
def _occupation_matrix(modes: int, photons: int) -> np.ndarray:
    space = sector_space(modes, photons)
    occ = np.array(space.occupations, dtype=float).reshape(space.dim, modes)
    occ.setflags(write=False)
    return occ


def apply_phase(vecs: np.ndarray, space: SectorSpace, mode: int, phase: float) -> None:
    occ = _occupation_matrix(space.modes, space.photons)[:, mode]
    vecs *= np.exp(1j * phase * occ)[:, None]


def bs_single_photon(theta: float, phi: float) -> np.ndarray:
    """Amplitude-column action of one beamsplitter on its two modes.

    Transpose of the substitution-convention block, so sector evolution
    agrees with ``apply_unitary`` on polynomials.
    """
    c, s = math.cos(theta), math.sin(theta)
    ph = np.exp(1j * phi)
    return np.array([[c, -s / ph], [ph * s, c]])


def apply_elements(vecs: np.ndarray, space: SectorSpace, elements) -> None:
    """Apply optical elements in list order to amplitude columns, in place."""
    for el in elements:
        if isinstance(el, Beamsplitter):
            apply_pair(vecs, space, el.mode_i, el.mode_j,
                       bs_single_photon(el.theta, el.phi))
        elif isinstance(el, PhaseShifter):
            apply_phase(vecs, space, el.mode, el.phase)
        else:
            raise TypeError(f"not an optical element: {el!r}")


def apply_mesh_params(vecs: np.ndarray, space: SectorSpace,
                      params: np.ndarray) -> None:
    """Apply a full triangular mesh given raw angles (thetas, phis, phases).

    Raw parameters are unconstrained reals; the mesh at all-zero parameters
    is the identity.
    """
    pairs = reck_layout(space.modes)
    nb = len(pairs)
    thetas, phis, phases = params[:nb], params[nb:2 * nb], params[2 * nb:]
    for (i, j), th, ph in zip(pairs, thetas, phis):
        if th == 0.0 and ph == 0.0:
            continue
        apply_pair(vecs, space, i, j, bs_single_photon(th, ph))
    for mode, ph in enumerate(phases):
        if ph != 0.0:
            apply_phase(vecs, space, mode, ph)


def mesh_param_count(modes: int) -> int:
    return modes * modes


def mesh_matrix(modes: int, params: np.ndarray) -> ModeUnitary:
    """Mode unitary of the mesh, for exporting strategies (substitution form)."""
    pairs = reck_layout(modes)
    nb = len(pairs)
    thetas, phis, phases = params[:nb], params[nb:2 * nb], params[2 * nb:]
    m = np.eye(modes, dtype=complex)
    for (i, j), th, ph in zip(pairs, thetas, phis):
        b = np.eye(modes, dtype=complex)
        c, s = math.cos(th), math.sin(th)
        e = np.exp(1j * ph)
        b[i, i] = c
        b[i, j] = e * s
        b[j, i] = -s / e
        b[j, j] = c
        m = m @ b
    d = np.ones(modes, dtype=complex)
    for mode, ph in enumerate(phases):
        d[mode] = np.exp(1j * ph)
    return ModeUnitary(m @ np.diag(d))


def apply_unitary_sector(vecs: np.ndarray, space: SectorSpace,
                         U: ModeUnitary) -> None:
    """Apply an arbitrary mode unitary via its triangular decomposition."""
    apply_elements(vecs, space, reck_decompose(U))


@lru_cache(maxsize=None)
def _measurement_partition(modes: int, photons: int, mode: int):
    """Per-count row maps from a sector onto child sectors without the mode."""
    space = sector_space(modes, photons)
    out = []
    for count in range(photons + 1):
        child = sector_space(modes - 1, photons - count)
        rows = np.empty(child.dim, dtype=int)
        for k, occ in enumerate(space.occupations):
            if occ[mode] == count:
                rest = occ[:mode] + occ[mode + 1:]
                rows[child.index[rest]] = k
        out.append((child, rows))
    return tuple(out)


def split_by_mode(vecs: np.ndarray, space: SectorSpace, mode: int):
    """Partition amplitude columns by the photon count of one mode.

    Yields (count, child_space, child_vecs); child columns are unnormalized,
    their squared norms being the outcome probabilities.  The measured mode
    is dropped and higher indices shift down, matching ``conditional_state``.
    """
    for count, (child, rows) in enumerate(
            _measurement_partition(space.modes, space.photons, mode)):
        yield count, child, vecs[rows]
