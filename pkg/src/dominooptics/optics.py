"""Linear-optical elements, mode unitaries, and auxiliary-photon inputs.

Beamsplitter convention: the 2x2 block on modes (i, j) is

    [[cos(theta),            exp(i*phi) sin(theta)],
     [-exp(-i*phi) sin(theta), cos(theta)]]

real at phi = 0, transmissive at theta = 0.  Element lists compose in
application order: applying e1 then e2 to a state equals one application of
compose_elements([e1, e2], ...), whose matrix is M(e1) @ M(e2) in the
substitution convention of ``apply_unitary``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock import (
    CreationPolynomial,
    ModeUnitary,
    apply_unitary,
    embed_poly,
    poly_multiply,
    poly_norm,
    vacuum_inner_product,
)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Beamsplitter:
    """Two-mode mixer; theta in [0, pi/2], phi in [0, 2*pi)."""

    mode_i: int
    mode_j: int
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if self.mode_i == self.mode_j or self.mode_i < 0 or self.mode_j < 0:
            raise ValueError(f"beamsplitter modes must be distinct and non-negative, "
                             f"got ({self.mode_i}, {self.mode_j})")
        if not 0.0 <= self.theta <= math.pi / 2 + 1e-12:
            raise ValueError(f"theta {self.theta} outside [0, pi/2]")
        if not 0.0 <= self.phi < TWO_PI:
            raise ValueError(f"phi {self.phi} outside [0, 2*pi)")


@dataclass(frozen=True)
class PhaseShifter:
    """Single-mode phase, in [0, 2*pi)."""

    mode: int
    phase: float

    def __post_init__(self):
        if self.mode < 0:
            raise ValueError(f"mode {self.mode} must be non-negative")
        if not 0.0 <= self.phase < TWO_PI:
            raise ValueError(f"phase {self.phase} outside [0, 2*pi)")


OpticalElement = Beamsplitter | PhaseShifter


def element_matrix(element: OpticalElement, dimension: int) -> np.ndarray:
    """Dense matrix of one element embedded in an identity of the given size."""
    m = np.eye(dimension, dtype=complex)
    if isinstance(element, Beamsplitter):
        i, j = element.mode_i, element.mode_j
        if i >= dimension or j >= dimension:
            raise ValueError(f"beamsplitter modes ({i}, {j}) out of range for "
                             f"dimension {dimension}")
        c = math.cos(element.theta)
        s = math.sin(element.theta)
        ph = np.exp(1j * element.phi)
        m[i, i] = c
        m[i, j] = ph * s
        m[j, i] = -s / ph
        m[j, j] = c
    elif isinstance(element, PhaseShifter):
        if element.mode >= dimension:
            raise ValueError(f"phase shifter mode {element.mode} out of range for "
                             f"dimension {dimension}")
        m[element.mode, element.mode] = np.exp(1j * element.phase)
    else:
        raise TypeError(f"not an optical element: {element!r}")
    return m


def compose_elements(elements, dimension: int) -> ModeUnitary:
    """Unitary of the element sequence, applied in list order (empty = identity)."""
    m = np.eye(dimension, dtype=complex)
    for el in elements:
        m = m @ element_matrix(el, dimension)
    return ModeUnitary(m)


def random_unitary(dimension: int, seed) -> ModeUnitary:
    """Haar-distributed unitary from a seeded RNG (deterministic per seed)."""
    if dimension < 1:
        raise ValueError("dimension must be at least 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    z = (rng.standard_normal((dimension, dimension))
         + 1j * rng.standard_normal((dimension, dimension))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    q = q * (d / np.abs(d))
    return ModeUnitary(q)


def reck_layout(dimension: int) -> list:
    """Ordered (mode_i, mode_j) slots of the triangular mesh for this size."""
    pairs = []
    for col in range(dimension - 1):
        for row in range(dimension - 1, col, -1):
            pairs.append((row, row - 1))
    return pairs


def mesh_elements(dimension: int, thetas, phis, output_phases) -> list:
    """Element list for a full triangular mesh: D(D-1)/2 beamsplitters + D phases."""
    pairs = reck_layout(dimension)
    if len(thetas) != len(pairs) or len(phis) != len(pairs):
        raise ValueError(f"mesh for dimension {dimension} needs {len(pairs)} "
                         f"beamsplitter angles")
    if len(output_phases) != dimension:
        raise ValueError(f"mesh for dimension {dimension} needs {dimension} output phases")
    elements = [Beamsplitter(i, j, th, ph % TWO_PI)
                for (i, j), th, ph in zip(pairs, thetas, phis)]
    elements += [PhaseShifter(m, ph % TWO_PI) for m, ph in enumerate(output_phases)]
    return elements


def reck_decompose(U: ModeUnitary) -> list:
    """Triangular decomposition into beamsplitters plus output phase shifters.

    compose_elements(reck_decompose(U), U.dim) reproduces U to machine
    precision; used as the optimizer's universal parameterization.
    """
    n = U.dim
    v = np.array(U.matrix, dtype=complex)
    elements = []
    for col in range(n - 1):
        for row in range(n - 1, col, -1):
            x_i, x_j = v[row - 1, col], v[row, col]
            if abs(x_j) < 1e-14:
                elements.append(Beamsplitter(row, row - 1, 0.0, 0.0))
                continue
            theta = math.atan2(abs(x_j), abs(x_i))
            phi = (np.angle(x_i) - np.angle(x_j)) if abs(x_i) > 1e-14 else -np.angle(x_j)
            c = math.cos(theta)
            s = math.sin(theta)
            ph = np.exp(1j * phi)
            b = np.eye(n, dtype=complex)
            b[row - 1, row - 1] = c
            b[row - 1, row] = ph * s
            b[row, row - 1] = -s / ph
            b[row, row] = c
            v = b @ v
            # B(i,j,theta,phi)† = B(j,i,theta,-phi): stays in the element family.
            elements.append(Beamsplitter(row, row - 1, min(theta, math.pi / 2),
                                         (-phi) % TWO_PI))
    for m in range(n):
        elements.append(PhaseShifter(m, float(np.angle(v[m, m]) % TWO_PI)))
    return elements


@dataclass(frozen=True, eq=False)
class AuxiliaryPreparation:
    """Normalized photon content of the auxiliary modes, indexed 0..aux-1.

    The polynomial may be given over the auxiliary modes alone or over the
    full 6 + aux space; the wide form must leave the system modes untouched
    and is stripped down to the auxiliary block.
    """

    aux_mode_count: int
    polynomial: CreationPolynomial

    def __post_init__(self):
        if self.aux_mode_count < 0:
            raise ValueError("auxiliary mode count must be non-negative")
        p = self.polynomial
        if p.mode_count == 6 + self.aux_mode_count and self.aux_mode_count != 6:
            if any(any(e[k] for k in range(6)) for e in p.terms):
                raise ValueError("auxiliary polynomial touches system mode indices")
            p = CreationPolynomial(self.aux_mode_count,
                                   {e[6:]: a for e, a in p.terms.items()})
            object.__setattr__(self, "polynomial", p)
        elif p.mode_count != self.aux_mode_count:
            raise ValueError(
                f"auxiliary polynomial spans {p.mode_count} modes, "
                f"expected {self.aux_mode_count} or {6 + self.aux_mode_count}"
            )
        if abs(vacuum_inner_product(p, p).real - 1.0) > 1e-8:
            raise ValueError("auxiliary polynomial must have unit vacuum inner product")


def vacuum_aux() -> AuxiliaryPreparation:
    """No auxiliary modes at all (the bare six-mode setting)."""
    return AuxiliaryPreparation(0, CreationPolynomial(0, {(): 1.0 + 0j}))


def fock_aux(aux_mode_count: int, photons_per_mode) -> AuxiliaryPreparation:
    """Definite photon numbers per auxiliary mode, normalized."""
    photons_per_mode = tuple(int(n) for n in photons_per_mode)
    if len(photons_per_mode) != aux_mode_count:
        raise ValueError("one photon count per auxiliary mode is required")
    weight = math.prod(math.factorial(n) for n in photons_per_mode)
    p = CreationPolynomial(aux_mode_count,
                           {photons_per_mode: 1.0 / math.sqrt(weight)})
    return AuxiliaryPreparation(aux_mode_count, p)


def normalized_aux(terms, aux_mode_count: int | None = None) -> AuxiliaryPreparation:
    """Auxiliary preparation from raw (exponents, amplitude) pairs, normalized."""
    from .fock import poly_from_terms, poly_normalize

    p = poly_normalize(poly_from_terms(terms, mode_count=aux_mode_count))
    return AuxiliaryPreparation(p.mode_count, p)


def embed_with_aux(aux: AuxiliaryPreparation, state: CreationPolynomial,
                   system_unitary: ModeUnitary | None = None) -> CreationPolynomial:
    """Product state of the six system modes and the auxiliary modes.

    The auxiliary polynomial's indices are shifted past the system block, so
    the result lives on 6 + aux_mode_count modes.  An optional six-mode
    unitary is applied to the system part first.  A unit-norm state times a
    unit-norm preparation stays unit norm.
    """
    if state.mode_count != 6:
        raise ValueError(f"system state must span 6 modes, got {state.mode_count}")
    if system_unitary is not None:
        if system_unitary.dim != 6:
            raise ValueError("system unitary must be 6x6")
        state = apply_unitary(state, system_unitary)
    total = 6 + aux.aux_mode_count
    return poly_multiply(embed_poly(state, total, 0),
                         embed_poly(aux.polynomial, total, 6))
