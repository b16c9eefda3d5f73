"""Sparse polynomials in bosonic creation operators acting on the vacuum.

A state is stored as a complex-weighted sum of monomials in the mode
creation operators, keyed by dense exponent vectors.  Creation operators
commute, so multiplication just adds exponents.  Mode unitaries act by
substituting every input operator with the matching linear combination of
output operators (row convention: input mode k becomes sum_j U[k, j] out_j,
so the quadratic coefficient matrix of a two-photon state transforms as
U^T M U).

All values are immutable after construction and all operations are pure
functions; amplitudes below PRUNE_TOL are dropped after every operation to
keep the term maps sparse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Exponent vector of one creation-operator monomial, one entry per mode.
Monomial = tuple[int, ...]

# Amplitudes below this are discarded after every arithmetic operation.
# Far below every verification tolerance used downstream.
PRUNE_TOL = 1e-14

# Maximum allowed deviation of U†U from the identity at construction.
UNITARY_TOL = 1e-12

_FACTORIAL = [math.factorial(n) for n in range(40)]


@dataclass(frozen=True, eq=False)
class CreationPolynomial:
    """Polynomial in creation operators applied to |0>, not stored normalized.

    ``terms`` maps canonical exponent tuples to complex amplitudes; equal
    monomials are merged at construction and near-zero amplitudes pruned.
    Treat instances as read-only.
    """

    mode_count: int
    terms: dict

    def __repr__(self):
        return f"CreationPolynomial(modes={self.mode_count}, terms={len(self.terms)})"

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def total_degrees(self) -> set:
        """Set of total degrees present (a homogeneous state has one)."""
        return {sum(e) for e in self.terms}


@dataclass(frozen=True, eq=False)
class ModeUnitary:
    """Square complex unitary over modes; validated at construction."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"mode unitary must be square, got shape {m.shape}")
        dev = np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))
        if dev > UNITARY_TOL:
            raise ValueError(f"matrix is not unitary: max |U†U - I| = {dev:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __repr__(self):
        return f"ModeUnitary(dim={self.dim})"


def _pruned(terms: dict) -> dict:
    return {e: a for e, a in terms.items() if abs(a) > PRUNE_TOL}


def poly_zero(mode_count: int) -> CreationPolynomial:
    return CreationPolynomial(mode_count, {})


def poly_constant(value: complex, mode_count: int) -> CreationPolynomial:
    """The constant polynomial value * identity (value * |0> as a state)."""
    return CreationPolynomial(mode_count, _pruned({(0,) * mode_count: complex(value)}))


def poly_from_terms(terms, mode_count: int | None = None) -> CreationPolynomial:
    """Build a canonical polynomial from (exponent-vector, amplitude) pairs.

    Equal monomials merge by amplitude addition.  ``mode_count`` may be
    omitted when at least one term is given; for an empty term list it is
    required (the zero polynomial still has a fixed mode count).
    """
    terms = list(terms)
    if not terms:
        if mode_count is None:
            raise ValueError("mode_count is required for an empty term list")
        return poly_zero(mode_count)
    if mode_count is None:
        mode_count = len(terms[0][0])
    merged: dict = {}
    for exponents, amplitude in terms:
        key = tuple(int(e) for e in exponents)
        if len(key) != mode_count:
            raise ValueError(
                f"exponent vector {key} has length {len(key)}, expected {mode_count}"
            )
        if any(e < 0 for e in key):
            raise ValueError(f"negative exponent in {key}")
        merged[key] = merged.get(key, 0j) + complex(amplitude)
    return CreationPolynomial(mode_count, _pruned(merged))


def poly_add(p: CreationPolynomial, q: CreationPolynomial) -> CreationPolynomial:
    if p.mode_count != q.mode_count:
        raise ValueError("mode_count mismatch in poly_add")
    out = dict(p.terms)
    for e, a in q.terms.items():
        out[e] = out.get(e, 0j) + a
    return CreationPolynomial(p.mode_count, _pruned(out))


def poly_scale(p: CreationPolynomial, c: complex) -> CreationPolynomial:
    c = complex(c)
    return CreationPolynomial(p.mode_count, _pruned({e: a * c for e, a in p.terms.items()}))


def _mul_term_dicts(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, va in a.items():
        for eb, vb in b.items():
            key = tuple(x + y for x, y in zip(ea, eb))
            v = out.get(key)
            out[key] = va * vb if v is None else v + va * vb
    return out


def poly_multiply(p: CreationPolynomial, q: CreationPolynomial) -> CreationPolynomial:
    """Distributive product; exponents add since creation operators commute."""
    if p.mode_count != q.mode_count:
        raise ValueError("mode_count mismatch in poly_multiply")
    return CreationPolynomial(p.mode_count, _pruned(_mul_term_dicts(p.terms, q.terms)))


def vacuum_inner_product(p: CreationPolynomial, q: CreationPolynomial) -> complex:
    """<0| p† q |0> = sum over shared monomials of conj(p_e) q_e prod_k e_k!."""
    if p.mode_count != q.mode_count:
        raise ValueError("mode_count mismatch in vacuum_inner_product")
    small, large = (p.terms, q.terms) if len(p.terms) <= len(q.terms) else (q.terms, p.terms)
    total = 0j
    for e, _ in small.items():
        if e in large:
            w = 1
            for n in e:
                w *= _FACTORIAL[n]
            total += p.terms[e].conjugate() * q.terms[e] * w
    return total


def poly_norm(p: CreationPolynomial) -> float:
    return math.sqrt(max(vacuum_inner_product(p, p).real, 0.0))


def poly_normalize(p: CreationPolynomial) -> CreationPolynomial:
    n = poly_norm(p)
    if n == 0.0:
        raise ValueError("cannot normalize the zero polynomial")
    return poly_scale(p, 1.0 / n)


def poly_allclose(p: CreationPolynomial, q: CreationPolynomial, tol: float = 1e-10) -> bool:
    """True when the norm of (p - q) is at most tol."""
    diff = poly_add(p, poly_scale(q, -1.0))
    return poly_norm(diff) <= tol


def apply_unitary(p: CreationPolynomial, U: ModeUnitary) -> CreationPolynomial:
    """Rewrite p in output-mode operators: input mode k -> sum_j U[k, j] out_j.

    Vacuum inner products are preserved (unitarity); a homogeneous input
    stays homogeneous of the same total degree.
    """
    if U.dim != p.mode_count:
        raise ValueError(
            f"unitary dimension {U.dim} does not match mode count {p.mode_count}"
        )
    m = p.mode_count
    rows = U.matrix
    # Linear form for each input mode, and cached powers of it.
    linear: list[dict] = []
    for k in range(m):
        row = rows[k]
        linear.append({
            tuple(1 if j == i else 0 for i in range(m)): row[j]
            for j in range(m)
            if abs(row[j]) > PRUNE_TOL
        })
    one = {(0,) * m: 1.0 + 0j}
    powers: dict = {}

    def mode_power(k: int, n: int) -> dict:
        if n == 0:
            return one
        cached = powers.get((k, n))
        if cached is None:
            cached = _mul_term_dicts(mode_power(k, n - 1), linear[k])
            cached = _pruned(cached)
            powers[(k, n)] = cached
        return cached

    out: dict = {}
    for exponents, amplitude in p.terms.items():
        prod = one
        for k, e in enumerate(exponents):
            if e:
                prod = _mul_term_dicts(prod, mode_power(k, e))
        for key, v in prod.items():
            w = out.get(key)
            out[key] = amplitude * v if w is None else w + amplitude * v
    return CreationPolynomial(m, _pruned(out))


def degree_in_mode(p: CreationPolynomial, mode: int) -> int:
    """Maximum exponent of the given mode over all terms; 0 for the zero poly."""
    if not 0 <= mode < p.mode_count:
        raise ValueError(f"mode {mode} out of range for {p.mode_count} modes")
    return max((e[mode] for e in p.terms), default=0)


def coefficient_of_power(p: CreationPolynomial, mode: int, n: int) -> CreationPolynomial:
    """Coefficient polynomial of (mode†)^n, with the mode's exponent stripped.

    The result lives on the same mode count with exponent 0 at ``mode``, so
    summing (mode†)^n * coefficient_of_power(p, mode, n) over n rebuilds p
    exactly.
    """
    if not 0 <= mode < p.mode_count:
        raise ValueError(f"mode {mode} out of range for {p.mode_count} modes")
    if n < 0:
        raise ValueError("power must be non-negative")
    out = {}
    for e, a in p.terms.items():
        if e[mode] == n:
            key = e[:mode] + (0,) + e[mode + 1:]
            out[key] = a
    return CreationPolynomial(p.mode_count, out)


def remove_mode(p: CreationPolynomial, mode: int) -> CreationPolynomial:
    """Drop a mode whose exponent is zero in every term; higher indices shift down."""
    if not 0 <= mode < p.mode_count:
        raise ValueError(f"mode {mode} out of range for {p.mode_count} modes")
    if any(e[mode] != 0 for e in p.terms):
        raise ValueError(f"mode {mode} is still occupied; cannot remove it")
    return CreationPolynomial(
        p.mode_count - 1,
        {e[:mode] + e[mode + 1:]: a for e, a in p.terms.items()},
    )


def embed_poly(p: CreationPolynomial, mode_count: int, offset: int = 0) -> CreationPolynomial:
    """Re-index p into a larger mode space, shifting its modes by ``offset``."""
    if offset < 0 or offset + p.mode_count > mode_count:
        raise ValueError("embedded modes do not fit in the target mode count")
    lead = (0,) * offset
    tail = (0,) * (mode_count - offset - p.mode_count)
    return CreationPolynomial(mode_count, {lead + e + tail: a for e, a in p.terms.items()})


def single_mode_power(mode: int, n: int, mode_count: int) -> CreationPolynomial:
    """(mode†)^n |0> with amplitude 1."""
    if not 0 <= mode < mode_count:
        raise ValueError(f"mode {mode} out of range for {mode_count} modes")
    e = tuple(n if k == mode else 0 for k in range(mode_count))
    return CreationPolynomial(mode_count, {e: 1.0 + 0j})


def fock_vector_form(p: CreationPolynomial) -> dict:
    """Occupation-basis amplitudes: monomial amplitude times prod_k sqrt(e_k!).

    Independent route to inner products, used as a brute-force oracle for
    vacuum_inner_product.
    """
    return {
        e: a * math.sqrt(math.prod(_FACTORIAL[n] for n in e))
        for e, a in p.terms.items()
    }
