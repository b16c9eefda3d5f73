"""Photon-number detection, conditional states, and cascaded strategies.

Conditional states are returned unnormalized together with an explicit
outcome probability.  After detecting a mode its index is removed and the
remaining modes are compacted (indices above the detected one shift down
by one); a stage's detected-mode index always refers to the current,
compacted space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .domino import LABELS, DominoSet
from .fock import (
    CreationPolynomial,
    ModeUnitary,
    apply_unitary,
    coefficient_of_power,
    degree_in_mode,
    poly_scale,
    remove_mode,
    vacuum_inner_product,
)
from .optics import AuxiliaryPreparation, embed_with_aux, vacuum_aux

_FACT = [math.factorial(n) for n in range(24)]

# Branch probabilities below this are treated as unreachable.
_REACH_TOL = 1e-15


@dataclass(frozen=True)
class DetectionOutcome:
    """One photon-count outcome on a mode, with its probability."""

    mode: int
    count: int
    probability: float


def _conditional(state: CreationPolynomial, U: ModeUnitary | None, d: int, N: int):
    out = apply_unitary(state, U) if U is not None else state
    q = coefficient_of_power(out, d, N)
    probability = _FACT[N] * vacuum_inner_product(q, q).real
    return remove_mode(q, d), probability


def conditional_state(state: CreationPolynomial, U: ModeUnitary, d: int, N: int):
    """Unnormalized state of the remaining modes after counting N photons in d.

    Returns (polynomial over mode_count - 1 modes, outcome probability); the
    probability is N! times the squared norm of the extracted coefficient
    polynomial.  The input must be unit-normalized.
    """
    if N < 0:
        raise ValueError("photon count must be non-negative")
    if U.dim != state.mode_count:
        raise ValueError(f"unitary dimension {U.dim} does not match "
                         f"state mode count {state.mode_count}")
    norm2 = vacuum_inner_product(state, state).real
    if abs(norm2 - 1.0) > 1e-8:
        raise ValueError(f"input state is not normalized: <p|p> = {norm2!r}")
    return _conditional(state, U, d, N)


def detection_spectrum(state: CreationPolynomial, U: ModeUnitary, mode: int):
    """All count outcomes for one detected mode; probabilities sum to 1."""
    out = apply_unitary(state, U)
    top = degree_in_mode(out, mode)
    spectrum = []
    for n in range(top + 1):
        q = coefficient_of_power(out, mode, n)
        spectrum.append(DetectionOutcome(mode, n,
                                         _FACT[n] * vacuum_inner_product(q, q).real))
    return spectrum


def outcome_distribution(state: CreationPolynomial, U: ModeUnitary) -> dict:
    """Full-counting distribution: occupation vector -> probability."""
    if U.dim != state.mode_count:
        raise ValueError(f"unitary dimension {U.dim} does not match "
                         f"state mode count {state.mode_count}")
    out = apply_unitary(state, U)
    dist = {}
    for e, a in out.terms.items():
        w = 1
        for n in e:
            w *= _FACT[n]
        dist[e] = dist.get(e, 0.0) + abs(a) ** 2 * w
    return dist


def optimal_guess_success(distributions: dict) -> float:
    """Minimum-error success under a uniform prior: mean of per-outcome maxima."""
    if not distributions:
        raise ValueError("no distributions given")
    for label, dist in distributions.items():
        total = sum(dist.values())
        if abs(total - 1.0) > 1e-8:
            raise ValueError(f"distribution for {label} sums to {total!r}")
    outcomes = set()
    for dist in distributions.values():
        outcomes.update(dist)
    total = sum(max(dist.get(o, 0.0) for dist in distributions.values())
                for o in outcomes)
    return total / len(distributions)


# ---------------------------------------------------------------------------
# Cascaded conditional strategies
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GuessLeaf:
    """Terminal node: stop measuring and announce a fixed label."""

    guess: int


@dataclass(frozen=True)
class CountLeaf:
    """Terminal node: count all remaining modes, guess greedily per pattern."""


@dataclass(frozen=True, eq=False)
class Stage:
    """One cascade step: apply a unitary, count one output mode, branch.

    ``children`` maps photon counts to follow-up nodes; ``default`` covers
    any reachable count without an explicit child.
    """

    unitary: ModeUnitary
    detect_mode: int
    children: dict = field(default_factory=dict)
    default: object | None = None


CascadeStrategy = Stage | GuessLeaf | CountLeaf


@dataclass(frozen=True, eq=False)
class DiscriminationReport:
    """Success bookkeeping of one strategy under the uniform prior."""

    success_probability: float
    per_state: dict    # label -> P(guess == label | state == label)
    confusion: dict    # outcome path string -> {"probs": {label: p}, "guess": label}

    def __post_init__(self):
        mean = sum(self.per_state.values()) / len(self.per_state)
        if abs(mean - self.success_probability) > 1e-9:
            raise ValueError("success probability must be the mean per-state success")


def _path_key(counts, pattern):
    s = "counts=" + ",".join(str(n) for n in counts)
    if pattern is not None:
        s += ";pattern=" + ",".join(str(n) for n in pattern)
    return s


def evaluate_strategy(strategy: CascadeStrategy, dset: DominoSet,
                      aux: AuxiliaryPreparation | None = None,
                      depth_limit: int = 3) -> DiscriminationReport:
    """Propagate every state through the cascade and score greedy guessing.

    Leaves with a fixed guess credit success only when the guess matches the
    true label; counting leaves guess the most likely label per complete
    outcome, ties broken toward the smaller label.  Unreached branches
    contribute nothing.
    """
    if aux is None:
        aux = vacuum_aux()
    rows: dict = {}

    def visit(node, label, poly, weight, counts, depth):
        if weight <= _REACH_TOL:
            return
        if isinstance(node, GuessLeaf):
            row = rows.setdefault((counts, None), {"probs": {}, "guess": node.guess})
            if row["guess"] != node.guess:
                raise ValueError(f"conflicting guesses recorded at {counts}")
            row["probs"][label] = row["probs"].get(label, 0.0) + weight
            return
        if isinstance(node, CountLeaf):
            dist = {}
            for e, a in poly.terms.items():
                w = 1
                for n in e:
                    w *= _FACT[n]
                dist[e] = dist.get(e, 0.0) + abs(a) ** 2 * w
            for pattern, p in dist.items():
                row = rows.setdefault((counts, pattern), {"probs": {}, "guess": None})
                row["probs"][label] = row["probs"].get(label, 0.0) + weight * p
            return
        if isinstance(node, Stage):
            if depth >= depth_limit:
                raise ValueError(f"cascade depth exceeds limit {depth_limit}")
            if node.unitary.dim != poly.mode_count:
                raise ValueError(
                    f"stage unitary dimension {node.unitary.dim} does not match "
                    f"surviving mode count {poly.mode_count}")
            out = apply_unitary(poly, node.unitary)
            top = max(degree_in_mode(out, node.detect_mode), 0)
            for n in range(top + 1):
                q, p = _conditional(out, None, node.detect_mode, n)
                if p <= _REACH_TOL:
                    continue
                child = node.children.get(n, node.default)
                if child is None:
                    raise ValueError(f"reachable count {n} at depth {depth} has no child")
                visit(child, label, poly_scale(q, 1.0 / math.sqrt(p / _FACT[n])),
                      weight * p, counts + (n,), depth + 1)
            return
        raise TypeError(f"not a cascade node: {node!r}")

    for label in LABELS:
        state = embed_with_aux(aux, dset.states[label])
        visit(strategy, label, state, 1.0, (), 0)

    per_state = {label: 0.0 for label in LABELS}
    confusion = {}
    for (counts, pattern), row in sorted(rows.items()):
        guess = row["guess"]
        if guess is None:
            guess = max(LABELS, key=lambda lab: (row["probs"].get(lab, 0.0), -lab))
        truth = row["probs"].get(guess, 0.0)
        per_state[guess] += truth
        confusion[_path_key(counts, pattern)] = {
            "probs": {str(lab): row["probs"].get(lab, 0.0) for lab in LABELS
                      if row["probs"].get(lab, 0.0) > 0.0},
            "guess": guess,
        }
    success = sum(per_state.values()) / len(LABELS)
    return DiscriminationReport(success, per_state, confusion)


def report_to_json_dict(report: DiscriminationReport) -> dict:
    """JSON document with success probabilities at 12 significant digits."""

    def sig(x: float) -> float:
        return float(f"{x:.12g}")

    return {
        "success_probability": sig(report.success_probability),
        "per_state": {str(lab): sig(p) for lab, p in sorted(report.per_state.items())},
        "confusion": {
            key: {"guess": row["guess"],
                  "probs": {lab: sig(p) for lab, p in sorted(row["probs"].items())}}
            for key, row in sorted(report.confusion.items())
        },
    }
