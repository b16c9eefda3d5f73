"""Command-line driver: reproducible experiments with JSON reports.

Reports are byte-stable for a fixed (config, seed, version): keys are
sorted, floats use the shortest round-trip decimal, and timing goes to
stderr rather than into the report.  Exit codes: 0 pass, 2 verification
failed, 3 invalid config, 4 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import __version__
from .domino import (
    LABELS,
    build_domino_set,
    domino_set_to_json_dict,
    gram_matrix,
    state_permutation,
    symmetry_R,
    symmetry_S,
    symmetry_T,
    compose_symmetries,
)
from .fock import ModeUnitary
from .measure import optimal_guess_success, outcome_distribution, report_to_json_dict
from .nogo import (
    OptimizeConfig,
    aux_factorization_trials,
    certify_c0_infeasibility,
    optimize_discrimination,
)
from .optics import Beamsplitter, PhaseShifter, compose_elements

EXIT_PASS = 0
EXIT_VERIFICATION_FAILED = 2
EXIT_INVALID_CONFIG = 3
EXIT_BUDGET_EXHAUSTED = 4


class ConfigError(Exception):
    pass


def _load_config_file(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"config file {path} is not valid JSON (line {exc.lineno}, "
            f"column {exc.colno}): {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return data


def _merge_config(defaults: dict, args: argparse.Namespace) -> dict:
    """defaults < config file < explicit flags."""
    merged = dict(defaults)
    path = getattr(args, "config", None)
    if path:
        file_conf = _load_config_file(path)
        unknown = set(file_conf) - set(defaults)
        if unknown:
            raise ConfigError(
                f"unknown config keys {sorted(unknown)}; valid keys are "
                f"{sorted(defaults)}")
        merged.update(file_conf)
    for key in defaults:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def _require_seed(conf: dict):
    if conf.get("seed") is None:
        raise ConfigError("a seed is required for stochastic commands")


def parse_elements(path: str) -> list:
    """Element list from a JSON array of element records."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read elements file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"elements file {path} is not valid JSON (line {exc.lineno}): "
            f"{exc.msg}") from exc
    if not isinstance(data, list):
        raise ConfigError("elements file must hold a JSON array")
    out = []
    for k, rec in enumerate(data):
        try:
            kind = rec["kind"]
            if kind == "beamsplitter":
                i, j = rec["modes"]
                out.append(Beamsplitter(int(i), int(j), float(rec["theta"]),
                                        float(rec.get("phi", 0.0))))
            elif kind == "phase_shifter":
                out.append(PhaseShifter(int(rec["mode"]), float(rec["phase"])))
            else:
                raise ConfigError(f"element {k}: unknown kind {kind!r}")
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"element {k} is malformed: {exc}") from exc
    return out


def _emit(report: dict, out_path: str | None) -> None:
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report_shell(command: str, config: dict, results: dict) -> dict:
    return {
        "schema_version": 1,
        "tool": {"name": "dominooptics", "version": __version__},
        "command": command,
        "config": config,
        "results": results,
    }


def _sig(x: float) -> float:
    return float(f"{x:.12g}")


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_states(conf: dict) -> tuple:
    dset = build_domino_set()
    gram = gram_matrix(dset)
    deviation = float(np.max(np.abs(gram - np.eye(9))))
    results = {
        "domino_set": domino_set_to_json_dict(dset),
        "gram_max_deviation": deviation,
        "orthonormal": deviation < conf["tolerance"],
    }
    code = EXIT_PASS if results["orthonormal"] else EXIT_VERIFICATION_FAILED
    return results, code


def cmd_symmetry(conf: dict) -> tuple:
    dset = build_domino_set()
    t, s = symmetry_T(), symmetry_S()

    def table(op):
        return {str(i): [j, int(round(phase.real))]
                for i, (j, phase) in sorted(state_permutation(op, dset).items())}

    tm, sm = t.matrix.matrix, s.matrix.matrix
    checks = {
        "T_fourth_power_identity": bool(
            np.array_equal(np.linalg.matrix_power(tm, 4), np.eye(6))),
        "S_squared_identity": bool(np.array_equal(sm @ sm, np.eye(6))),
        "ST_fourth_power_identity": bool(
            np.max(np.abs(np.linalg.matrix_power(sm @ tm, 4) - np.eye(6))) == 0.0),
    }
    r_table = {}
    for k in (1, 2, 3, 4, -1, -2, -3, -4):
        target, phase = state_permutation(symmetry_R(k), dset)[1]
        r_table[f"{k:+d}"] = [target, int(round(phase.real))]
        checks[f"R{k:+d}_maps_psi1"] = target == k

    # Global invariance under every short word in the group generators.
    word_ok = True
    ops = {"T": t, "S": s}
    words = [""]
    for _ in range(4):
        words = [w + g for w in words for g in ("T", "S")] + words
    for word in set(words):
        op = compose_symmetries(*(ops[g] for g in word))
        try:
            state_permutation(op, dset)
        except ValueError:
            word_ok = False
            break
    checks["short_words_preserve_set"] = word_ok

    results = {"T_action": table(t), "S_action": table(s), "R_action": r_table,
               "checks": checks}
    code = EXIT_PASS if all(checks.values()) else EXIT_VERIFICATION_FAILED
    return results, code


def cmd_distribution(conf: dict) -> tuple:
    dset = build_domino_set()
    if conf["elements"]:
        U = compose_elements(parse_elements(conf["elements"]), 6)
    else:
        U = ModeUnitary(np.eye(6))
    per_state = {}
    distributions = {}
    sums_ok = True
    for lab in LABELS:
        dist = outcome_distribution(dset.states[lab], U)
        distributions[lab] = dist
        sums_ok &= abs(sum(dist.values()) - 1.0) < 1e-10
        per_state[str(lab)] = {
            ",".join(str(n) for n in occ): _sig(p)
            for occ, p in sorted(dist.items()) if p > 1e-15
        }
    success = optimal_guess_success(distributions)
    results = {"per_state": per_state,
               "optimal_guess_success": _sig(success),
               "distributions_normalized": bool(sums_ok)}
    code = EXIT_PASS if sums_ok else EXIT_VERIFICATION_FAILED
    return results, code


def _run_search(conf: dict) -> tuple:
    config = OptimizeConfig(
        aux_modes=conf["aux_modes"], aux_photons=conf["aux_photons"],
        cascade_depth=conf["depth"], restarts=conf["restarts"],
        seed=conf["seed"], nm_maxfev=conf.get("nm_maxfev"),
        max_seconds=conf.get("max_seconds"),
    )
    try:
        config.validate()
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    strategy, report, trace = optimize_discrimination(config)
    results = {
        "best_success": _sig(report.success_probability),
        "report": report_to_json_dict(report),
        "trace": trace.records,
        "best_restart": trace.best_restart,
        "budget_exhausted": trace.budget_exhausted,
    }
    return results, trace


def cmd_discriminate(conf: dict) -> tuple:
    _require_seed(conf)
    results, trace = _run_search(conf)
    code = EXIT_BUDGET_EXHAUSTED if trace.budget_exhausted else EXIT_PASS
    return results, code


def cmd_optimize(conf: dict) -> tuple:
    _require_seed(conf)
    results, trace = _run_search(conf)
    if conf["trace"]:
        with open(conf["trace"], "a") as fh:
            for record in trace.records:
                fh.write(json.dumps(record, sort_keys=True) + "\n")
    code = EXIT_BUDGET_EXHAUSTED if trace.budget_exhausted else EXIT_PASS
    return results, code


def cmd_verify_appendix_a(conf: dict) -> tuple:
    _require_seed(conf)
    summary = aux_factorization_trials(conf["trials"], conf["seed"],
                                       tol=conf["tolerance"])
    results = {
        "trials": summary.trials,
        "max_top_deviation": summary.max_top_deviation,
        "max_next_deviation": summary.max_next_deviation,
        "tolerance": summary.tolerance,
        "failures": summary.failures,
        "passed": summary.all_passed,
    }
    return results, EXIT_PASS if summary.all_passed else EXIT_VERIFICATION_FAILED


def cmd_certify_appendix_b(conf: dict) -> tuple:
    _require_seed(conf)
    labels = (0, 1) if conf["i0"] == "both" else (int(conf["i0"]),)
    certs = {}
    all_pass = True
    for i0 in labels:
        cert = certify_c0_infeasibility(i0, restarts=conf["restarts"],
                                        seed=conf["seed"], floor=conf["floor"])
        certs[str(i0)] = {
            "residual_at_unit_norm": cert.residual_at_unit_norm,
            "floor": cert.floor,
            "passed": cert.passed,
            "restarts": cert.restarts,
            "seed": cert.seed,
            "best_c0": [[z.real, z.imag] for z in cert.best_c0],
        }
        all_pass &= cert.passed
    results = {"certificates": certs, "passed": all_pass}
    return results, EXIT_PASS if all_pass else EXIT_VERIFICATION_FAILED


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

_DEFAULTS = {
    "states": {"tolerance": 1e-12},
    "symmetry": {},
    "distribution": {"elements": None},
    "discriminate": {"seed": None, "restarts": 20, "aux_modes": 0,
                     "aux_photons": 0, "depth": 1, "nm_maxfev": None,
                     "max_seconds": None},
    "optimize": {"seed": None, "restarts": 50, "aux_modes": 0,
                 "aux_photons": 0, "depth": 1, "nm_maxfev": None,
                 "max_seconds": None, "trace": None},
    "verify-appendix-a": {"seed": None, "trials": 200, "tolerance": 1e-8},
    "certify-appendix-b": {"seed": None, "restarts": 200, "i0": "both",
                           "floor": 1e-4},
}

_HANDLERS = {
    "states": cmd_states,
    "symmetry": cmd_symmetry,
    "distribution": cmd_distribution,
    "discriminate": cmd_discriminate,
    "optimize": cmd_optimize,
    "verify-appendix-a": cmd_verify_appendix_a,
    "certify-appendix-b": cmd_certify_appendix_b,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dominooptics",
        description="Simulate the nine domino product states in linear optics "
                    "and verify that no linear apparatus discriminates them "
                    "perfectly.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--out", help="write the JSON report to this path")
        p.add_argument("--config", help="JSON config file; explicit flags win")

    p = sub.add_parser("states", help="dump the nine states and their Gram matrix")
    p.add_argument("--tolerance", type=float)
    add_common(p)

    p = sub.add_parser("symmetry", help="emit the symmetry action table and checks")
    add_common(p)

    p = sub.add_parser("distribution",
                       help="full-counting outcome distributions per state")
    p.add_argument("--elements", help="JSON file with an optical element list")
    add_common(p)

    for name, extra in (("discriminate", "search for the best cascade strategy"),
                        ("optimize", "search with trace output")):
        p = sub.add_parser(name, help=extra)
        p.add_argument("--seed", type=int)
        p.add_argument("--restarts", type=int)
        p.add_argument("--aux-modes", dest="aux_modes", type=int)
        p.add_argument("--aux-photons", dest="aux_photons", type=int)
        p.add_argument("--depth", type=int)
        p.add_argument("--nm-maxfev", dest="nm_maxfev", type=int)
        p.add_argument("--max-seconds", dest="max_seconds", type=float)
        if name == "optimize":
            p.add_argument("--trace", help="append per-restart JSON lines here")
        add_common(p)

    p = sub.add_parser("verify-appendix-a",
                       help="randomized check that auxiliary photons factor out "
                            "of the two top conditional overlaps")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--tolerance", type=float)
    add_common(p)

    p = sub.add_parser("certify-appendix-b",
                       help="certify that the detected-column constraint system "
                            "admits only the trivial solution")
    p.add_argument("--seed", type=int)
    p.add_argument("--restarts", type=int)
    p.add_argument("--i0", choices=["0", "1", "both"])
    p.add_argument("--floor", type=float)
    add_common(p)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    command = args.command
    started = time.monotonic()
    try:
        conf = _merge_config(_DEFAULTS[command], args)
        results, code = _HANDLERS[command](conf)
    except ConfigError as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_INVALID_CONFIG
    except ValueError as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_INVALID_CONFIG
    report = _report_shell(command, conf, results)
    _emit(report, getattr(args, "out", None))
    print(f"elapsed_seconds={time.monotonic() - started:.3f}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
