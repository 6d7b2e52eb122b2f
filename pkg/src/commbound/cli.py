"""Command-line front end: parse inputs, dispatch, emit JSON reports.

Exit codes: 0 success, 1 a theorem evaluated but is inapplicable or vacuous
(the report is still emitted), 2 usage errors, 3 a resource cap was hit.
Reports are deterministic for fixed inputs and seed: keys are sorted, floats
are rounded to 12 significant digits, and every report embeds the tool
version plus the fully resolved configuration.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys

import numpy as np

from . import __version__
from . import bounds as bd
from . import composer as cp
from . import groupcomp as gc
from . import matrices as mx
from .approx import approx_degree, dual_polynomial, verify_dual
from .boolfn import load_function
from .errors import ResourceLimitError
from .suites import ALL_SUITES, run_suites

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_INAPPLICABLE = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


class UsageError(Exception):
    pass


@dataclasses.dataclass
class RunConfig:
    command: str
    options: dict


def _round_floats(obj):
    """12 significant digits, applied recursively; keeps reports diffable."""
    if isinstance(obj, float):
        if math.isfinite(obj):
            return float(f"{obj:.12g}")
        return None if math.isnan(obj) else obj
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    if isinstance(obj, (np.floating,)):
        return _round_floats(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, frozenset):
        return sorted(obj)
    if isinstance(obj, np.ndarray):
        return _round_floats(obj.tolist())
    return obj


def _load_matrix(spec: str) -> mx.SignMatrix:
    if os.path.exists(spec):
        return mx.load_sign_matrix(spec)
    try:
        return mx.builtin_matrix(spec)
    except ValueError:
        raise UsageError(
            f"--inner/--input: {spec!r} is neither a file nor a builtin "
            f"matrix name {sorted(mx.BUILTIN_MATRICES)}") from None


def _check_epsilon(value: float, flag: str, allow_zero: bool = True) -> float:
    low_ok = value >= 0 if allow_zero else value > 0
    if not (low_ok and value < 1):
        raise UsageError(f"{flag} must lie in "
                         f"{'[0,1)' if allow_zero else '(0,1)'}, got {value}")
    return value


def _spectrum_payload(sp) -> dict:
    return {
        "singular_values": list(sp.singular_values),
        "spectral_norm": sp.spectral_norm,
        "trace_norm": sp.trace_norm,
        "frobenius_norm": sp.frobenius_norm,
        "numeric_rank": sp.numeric_rank,
        "tolerance": sp.tolerance,
    }


def _bound_payload(rep: bd.BoundReport) -> dict:
    return {
        "theorem": rep.theorem,
        "applicable": rep.applicable,
        "main_term": rep.main_term,
        "intermediates": rep.intermediates,
        "warnings": rep.warnings,
    }


# ---------------------------------------------------------------------------
# command handlers: each returns (payload, exit_code)

def _cmd_analyze_matrix(opts) -> tuple:
    M = _load_matrix(opts["input"])
    tol = opts["tolerance"]
    bal = mx.balance_check(M)
    payload = {
        "rows": M.rows,
        "cols": M.cols,
        "balance": {
            "row_sums": list(bal.row_sums),
            "col_sums": list(bal.col_sums),
            "balanced": bal.balanced,
            "strongly_balanced": bal.strongly_balanced,
        },
        "exact_rank": mx.exact_rank(M),
        "spectrum": _spectrum_payload(mx.spectrum(M, tol)),
    }
    core = mx.PATTERN_CORE_4
    if M.rows >= core.rows and M.cols >= core.cols:
        payload["core4_free_up_to_permutation"] = \
            not mx.contains_pattern(M, core, "up_to_permutation").found
        payload["core4_free_ordered"] = \
            not mx.contains_pattern(M, core, "ordered").found
    if M.rows <= opts["enum_cap"]:
        payload["disc_uniform"] = bd.uniform_discrepancy(M, opts["enum_cap"])
    return payload, EXIT_OK


def _cmd_approx_degree(opts) -> tuple:
    f = load_function(opts["function"])
    eps = opts["epsilon"]
    result = approx_degree(f, eps)
    payload = {
        "n": f.n,
        "epsilon": eps,
        "d": result.d,
        "max_error": result.max_error,
        "lp_status": result.lp_status,
    }
    if opts["dual"]:
        w = dual_polynomial(f, eps)
        check = verify_dual(w, f)
        payload["dual"] = {
            "witness_table": list(w.v.table),
            "d": w.d,
            "correlation": w.correlation,
            "l1": w.l1,
            "margins": {
                "orthogonality_max": check.orthogonality_max,
                "l1": check.l1,
                "correlation_margin": check.correlation_margin,
            },
            "all_checks_pass": check.ok,
        }
    return payload, EXIT_OK


def _cmd_compose(opts) -> tuple:
    f = load_function(opts["function"])
    g = _load_matrix(opts["inner"])
    n = opts["blocks"] if opts["blocks"] is not None else f.n
    comp = cp.compose_block(f, g, n, memory_cap=opts["memory_cap"])
    payload = {
        "outer_arity": f.n,
        "blocks": n,
        "rows": comp.matrix.rows,
        "cols": comp.matrix.cols,
    }
    code = EXIT_OK
    if opts["verify_rank"]:
        rep = cp.verify_rank_theorem(f, g, memory_cap=opts["memory_cap"])
        payload["rank_formula"] = {
            "formula_rank": rep.formula_rank,
            "composed_rank": rep.composed_rank,
            "equal": rep.equal,
            "inner_rank": rep.inner_rank,
        }
    if opts["witness"]:
        eps = opts["epsilon"]
        w = dual_polynomial(f, eps)
        W = cp.build_witness(w, g, memory_cap=opts["memory_cap"])
        payload["witness"] = {
            "epsilon": eps,
            "d": w.d,
            "l1": W.l1,
            "correlation": W.correlation,
            "spectral_norm": W.spectral_norm,
            "spectral_bound": cp.witness_spectral_bound(w, g),
        }
    return payload, code


def _cmd_lower_bound(opts) -> tuple:
    f = load_function(opts["function"])
    g = _load_matrix(opts["inner"])
    theorem = opts["theorem"]
    eps0 = opts["epsilon0"]
    if theorem == "sherstov":
        rep = bd.sherstov_bound(f, g, eps0)
    elif theorem == "disc":
        rep = bd.disc_bound(f, g, cap=opts["enum_cap"])
    elif theorem == "shizhu":
        if opts["mu"] is None:
            raise UsageError("--mu is required for --theorem shizhu")
        with open(opts["mu"], "r", encoding="utf-8") as fh:
            mu = bd.DistributionMatrix.from_text(fh.read())
        rep = bd.shizhu_bound(f, g, mu, eps0, cap=opts["enum_cap"])
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown theorem {theorem!r}")
    payload = _bound_payload(rep)
    vacuous = rep.main_term is not None and rep.main_term <= 0
    rank_one = any("rank 1" in w for w in rep.warnings)
    code = EXIT_OK if rep.applicable and not vacuous and not rank_one \
        else EXIT_INAPPLICABLE
    return payload, code


def _cmd_group_check(opts) -> tuple:
    with open(opts["gmap"], "r", encoding="utf-8") as fh:
        gmap = gc.GroupMapMatrix.from_text(fh.read())
    external_table = opts["table"] is not None
    if external_table:
        with open(opts["table"], "r", encoding="utf-8") as fh:
            table = gc.CharacterTable.from_json(fh.read())
        if table.order != gmap.order:
            raise UsageError("--table order does not match the group map")
    else:
        table = gc.characters_abelian(gmap.group)
    reg = gc.regularity_check(gmap)
    easy = sorted(opts["easy"]) if opts["easy"] is not None else \
        [table.trivial_index()]
    hard = sorted(set(range(table.h)) - set(easy))
    orth = gc.orthogonality_general(gmap, table, hard)
    payload = {
        "rows": gmap.rows,
        "cols": gmap.cols,
        "group_order": gmap.order,
        "regularity": {
            "regular": reg.regular,
            "copies": reg.copies,
            "counts": list(reg.counts),
            "diagonal_invariant": reg.diagonal_invariant,
        },
        "easy": easy,
        "hard": hard,
        "orthogonality": {
            "max_row_violation": orth.max_row_violation,
            "max_col_violation": orth.max_col_violation,
            "passed": orth.passed,
        },
    }
    if not external_table:
        # group-invariance of pair multisets is the Abelian characterization;
        # with a user-supplied table the file's product structure may not match
        fam = gc.pair_multisets(gmap)
        payload["all_pairs_invariant"] = (
            all(gc.g_invariant(T, gmap.group) for T in fam.row_pairs.values())
            and all(gc.g_invariant(T, gmap.group)
                    for T in fam.col_pairs.values()))
    code = EXIT_OK
    if opts["values"] is not None:
        with open(opts["values"], "r", encoding="utf-8") as fh:
            vals = [float(t) for t in fh.read().split()]
        if len(vals) != gmap.order:
            raise UsageError(
                f"--values must supply {gmap.order} numbers, got {len(vals)}")
        partition = gc.HardnessPartition.from_easy(easy, table.h)
        rep = gc.general_bound(gmap, np.array(vals), table, partition,
                               opts["epsilon"])
        payload["bound"] = _bound_payload(rep)
        if not rep.applicable:
            code = EXIT_INAPPLICABLE
    return payload, code


def _cmd_search_balanced(opts) -> tuple:
    forbidden = _load_matrix(opts["forbidden"]) if opts["forbidden"] else None
    found = []
    for M in mx.search_strongly_balanced(opts["rows"], opts["cols"],
                                         min_rank=opts["min_rank"],
                                         forbidden=forbidden,
                                         limit=opts["limit"]):
        found.append({
            "rank": mx.exact_rank(M),
            "matrix": [[int(v) for v in row] for row in M.entries],
        })
    payload = {
        "rows": opts["rows"],
        "cols": opts["cols"],
        "count": len(found),
        "matrices": found,
    }
    return payload, EXIT_OK


def _cmd_verify_suite(opts) -> tuple:
    names = opts["suites"] if opts["suites"] else None
    results = run_suites(names, seed=opts["seed"])
    payload = {
        "seed": opts["seed"],
        "suites": [
            {
                "name": r.name,
                "passed": r.passed,
                "checks": r.checks,
                "failures": r.failures,
            }
            for r in results
        ],
        "all_passed": all(r.passed for r in results),
    }
    return payload, EXIT_OK if payload["all_passed"] else EXIT_INAPPLICABLE


_HANDLERS = {
    "analyze-matrix": _cmd_analyze_matrix,
    "approx-degree": _cmd_approx_degree,
    "compose": _cmd_compose,
    "lower-bound": _cmd_lower_bound,
    "group-check": _cmd_group_check,
    "search-balanced": _cmd_search_balanced,
    "verify-suite": _cmd_verify_suite,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="commbound",
        description="Sign-matrix composition workbench: ranks, spectra, "
                    "approximate degrees, and lower-bound main terms.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--output", help="write the JSON report here "
                                        "instead of stdout")
        p.add_argument("--tolerance", type=float, default=1e-9,
                       help="numeric tolerance (default 1e-9)")

    p = sub.add_parser("analyze-matrix", help="balance, rank, spectrum, "
                                              "pattern-core freeness")
    p.add_argument("--input", required=True,
                   help="sign-matrix file or builtin name")
    p.add_argument("--enum-cap", type=int, default=bd.DEFAULT_ENUMERATION_CAP)
    add_common(p)

    p = sub.add_parser("approx-degree", help="approximate polynomial degree "
                                             "and the dual witness")
    p.add_argument("--function", required=True,
                   help="truth-table file or NAME:arity builtin")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--dual", action="store_true",
                   help="also emit the dual witness")
    add_common(p)

    p = sub.add_parser("compose", help="materialize a block composition")
    p.add_argument("--function", required=True)
    p.add_argument("--inner", required=True)
    p.add_argument("--blocks", type=int, default=None)
    p.add_argument("--verify-rank", action="store_true")
    p.add_argument("--witness", action="store_true")
    p.add_argument("--epsilon", type=float, default=1.0 / 3.0)
    p.add_argument("--memory-cap", type=int, default=cp.DEFAULT_MEMORY_CAP)
    add_common(p)

    p = sub.add_parser("lower-bound", help="evaluate a lower-bound main term")
    p.add_argument("--theorem", required=True,
                   choices=["sherstov", "disc", "shizhu"])
    p.add_argument("--function", required=True)
    p.add_argument("--inner", required=True)
    p.add_argument("--mu", default=None,
                   help="distribution file (required for shizhu)")
    p.add_argument("--epsilon0", type=float, default=1.0 / 3.0)
    p.add_argument("--enum-cap", type=int, default=bd.DEFAULT_ENUMERATION_CAP)
    add_common(p)

    p = sub.add_parser("group-check", help="regularity, invariance, and "
                                           "orthogonality of a group map")
    p.add_argument("--gmap", required=True, help="group-map file")
    p.add_argument("--table", default=None,
                   help="character-table JSON (defaults to the Abelian table)")
    p.add_argument("--easy", default=None,
                   help="comma-separated easy character indices "
                        "(default: just the trivial character)")
    p.add_argument("--values", default=None,
                   help="class-function values file (enables the bound)")
    p.add_argument("--epsilon", type=float, default=0.0)
    add_common(p)

    p = sub.add_parser("search-balanced", help="enumerate strongly balanced "
                                               "matrices up to permutation")
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--cols", type=int, required=True)
    p.add_argument("--min-rank", type=int, default=None)
    p.add_argument("--forbidden", default=None,
                   help="forbidden pattern file or builtin name")
    p.add_argument("--limit", type=int, default=None)
    add_common(p)

    p = sub.add_parser("verify-suite", help="run the property suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--suites", default=None,
                   help=f"comma-separated subset of {sorted(ALL_SUITES)}")
    add_common(p)
    return parser


def parse_args(argv) -> RunConfig:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    opts = vars(ns).copy()
    command = opts.pop("command")
    # normalize and validate
    if "epsilon" in opts and opts["epsilon"] is not None \
            and command in ("approx-degree", "compose", "group-check"):
        _check_epsilon(opts["epsilon"], "--epsilon")
    if "epsilon0" in opts and opts["epsilon0"] is not None:
        _check_epsilon(opts["epsilon0"], "--epsilon0", allow_zero=False)
    if opts.get("tolerance") is not None and opts["tolerance"] <= 0:
        raise UsageError(f"--tolerance must be positive, got {opts['tolerance']}")
    if opts.get("suites"):
        names = [s.strip() for s in opts["suites"].split(",") if s.strip()]
        for s in names:
            if s not in ALL_SUITES:
                raise UsageError(f"--suites: unknown suite {s!r}")
        opts["suites"] = names
    if opts.get("easy") is not None:
        try:
            opts["easy"] = [int(t) for t in opts["easy"].split(",") if t.strip()]
        except ValueError:
            raise UsageError("--easy must be a comma-separated list of "
                             "integers") from None
    # plain file flags must exist now; file-or-builtin flags (--function,
    # --input, --inner, --forbidden) are resolved by their handlers
    for key in ("mu", "gmap", "table", "values"):
        path = opts.get(key)
        if path is not None and not os.path.exists(path):
            raise UsageError(f"--{key}: file {path!r} does not exist")
    return RunConfig(command=command, options=opts)


def run(config: RunConfig) -> int:
    opts = config.options
    thread_cap = os.environ.get("COMMBOUND_THREADS")
    payload, code = _HANDLERS[config.command](opts)
    report = {
        "schema": SCHEMA_VERSION,
        "version": __version__,
        "command": config.command,
        "config": {k: v for k, v in sorted(opts.items()) if k != "output"},
        "threads": int(thread_cap) if thread_cap else 1,
        "report": payload,
    }
    text = json.dumps(_round_floats(report), indent=2, sort_keys=True) + "\n"
    if opts.get("output"):
        with open(opts["output"], "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        config = parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        # argparse exits with code 2 on usage problems, 0 on --help
        return int(exc.code or 0)
    try:
        return run(config)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
