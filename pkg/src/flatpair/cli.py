"""Command-line front end.

    flatpair distance FILE     distance and squared distance
    flatpair pair FILE         optimal pair, coefficients and diagnostics
    flatpair gram FILE         Gram matrix and Gram determinants
    flatpair check FILE        solver against both oracles

Exit codes: 0 ok, 2 bad input, 3 oracle disagreement, 4 internal
invariant violation.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict

import numpy as np

from .errors import FlatPairError, InvariantError
from .flats import Flat, difference_setup
from .linalg import DEFAULT_RANK_TOL, gram_determinant, gram_matrix
from .oracle import DEFAULT_MAX_ITER, cross_check
from .solver import PairSolution, optimal_pair, verify_solution

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DISAGREE = 3
EXIT_INVARIANT = 4


class InputError(FlatPairError, ValueError):
    """Malformed or inconsistent instance document."""


def _reject_constant(name):
    raise InputError(f"non-finite number {name!r} in input")


def _reals(value, what: str) -> list[float]:
    if not isinstance(value, list):
        raise InputError(f"{what} must be a list of numbers")
    out = []
    for x in value:
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise InputError(f"{what} contains non-numeric entry {x!r}")
        x = float(x)
        if not math.isfinite(x):
            raise InputError(f"{what} contains a non-finite entry")
        out.append(x)
    return out


def parse_instance(doc) -> dict:
    """Validate an instance document and return it with floats widened.

    A document produced by ``--json`` (with the instance under
    ``"instance"``) is accepted as well.
    """
    if isinstance(doc, dict) and "instance" in doc:
        doc = doc["instance"]
    if not isinstance(doc, dict):
        raise InputError("instance must be a JSON object")
    missing = [k for k in ("m", "b", "B", "c", "C") if k not in doc]
    if missing:
        raise InputError(f"missing field(s): {', '.join(missing)}")
    m = doc["m"]
    if isinstance(m, bool) or not isinstance(m, int) or m < 1:
        raise InputError("m must be a positive integer")
    b = _reals(doc["b"], "b")
    c = _reals(doc["c"], "c")
    for name, vec in (("b", b), ("c", c)):
        if len(vec) != m:
            raise InputError(f"{name} has {len(vec)} entries, expected m={m}")
    cols = {}
    for name in ("B", "C"):
        if not isinstance(doc[name], list):
            raise InputError(f"{name} must be a list of columns")
        cols[name] = [_reals(col, f"{name}[{j}]") for j, col in enumerate(doc[name])]
        for j, col in enumerate(cols[name]):
            if len(col) != m:
                raise InputError(f"{name}[{j}] has {len(col)} entries, expected m={m}")
    out = {"m": m, "b": b, "B": cols["B"], "c": c, "C": cols["C"]}
    if "tol" in doc:
        tol = doc["tol"]
        if isinstance(tol, bool) or not isinstance(tol, (int, float)) or not tol > 0:
            raise InputError("tol must be a positive number")
        out["tol"] = float(tol)
    return out


def load_instance(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh, parse_constant=_reject_constant)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None
    return parse_instance(doc)


def flats_from_instance(inst: dict) -> tuple[Flat, Flat]:
    Vb = Flat.from_columns(inst["b"], inst["B"], "plus")
    Vc = Flat.from_columns(inst["c"], inst["C"], "minus")
    return Vb, Vc


def fmt(x: float) -> str:
    """Fixed notation with 12 digits after the point; never ``-0.000...``."""
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "nan"
    s = f"{x:.12f}"
    if s.startswith("-") and not s.strip("-0."):
        s = s[1:]
    return s


def _fmt_vec(v) -> str:
    return "[" + ", ".join(fmt(float(x)) for x in v) + "]"


def _json_float(x: float):
    return None if math.isnan(x) else float(x)


def solution_to_dict(sol: PairSolution) -> dict:
    diag = asdict(sol.diagnostics)
    diag["dropped_columns"] = list(diag["dropped_columns"])
    diag["gram_det"] = _json_float(diag["gram_det"])
    return {
        "b_star": sol.b_star.tolist(),
        "c_star": sol.c_star.tolist(),
        "u_star": sol.u_star.tolist(),
        "v_star": sol.v_star.tolist(),
        "distance": sol.distance,
        "distance_sq_gram": _json_float(sol.distance_sq_gram),
        "diagnostics": diag,
    }


def _emit(lines: list[tuple[str, str]], doc: dict, as_json: bool, out) -> None:
    if as_json:
        json.dump(doc, out, indent=2, allow_nan=False)
        out.write("\n")
    else:
        for key, value in lines:
            out.write(f"{key} {value}\n")


def _solve(inst, tol):
    Vb, Vc = flats_from_instance(inst)
    sol = optimal_pair(Vb, Vc, tol)
    verify_solution(sol, Vb, Vc)
    return Vb, Vc, sol


def cmd_distance(inst, tol, args, out) -> int:
    _, _, sol = _solve(inst, tol)
    doc = {
        "instance": inst,
        "distance": sol.distance,
        "distance_sq_gram": _json_float(sol.distance_sq_gram),
        "path": sol.diagnostics.path,
    }
    lines = [("distance", fmt(sol.distance)), ("distance_sq_gram", fmt(sol.distance_sq_gram))]
    _emit(lines, doc, args.json, out)
    return EXIT_OK


def cmd_pair(inst, tol, args, out) -> int:
    _, _, sol = _solve(inst, tol)
    d = sol.diagnostics
    lines = [
        ("b_star", _fmt_vec(sol.b_star)),
        ("c_star", _fmt_vec(sol.c_star)),
        ("u_star", _fmt_vec(sol.u_star)),
        ("v_star", _fmt_vec(sol.v_star)),
        ("distance", fmt(sol.distance)),
        ("distance_sq_gram", fmt(sol.distance_sq_gram)),
        ("path", d.path),
        ("gram_det", fmt(d.gram_det)),
        ("unique", str(d.unique).lower()),
        ("rank_used", str(d.rank_used)),
        ("dropped_columns", str(list(d.dropped_columns))),
    ]
    _emit(lines, {"instance": inst, "solution": solution_to_dict(sol)}, args.json, out)
    return EXIT_OK


def cmd_gram(inst, tol, args, out) -> int:
    Vb, Vc = flats_from_instance(inst)
    prob = difference_setup(Vb, Vc)
    if prob.n == 0:
        # empty Gram matrix: determinant of the 0x0 matrix is 1
        G = np.zeros((0, 0))
        g = 1.0
    else:
        G = gram_matrix(prob.A)
        g = gram_determinant(prob.A)
    g_d = gram_determinant(np.column_stack([prob.d, prob.A]))
    lines = [("G", "[" + ", ".join(_fmt_vec(row) for row in G) + "]"),
             ("gram_det", fmt(g)), ("gram_det_with_d", fmt(g_d))]
    doc = {"instance": inst, "G": G.tolist(), "gram_det": g, "gram_det_with_d": g_d}
    _emit(lines, doc, args.json, out)
    return EXIT_OK


def cmd_check(inst, tol, args, out) -> int:
    Vb, Vc, sol = _solve(inst, tol)
    rep = cross_check(
        Vb, Vc, sol.distance, max_iter=args.max_iter, samples=args.samples, seed=args.seed, tol=tol
    )
    lines = [
        ("distance", fmt(sol.distance)),
        ("path", sol.diagnostics.path),
        ("unique", str(sol.diagnostics.unique).lower()),
        ("ap_distance", fmt(rep.ap_distance)),
        ("ap_iterations", str(rep.iterations)),
        ("ap_converged", str(rep.converged).lower()),
        ("sample_min", fmt(rep.sample_min)),
        ("agreement", str(rep.agreement).lower()),
    ]
    doc = {
        "instance": inst,
        "solution": solution_to_dict(sol),
        "oracle": {
            "ap_distance": rep.ap_distance,
            "iterations": rep.iterations,
            "converged": rep.converged,
            "sample_min": rep.sample_min,
            "agreement": rep.agreement,
        },
    }
    _emit(lines, doc, args.json, out)
    return EXIT_OK if rep.agreement else EXIT_DISAGREE


COMMANDS = {"distance": cmd_distance, "pair": cmd_pair, "gram": cmd_gram, "check": cmd_check}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flatpair", description="Optimal pair and distance of two affine subspaces."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("distance", "print the distance and squared distance"),
        ("pair", "print the optimal pair, coefficients and diagnostics"),
        ("gram", "print the Gram matrix and Gram determinants"),
        ("check", "cross-check the solver against independent oracles"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("file", help="instance JSON document")
        p.add_argument("--tol", type=float, default=None, help="rank tolerance (default 1e-9)")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        if name == "check":
            p.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER,
                           help="alternating-projection sweep budget (default 2**40)")
            p.add_argument("--samples", type=int, default=10_000)
            p.add_argument("--seed", type=int, default=0)
    return parser


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        inst = load_instance(args.file)
        tol = args.tol if args.tol is not None else inst.get("tol", DEFAULT_RANK_TOL)
        if not tol > 0:
            raise InputError("--tol must be positive")
        return COMMANDS[args.command](inst, tol, args, out)
    except InvariantError as exc:
        err.write(f"flatpair: internal invariant violated: {exc}\n")
        return EXIT_INVARIANT
    except (FlatPairError, ValueError) as exc:
        err.write(f"flatpair: {exc}\n")
        return EXIT_INPUT


run = main

if __name__ == "__main__":
    sys.exit(main())
