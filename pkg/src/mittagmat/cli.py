"""Command line interface: ``mittagmat {eval,solve,bagley-torvik,verify}``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numerical
failure, 4 argument outside the supported domain.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
import warnings
from typing import Callable, Optional, Sequence

import numpy as np

from mittagmat import io as mio
from mittagmat.errors import (
    DomainLimitError,
    ForcingEvaluationError,
    MittagMatError,
    NumericalFailure,
)
from mittagmat.fde import (
    BagleyTorvikSpec,
    DerivativeKind,
    FdeProblem,
    TimeGrid,
    bagley_torvik_solve,
    companion_matrix,
    reference_H1,
    reference_H2,
    solve,
)
from mittagmat.matrix import ml_matrix
from mittagmat.special import EvalConfig, MLParams, ml_scalar

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_DOMAIN = 4


class UsageError(Exception):
    pass


def _complex_json(z: complex):
    z = complex(z)
    return z.real if z.imag == 0 else [z.real, z.imag]


def _matrix_json(M) -> list:
    return [[_complex_json(z) for z in row] for row in np.atleast_2d(M)]


def _config(args) -> EvalConfig:
    if getattr(args, "accuracy", None) is None:
        return EvalConfig()
    return EvalConfig(target_accuracy=args.accuracy)


def _emit_report(report: dict) -> None:
    print(json.dumps(report, indent=2))


def _run(fn: Callable, *args):
    """Call ``fn`` and return its result together with the warnings it issued."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        result = fn(*args)
    messages = [f"{w.category.__name__}: {w.message}" for w in caught]
    for m in messages:
        print(f"mittagmat: warning: {m}", file=sys.stderr)
    return result, messages


# {{{ commands


def cmd_eval(args) -> int:
    A = mio.read_matrix(args.matrix)
    cfg = _config(args)
    report: dict = {
        "command": "eval",
        "inputs": {"matrix": args.matrix, "alpha": args.alpha, "beta": args.beta,
                   "rho": args.rho, "accuracy": cfg.target_accuracy},
    }

    t0 = time.perf_counter()
    if args.rho is not None:
        if A.shape != (1, 1):
            raise UsageError("--rho is only supported for 1x1 matrices")
        value = ml_scalar(A[0, 0], MLParams(args.alpha, args.beta, args.rho), cfg)
        if np.isrealobj(A) and complex(value).imag == 0:
            value = complex(value).real
        F = np.array([[value]])
    else:
        F, report["warnings"] = _run(ml_matrix, A, args.alpha, args.beta, cfg)
    report["seconds"] = time.perf_counter() - t0

    if args.reference:
        ref = mio.read_matrix(args.reference)
        if ref.shape != F.shape:
            raise UsageError(f"reference has shape {ref.shape}, result {F.shape}")
        report["max_abs_deviation"] = float(np.max(np.abs(F - ref)))

    if args.out:
        mio.write_matrix(args.out, F)
        report["output"] = args.out
    else:
        report["result"] = _matrix_json(F)
    _emit_report(report)
    return EXIT_OK


def _parse_z0(text: str) -> np.ndarray:
    """Inline list (``1,2``, ``1 2`` or JSON) or the path of a matrix file."""
    if os.path.exists(text):
        return mio.read_matrix(text).reshape(-1)
    try:
        values = json.loads(text) if text.strip().startswith("[") else [
            float(x) for x in text.replace(",", " ").split()
        ]
    except ValueError as exc:
        raise UsageError(f"cannot parse --z0 {text!r}: {exc}") from exc

    out = []
    for v in values:
        if isinstance(v, list) and len(v) == 2:
            out.append(complex(v[0], v[1]))
        else:
            out.append(complex(float(v)))
    if not out:
        raise UsageError("--z0 is empty")
    z0 = np.array(out)
    return z0.real.copy() if np.all(z0.imag == 0) else z0


def _load_forcing(path: Optional[str], n: int) -> Optional[Callable]:
    if not path:
        return None
    t, v = mio.read_samples(path)
    if v.shape[1] not in (1, n):
        raise UsageError(f"forcing file has {v.shape[1]} value columns, expected 1 or {n}")
    return mio.sampled_forcing(t, v)


def _write_table(args, trajectory_t, values, singular, names=None) -> None:
    text = mio.trajectory_to_csv(trajectory_t, values, singular, names)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def cmd_solve(args) -> int:
    A = mio.read_matrix(args.matrix)
    z0 = _parse_z0(args.z0)
    forcing = _load_forcing(args.forcing, A.shape[0])
    p = FdeProblem(A, args.alpha, DerivativeKind(args.kind), z0, forcing)
    grid = TimeGrid(args.t_end, args.steps)

    t0 = time.perf_counter()
    tr, messages = _run(solve, p, grid, _config(args))
    elapsed = time.perf_counter() - t0

    _write_table(args, tr.t, tr.values, tr.singular)
    if args.out:
        _emit_report({
            "command": "solve",
            "inputs": {"matrix": args.matrix, "alpha": args.alpha, "kind": args.kind,
                       "t_end": args.t_end, "steps": args.steps, "forcing": args.forcing},
            "output": args.out,
            "warnings": messages,
            "seconds": elapsed,
        })
    return EXIT_OK


def cmd_bagley_torvik(args) -> int:
    forcing = None
    if args.forcing:
        vector_f = _load_forcing(args.forcing, 1)

        def forcing(t: float) -> float:
            return float(vector_f(t)[0])

    spec = BagleyTorvikSpec(args.a, args.b, args.c, args.y0, args.yp0, forcing)
    grid = TimeGrid(args.t_end, args.steps)

    t0 = time.perf_counter()
    tr, messages = _run(bagley_torvik_solve, spec, grid, _config(args))
    elapsed = time.perf_counter() - t0

    if args.full_state:
        _write_table(args, tr.t, tr.values, tr.singular,
                     ["y", "d_half_y", "dy", "d_three_halves_y"])
    else:
        _write_table(args, tr.t, tr.values[:, :1], tr.singular, ["y"])
    if args.out:
        _emit_report({
            "command": "bagley-torvik",
            "inputs": {k: getattr(args, k) for k in ("a", "b", "c", "y0", "yp0",
                                                      "t_end", "steps", "forcing")},
            "output": args.out,
            "warnings": messages,
            "seconds": elapsed,
        })
    return EXIT_OK


def _pass_matrix(name: str, ok: np.ndarray) -> str:
    lines = [f"{name} ="]
    for row in ok:
        lines.append("   " + "   ".join("1" if x else "0" for x in row))
    return "\n".join(lines)


def cmd_verify(args) -> int:
    p = args.p
    B = companion_matrix(p)
    t0 = time.perf_counter()
    E1 = ml_matrix(B, 0.5, 1.0)
    E2 = ml_matrix(B, 0.5, 0.5)
    H1, H2 = reference_H1(p), reference_H2(p)
    elapsed = time.perf_counter() - t0

    d1, d2 = np.abs(E1 - H1), np.abs(E2 - H2)
    ok1, ok2 = d1 < args.tol, d2 < args.tol
    print(f"p = {p:g}, tol = {args.tol:g}")
    print(_pass_matrix("abs(E1-H1) < tol", ok1))
    print(_pass_matrix("abs(E2-H2) < tol", ok2))
    print(f"max deviation E1: {d1.max():.3e}, E2: {d2.max():.3e}")

    failures = [
        (name, i + 1, j + 1, d[i, j])
        for name, d, ok in (("E1", d1, ok1), ("E2", d2, ok2))
        for i, j in zip(*np.nonzero(~ok))
    ]
    for name, i, j, dev in failures:
        print(f"FAIL {name}({i},{j}): deviation {dev:.3e}")
    print(f"{32 - len(failures)}/32 entries pass ({elapsed:.3f} s)")
    return EXIT_OK if not failures else EXIT_VERIFY_FAILED


# }}}


# {{{ argument parsing


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer: {text}")
    return value


def _finite_float(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"must be finite: {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mittagmat",
        description="Matrix Mittag-Leffler functions and linear fractional systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate E_{alpha,beta}(A) for a matrix file")
    p.add_argument("--matrix", required=True, help="matrix file (JSON)")
    p.add_argument("--alpha", type=_finite_float, required=True)
    p.add_argument("--beta", type=_finite_float, default=1.0)
    p.add_argument("--rho", type=_finite_float, default=None,
                   help="Prabhakar parameter (1x1 matrices only)")
    p.add_argument("--accuracy", type=_finite_float, default=None,
                   help="scalar target accuracy (default 1e-13)")
    p.add_argument("--reference", default=None,
                   help="matrix file to report the maximum deviation against")
    p.add_argument("--out", default=None, help="output matrix file")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("solve", help="solve D^alpha z = A z + f")
    p.add_argument("--matrix", required=True)
    p.add_argument("--alpha", type=_finite_float, required=True)
    p.add_argument("--kind", choices=["rl", "caputo"], required=True)
    p.add_argument("--z0", required=True,
                   help="initial data: inline list such as '1,2' or a matrix file")
    p.add_argument("--t-end", type=_finite_float, required=True)
    p.add_argument("--steps", type=_positive_int, required=True)
    p.add_argument("--forcing", default=None,
                   help="sampled forcing table with rows 't v1 ... vn'")
    p.add_argument("--accuracy", type=_finite_float, default=None)
    p.add_argument("--out", default=None, help="output CSV table")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bagley-torvik", help="solve a y'' + b D^{3/2} y + c y = f")
    for name in ("a", "b", "c"):
        p.add_argument(f"--{name}", type=_finite_float, required=True)
    p.add_argument("--y0", type=_finite_float, default=0.0)
    p.add_argument("--yp0", type=_finite_float, default=0.0)
    p.add_argument("--t-end", type=_finite_float, required=True)
    p.add_argument("--steps", type=_positive_int, required=True)
    p.add_argument("--forcing", default=None, help="sampled forcing table 't f'")
    p.add_argument("--full-state", action="store_true",
                   help="write the whole companion state, not just y")
    p.add_argument("--accuracy", type=_finite_float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bagley_torvik)

    p = sub.add_parser("verify", help="compare against the closed-form Bagley-Torvik matrices")
    p.add_argument("--tol", type=_finite_float, default=1.0e-13)
    p.add_argument("--p", type=_finite_float, default=-1.0)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        return args.func(args)
    except DomainLimitError as exc:
        print(f"mittagmat: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (NumericalFailure, ForcingEvaluationError) as exc:
        print(f"mittagmat: numerical failure ({type(exc).__name__}): {exc}",
              file=sys.stderr)
        return EXIT_NUMERICAL
    except (UsageError, MittagMatError, ValueError, OSError) as exc:
        print(f"mittagmat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
