"""Empirical order of the forcing convolution on a manufactured solution.

The exact solution is ``z(t) = t z1`` for the Caputo problem with forcing
``f(t) = t^(1 - alpha) / Gamma(2 - alpha) z1 - A t z1``. Errors are reported
at the final time and as the maximum over all nodes.

Usage: python scripts/convergence_study.py [--alpha 0.3 0.5 0.8] [--steps 32 64 128 256 512]
"""

import argparse
import math

import numpy as np

from mittagmat import DerivativeKind, FdeProblem, TimeGrid, rgamma, solve_caputo

A = np.array([[-1.0, 0.5], [0.3, -0.7]])
Z1 = np.array([1.0, -0.5])


def errors(alpha: float, steps: int, t_end: float) -> tuple[float, float]:
    g = rgamma(2 - alpha).real

    def f(t):
        return t ** (1 - alpha) * g * Z1 - A @ Z1 * t

    p = FdeProblem(A, alpha, DerivativeKind.CAPUTO, np.zeros(2), f)
    tr = solve_caputo(p, TimeGrid(t_end, steps))
    err = np.linalg.norm(tr.values - np.outer(tr.t, Z1), axis=1)
    return float(err[-1]), float(err.max())


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--alpha", type=float, nargs="+", default=[0.3, 0.5, 0.8, 1.0])
    parser.add_argument("--steps", type=int, nargs="+", default=[32, 64, 128, 256, 512])
    parser.add_argument("--t-end", type=float, default=1.0)
    args = parser.parse_args()

    for alpha in args.alpha:
        print(f"alpha = {alpha}  (expected order 1 + alpha = {1 + alpha:.2f} at the final time)")
        print(f"{'steps':>7} {'err(t_end)':>12} {'order':>7} {'max err':>12} {'order':>7}")
        prev = None
        for n in args.steps:
            final, worst = errors(alpha, n, args.t_end)
            if prev is None:
                print(f"{n:7d} {final:12.3e} {'':>7} {worst:12.3e}")
            else:
                o1 = math.log2(prev[0] / final) if final > 0 else math.inf
                o2 = math.log2(prev[1] / worst) if worst > 0 else math.inf
                print(f"{n:7d} {final:12.3e} {o1:7.3f} {worst:12.3e} {o2:7.3f}")
            prev = (final, worst)
        print()


if __name__ == "__main__":
    main()
