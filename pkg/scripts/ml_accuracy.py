"""Accuracy of the scalar Mittag-Leffler engine against mpmath.

For each (alpha, beta) pair, random arguments are drawn in bands of |z| and
the worst error relative to ``1 + |E|`` is reported.

Usage: python scripts/ml_accuracy.py [--samples 40] [--seed 1]
"""

import argparse
import cmath
import math

import mpmath
import numpy as np

from mittagmat import EvalConfig, MLParams, ml_scalar
from mittagmat.errors import NumericalFailure

PAIRS = [(0.1, 1.0), (0.3, 0.9), (0.5, 1.0), (0.5, 0.5), (0.8, 1.2), (1.0, 1.0), (1.5, 1.0), (2.0, 1.5)]
BANDS = [(0.0, 1.0), (1.0, 10.0), (10.0, 30.0), (30.0, 100.0)]


def reference(z: complex, alpha: float, beta: float) -> complex:
    dps = 30 + int(abs(z) ** (1 / alpha) / 2.3)
    with mpmath.workdps(dps):
        # parameters in extended precision: the series cancels heavily
        zz, a, b = mpmath.mpc(z), mpmath.mpf(alpha), mpmath.mpf(beta)
        total, k = mpmath.mpc(0), 0
        while True:
            term = zz**k * mpmath.rgamma(a * k + b)
            total += term
            if k > 10 and abs(term) < mpmath.mpf(10) ** (-dps) * (1 + abs(total)):
                return complex(total)
            k += 1


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--samples", type=int, default=40)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()
    rng = np.random.default_rng(args.seed)
    cfg = EvalConfig()

    print(f"{'alpha':>6} {'beta':>5} " + " ".join(f"|z| in [{a:g},{b:g})".rjust(16) for a, b in BANDS))
    for alpha, beta in PAIRS:
        cells = []
        for lo, hi in BANDS:
            worst, failures, used = 0.0, 0, 0
            for _ in range(args.samples):
                z = cmath.rect(rng.uniform(lo, hi), rng.uniform(-math.pi, math.pi))
                if abs(z) ** (1 / alpha) > 700:
                    continue  # overflows double precision
                used += 1
                try:
                    value = ml_scalar(z, MLParams(alpha, beta), cfg)
                except NumericalFailure:
                    failures += 1
                    continue
                ref = reference(z, alpha, beta)
                worst = max(worst, abs(value - ref) / (1 + abs(ref)))
            cell = f"{worst:.1e}" if used else "n/a"
            if failures:
                cell += f" ({failures} err)"
            cells.append(cell.rjust(16))
        print(f"{alpha:6g} {beta:5g} " + " ".join(cells))


if __name__ == "__main__":
    main()
