"""Compare E_{1/2,1}(B) and E_{1/2,1/2}(B) with their closed forms for several p.

Usage: python scripts/reference_check.py [--p -1 -0.5 -2 0.7]
"""

import argparse
import time

import numpy as np

from mittagmat import companion_matrix, ml_matrix, reference_H1, reference_H2


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--p", type=float, nargs="+", default=[-1.0, -0.5, -2.0, -3.0, 0.5, 1.0])
    args = parser.parse_args()

    print(f"{'p':>6} {'max|E1-H1|':>12} {'max|E2-H2|':>12} {'seconds':>9}")
    for p in args.p:
        B = companion_matrix(p)
        t0 = time.perf_counter()
        E1 = ml_matrix(B, 0.5, 1.0)
        E2 = ml_matrix(B, 0.5, 0.5)
        elapsed = time.perf_counter() - t0
        d1 = np.max(np.abs(E1 - reference_H1(p)))
        d2 = np.max(np.abs(E2 - reference_H2(p)))
        print(f"{p:6g} {d1:12.3e} {d2:12.3e} {elapsed:9.4f}")


if __name__ == "__main__":
    main()
