"""Shared oracles and matrix generators for the test suite."""

from __future__ import annotations

import mpmath
import numpy as np
import pytest
from scipy.linalg import block_diag


def mp_prabhakar(z, alpha, beta, rho=1, dps=40, raw=False):
    """Reference value of the Prabhakar function by high precision series."""
    with mpmath.workdps(max(dps, mpmath.mp.dps)):
        z = mpmath.mpc(z)
        alpha, beta, rho = mpmath.mpf(alpha), mpmath.mpc(beta), mpmath.mpc(rho)
        total = mpmath.mpc(0)
        poch = mpmath.mpc(1)
        zk = mpmath.mpc(1)
        k = 0
        while True:
            term = poch * zk / mpmath.factorial(k) * mpmath.rgamma(alpha * k + beta)
            total += term
            if k > 10 and abs(term) < mpmath.mpf(10) ** (-dps) * (1 + abs(total)):
                break
            poch *= rho + k
            zk *= z
            k += 1
            if k > 20000:
                raise RuntimeError("reference series did not converge")
        return +total if raw else complex(total)


def mp_expm(A, dps=40):
    """Matrix exponential by Taylor series in extended precision.

    Terms are summed until the remainder bound
    ``||A||^K / K! / (1 - ||A|| / (K + 1))`` drops below ``10^-dps``.
    """
    with mpmath.workdps(dps):
        M = mpmath.matrix([[mpmath.mpc(complex(x)) for x in row] for row in A])
        n = M.rows
        norm = mpmath.mnorm(M, "f")
        S = mpmath.eye(n)
        T = mpmath.eye(n)
        k = 0
        while True:
            k += 1
            T = T * M / k
            S += T
            bound = norm ** (k + 1) / mpmath.factorial(k + 1)
            if k + 2 > norm and bound / (1 - norm / (k + 2)) < mpmath.mpf(10) ** (-dps):
                break
        return np.array([[complex(S[i, j]) for j in range(n)] for i in range(n)])


def mp_ml_series_matrix(A, alpha, beta, dps=40):
    """``sum_k A^k / Gamma(alpha k + beta)`` in extended precision (``||A|| <= 1``)."""
    with mpmath.workdps(dps):
        M = mpmath.matrix([[mpmath.mpc(complex(x)) for x in row] for row in A])
        n = M.rows
        P = mpmath.eye(n)
        S = mpmath.zeros(n)
        for k in range(2000):
            term = P * mpmath.rgamma(alpha * k + beta)
            S += term
            if k > 5 and mpmath.mnorm(term, "f") < mpmath.mpf(10) ** (-dps):
                break
            P = P * M
        return np.array([[complex(S[i, j]) for j in range(n)] for i in range(n)])


def jordan_matrix(blocks):
    """Block diagonal Jordan matrix for ``[(eigenvalue, size), ...]``."""
    return block_diag(*[
        lam * np.eye(size, dtype=complex) + np.diag(np.ones(size - 1), 1)
        for lam, size in blocks
    ])


def conditioned_transform(rng, n, cond, real=False):
    """Random matrix with 2-norm condition number ``cond``."""
    G = rng.standard_normal((n, n))
    if not real:
        G = G + 1j * rng.standard_normal((n, n))
    U, _, Vh = np.linalg.svd(G)
    return U @ np.diag(np.logspace(0, -np.log10(cond), n)) @ Vh


def random_jordan_problem(rng, max_n=8, max_block=4, sep=0.5, max_cond=100.0, radius=2.0):
    """Random ``A = Z0 J0 Z0^{-1}`` with prescribed Jordan structure.

    :returns: ``(A, blocks)``
    """
    while True:
        lams = []
        for _ in range(int(rng.integers(1, 5))):
            lam = complex(rng.uniform(-radius, radius),
                          rng.uniform(-radius, radius) if rng.random() < 0.6 else 0.0)
            if all(abs(lam - mu) >= sep for mu in lams):
                lams.append(lam)
        blocks = [(lam, int(rng.integers(1, max_block + 1))) for lam in lams]
        if sum(s for _, s in blocks) <= max_n:
            break

    n = sum(s for _, s in blocks)
    Z = conditioned_transform(rng, n, 10 ** rng.uniform(0, np.log10(max_cond)))
    return Z @ jordan_matrix(blocks) @ np.linalg.inv(Z), blocks


@pytest.fixture
def rng():
    return np.random.default_rng(20240617)


# {{{ acceptance report

ACCEPTANCE_KEY = pytest.StashKey[dict]()


class AcceptanceLog:
    """Collects per-criterion outcomes; one summary line each is printed at the end."""

    def __init__(self, store: dict):
        self.store = store

    def record(self, criterion: str, passed: bool, detail: str) -> None:
        self.store.setdefault(criterion, []).append((passed, detail))


@pytest.fixture
def acceptance(request):
    return AcceptanceLog(request.config.stash.setdefault(ACCEPTANCE_KEY, {}))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    store = config.stash.get(ACCEPTANCE_KEY, None)
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, results in store.items():
        ok = all(p for p, _ in results)
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {criterion}")
        for passed, detail in results:
            terminalreporter.write_line(f"        [{'pass' if passed else 'FAIL'}] {detail}")

# }}}
