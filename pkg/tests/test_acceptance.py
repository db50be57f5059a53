"""Acceptance suite: every criterion prints one PASS/FAIL line in the summary."""

import cmath
import math
import time

import mpmath
import numpy as np
import pytest

from conftest import mp_expm, random_jordan_problem
from mittagmat.fde import (
    DerivativeKind,
    FdeProblem,
    TimeGrid,
    companion_matrix,
    reference_H1,
    reference_H2,
    solve_caputo,
)
from mittagmat.linalg import jordan_decompose
from mittagmat.matrix import interpolation_oracle, ml_matrix, spectrum_values
from mittagmat.special import MLParams, ml_derivative, ml_scalar, rgamma

C_REFERENCE = "1 reference matrices H1/H2 (p = -1 at 1e-13 in < 1 s; p = -0.5, -2 at 1e-12)"
C_SCALAR = "2 scalar identity suite (|E_1/2,1 - e^z^2 erfc(-z)|, |E_1/2,1/2 - z E_1/2,1 - 1/sqrt(pi)| <= 1e-12)"
C_DERIV = "3 derivative relation vs 4th-order central differences (h = 1e-3, relative 1e-7)"
C_EQUIV = "4 definition equivalence on 50 prescribed-structure matrices (1e-10, < 10 s)"
C_EXP = "5 exponential specialization on 20 random 5x5 matrices (relative 1e-12)"
C_FDE = "6 FDE degenerations (alpha = 1 at 1e-10, diagonal A at 1e-12, z(0) exact)"
C_ORDER = "7 convolution quadrature order >= 1.4 (alpha = 0.5, steps 64, 128, 256)"
C_NUMBERS = "8 closed-form entries of the verification example are reproduced"

SQRT_PI = math.sqrt(math.pi)


def _erfc_factor(p):
    """``e^{p^2} erfc(-p)`` in extended precision."""
    with mpmath.workdps(40):
        return mpmath.exp(mpmath.mpf(p) ** 2) * mpmath.erfc(-mpmath.mpf(p))


# {{{ 1 reference matrices


def test_reference_matrices(acceptance):
    B = companion_matrix(-1.0)
    t0 = time.perf_counter()
    E1 = ml_matrix(B, 0.5, 1.0)
    E2 = ml_matrix(B, 0.5, 0.5)
    elapsed = time.perf_counter() - t0
    d1 = np.max(np.abs(E1 - reference_H1(-1.0)))
    d2 = np.max(np.abs(E2 - reference_H2(-1.0)))
    ok = d1 <= 1e-13 and d2 <= 1e-13 and elapsed < 1.0
    acceptance.record(C_REFERENCE, ok,
                      f"p = -1: max|E1-H1| = {d1:.2e}, max|E2-H2| = {d2:.2e}, {elapsed:.3f} s")
    assert ok

    for p in (-0.5, -2.0):
        B = companion_matrix(p)
        d1 = np.max(np.abs(ml_matrix(B, 0.5, 1.0) - reference_H1(p)))
        d2 = np.max(np.abs(ml_matrix(B, 0.5, 0.5) - reference_H2(p)))
        ok = d1 <= 1e-12 and d2 <= 1e-12
        acceptance.record(C_REFERENCE, ok, f"p = {p}: max|E1-H1| = {d1:.2e}, max|E2-H2| = {d2:.2e}")
        assert ok


# }}}


# {{{ 2 scalar identities


def _identity_points():
    rng = np.random.default_rng(7)
    real = [float(x) for x in np.linspace(-5.0, 5.0, 41)]
    cplx = [cmath.rect(3.0 * math.sqrt(rng.uniform()), rng.uniform(-math.pi, math.pi)) for _ in range(20)]
    return real + cplx


def _identity_deviations():
    """Absolute and mixed relative deviations of both identities on the point set."""
    out = []
    for z in _identity_points():
        with mpmath.workdps(40):
            zz = mpmath.mpc(z)
            ref = complex(mpmath.exp(zz * zz) * mpmath.erfc(-zz))
        e1 = ml_scalar(z, MLParams(0.5, 1.0))
        e2 = ml_scalar(z, MLParams(0.5, 0.5))
        dev1 = abs(e1 - ref)
        dev2 = abs(e2 - z * e1 - 1 / SQRT_PI)
        scale2 = max(1.0, abs(e2), abs(z * e1))
        out.append((z, dev1, dev1 / max(1.0, abs(ref)), dev2, dev2 / scale2, abs(ref)))
    return out


@pytest.mark.xfail(strict=True, reason=(
    "literal absolute 1e-12 is below one ulp of E_1/2,1(z) on the point set "
    "(|E| reaches 1.4e11 at z = 5); see the mixed relative test"
))
def test_scalar_identities_absolute(acceptance):
    devs = _identity_deviations()
    w1 = max(devs, key=lambda d: d[1])
    w2 = max(devs, key=lambda d: d[3])
    ok1, ok2 = w1[1] <= 1e-12, w2[3] <= 1e-12
    acceptance.record(C_SCALAR, ok1,
                      f"absolute erfc identity: max dev {w1[1]:.2e} at z = {w1[0]:.3g} where |E| = {w1[5]:.2e}")
    acceptance.record(C_SCALAR, ok2,
                      f"absolute recurrence identity: max dev {w2[3]:.2e} at z = {w2[0]:.3g}")
    assert ok1 and ok2


def test_scalar_identities_mixed_relative(acceptance):
    devs = _identity_deviations()
    r1 = max(d[2] for d in devs)
    r2 = max(d[4] for d in devs)
    ok = r1 <= 1e-12 and r2 <= 1e-12
    acceptance.record(C_SCALAR, ok,
                      f"relative to max(1, |value|): erfc identity {r1:.2e}, recurrence identity {r2:.2e}")
    assert ok


# }}}


# {{{ 3 derivative relation


def _central_difference(f, z, m, h):
    if m == 1:
        c = {-2: 1, -1: -8, 1: 8, 2: -1}
        return sum(w * f(z + k * h) for k, w in c.items()) / (12 * h)
    if m == 2:
        c = {-2: -1, -1: 16, 0: -30, 1: 16, 2: -1}
        return sum(w * f(z + k * h) for k, w in c.items()) / (12 * h * h)
    c = {-3: 1, -2: -8, -1: 13, 1: -13, 2: 8, 3: -1}
    return sum(w * f(z + k * h) for k, w in c.items()) / (8 * h**3)


# third derivatives at z = -1 lose ~eps |E| / h^3 to rounding, which exceeds
# 1e-7 relative even with correctly rounded samples (about 2.4e-7 and 2.0e-7)
_ROUNDING_LIMITED = {(0.5, 1.0, 3, -1), (0.7, 1.2, 3, -1)}


def _derivative_cases():
    for alpha, beta in [(0.5, 1.0), (0.7, 1.2)]:
        for m in (1, 2, 3):
            for z in (-1, 0.3, 0.5 + 0.5j):
                marks = []
                if (alpha, beta, m, z) in _ROUNDING_LIMITED:
                    marks = [pytest.mark.xfail(strict=True, reason="finite difference rounding floor")]
                yield pytest.param(alpha, beta, m, z, marks=marks, id=f"{alpha}-{beta}-m{m}-z{z}")


@pytest.mark.parametrize("alpha, beta, m, z", list(_derivative_cases()))
def test_derivative_relation(acceptance, alpha, beta, m, z):
    def f(x):
        return ml_scalar(x, MLParams(alpha, beta))

    fd = _central_difference(f, z, m, 1e-3)
    exact = ml_derivative(z, alpha, beta, m)
    rel = abs(fd - exact) / abs(exact)
    ok = rel <= 1e-7
    acceptance.record(C_DERIV, ok, f"alpha={alpha} beta={beta} m={m} z={z}: relative {rel:.2e}")
    assert ok


# }}}


# {{{ 4 definition equivalence


def test_definition_equivalence(acceptance):
    rng = np.random.default_rng(20240618)
    problems = [random_jordan_problem(rng, max_n=8, max_block=4, sep=0.5, max_cond=100.0)
                for _ in range(50)]

    worst = 0.0
    t0 = time.perf_counter()
    for A, _ in problems:
        jd = jordan_decompose(A)
        for alpha, beta in [(0.5, 1.0), (0.8, 0.8)]:
            F = ml_matrix(A, alpha, beta)
            R = interpolation_oracle(A, spectrum_values(jd, alpha, beta))
            worst = max(worst, np.linalg.norm(F - R) / max(1.0, np.linalg.norm(F)))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-10 and elapsed < 10.0
    acceptance.record(C_EQUIV, ok, f"worst scaled deviation {worst:.2e}, {elapsed:.2f} s")
    assert ok


# }}}


# {{{ 5 exponential


def test_exponential_specialization(acceptance):
    rng = np.random.default_rng(20240619)
    worst = 0.0
    for _ in range(20):
        A = rng.standard_normal((5, 5))
        A *= rng.uniform(0.1, 2.0) / max(abs(np.linalg.eigvals(A)))
        ref = mp_expm(A)
        worst = max(worst, np.linalg.norm(ml_matrix(A, 1.0, 1.0) - ref) / np.linalg.norm(ref))
    ok = worst <= 1e-12
    acceptance.record(C_EXP, ok, f"worst relative Frobenius error {worst:.2e}")
    assert ok


# }}}


# {{{ 6 FDE degenerations


def test_fde_degenerations(acceptance):
    rng = np.random.default_rng(20240620)
    CAPUTO = DerivativeKind.CAPUTO

    # (i) alpha = 1
    worst = 0.0
    for _ in range(5):
        A = rng.standard_normal((3, 3))
        A *= rng.uniform(0.5, 2.0) / np.linalg.norm(A, 2)
        z0 = rng.standard_normal(3)
        grid = TimeGrid(2.0, 40)
        tr = solve_caputo(FdeProblem(A, 1.0, CAPUTO, z0), grid)
        for t, z in zip(grid.nodes, tr.values):
            worst = max(worst, np.linalg.norm(z - mp_expm(A * t).real @ z0))
    ok1 = worst <= 1e-10
    acceptance.record(C_FDE, ok1, f"(i) alpha = 1 vs exp(At) z0 on [0, 2]: max error {worst:.2e}")

    # (ii) diagonal A
    worst = 0.0
    for alpha in (0.3, 0.6, 0.9):
        d = rng.uniform(-3.0, 1.0, 4)
        z0 = rng.standard_normal(4)
        grid = TimeGrid(2.0, 30)
        tr = solve_caputo(FdeProblem(np.diag(d), alpha, CAPUTO, z0), grid)
        for i in range(4):
            expected = np.array([
                z0[i] * ml_scalar(d[i] * t**alpha, MLParams(alpha, 1.0)).real for t in grid.nodes
            ])
            worst = max(worst, np.max(np.abs(tr.values[:, i] - expected)))
    ok2 = worst <= 1e-12
    acceptance.record(C_FDE, ok2, f"(ii) diagonal A vs scalar formulas: max error {worst:.2e}")

    # (iii) z(0) = z0 exactly, with and without forcing
    exact = True
    for alpha in (0.2, 0.5, 1.0):
        A = rng.standard_normal((3, 3))
        z0 = rng.standard_normal(3)
        for f in (None, lambda t: np.array([1.0, np.sin(t), t])):
            tr = solve_caputo(FdeProblem(A, alpha, CAPUTO, z0, f), TimeGrid(1.0, 8))
            exact &= bool(np.array_equal(tr.values[0], z0))
    acceptance.record(C_FDE, exact, "(iii) z(0) == z0 bit for bit")
    assert ok1 and ok2 and exact


# }}}


# {{{ 7 convolution order


def _manufactured_errors(steps):
    alpha = 0.5
    A = np.array([[-1.0, 0.5], [0.3, -0.7]])
    z1 = np.array([1.0, -0.5])
    g = rgamma(2 - alpha).real

    def f(t):
        return t ** (1 - alpha) * g * z1 - A @ z1 * t

    tr = solve_caputo(FdeProblem(A, alpha, DerivativeKind.CAPUTO, np.zeros(2), f), TimeGrid(1.0, steps))
    err = np.linalg.norm(tr.values - np.outer(tr.t, z1), axis=1)
    return err[-1], np.max(err)


def test_convolution_order(acceptance):
    final, maxnorm = zip(*(_manufactured_errors(n) for n in (64, 128, 256)))
    orders = [math.log2(final[i] / final[i + 1]) for i in range(2)]
    orders_max = [math.log2(maxnorm[i] / maxnorm[i + 1]) for i in range(2)]
    ok = min(orders) >= 1.4
    acceptance.record(
        C_ORDER, ok,
        "error at t = 1: " + ", ".join(f"{e:.2e}" for e in final)
        + "; orders " + ", ".join(f"{o:.3f}" for o in orders)
        + " (max over nodes: " + ", ".join(f"{o:.3f}" for o in orders_max) + ")",
    )
    assert ok


# }}}


# {{{ 8 printed numbers


def test_printed_numbers(acceptance):
    g = _erfc_factor(-1.0)
    E1 = ml_matrix(companion_matrix(-1.0), 0.5, 1.0)
    E2 = ml_matrix(companion_matrix(-1.0), 0.5, 0.5)
    r = 1 / mpmath.sqrt(mpmath.pi)
    checks = {
        "E1(1,2) = 2/sqrt(pi)": (E1[0, 1], 2 * r),
        "E1(4,4) = e erfc(1)": (E1[3, 3], g),
        "E1(3,4) = 1 - e erfc(1)": (E1[2, 3], 1 - g),
        "E1(1,4) = 2 - e erfc(1) - 2/sqrt(pi)": (E1[0, 3], 2 - g - 2 * r),
        "E2(4,4) = 1/sqrt(pi) - e erfc(1)": (E2[3, 3], r - g),
    }
    all_ok = True
    for name, (value, ref) in checks.items():
        dev = abs(value - complex(ref))
        ok = dev <= 1e-13
        all_ok &= ok
        acceptance.record(C_NUMBERS, ok, f"{name}: deviation {dev:.2e}")
    assert all_ok


# }}}
