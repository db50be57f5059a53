import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from conftest import mp_expm
from mittagmat.errors import (
    ForcingEvaluationError,
    InvalidParams,
    InvalidSpec,
    SingularReference,
)
from mittagmat.fde import (
    BagleyTorvikSpec,
    DerivativeKind,
    FdeProblem,
    TimeGrid,
    bagley_torvik_reduce,
    bagley_torvik_solve,
    companion_matrix,
    convolve_forcing,
    reference_H1,
    reference_H2,
    solve,
    solve_caputo,
    solve_rl,
)
from mittagmat.special import mittag_leffler, rgamma

CAPUTO = DerivativeKind.CAPUTO
RL = DerivativeKind.RIEMANN_LIOUVILLE


def _manufactured_error(alpha, steps, A, z1, t_end=1.0):
    g = rgamma(2 - alpha).real

    def f(t):
        return t ** (1 - alpha) * g * z1 - A @ z1 * t

    p = FdeProblem(A, alpha, CAPUTO, np.zeros(2), f)
    tr = solve_caputo(p, TimeGrid(t_end, steps))
    return np.linalg.norm(tr.values[-1] - t_end * z1)


# {{{ data types


def test_grid():
    g = TimeGrid(2.0, 4)
    assert g.h == 0.5
    assert np.array_equal(g.nodes, [0, 0.5, 1.0, 1.5, 2.0])
    with pytest.raises(InvalidParams):
        TimeGrid(0.0, 4)
    with pytest.raises(InvalidParams):
        TimeGrid(1.0, 0)


@pytest.mark.parametrize("alpha", [0.0, -0.5, 1.5])
def test_problem_rejects_alpha(alpha):
    with pytest.raises(InvalidParams):
        FdeProblem(np.eye(2), alpha, CAPUTO, [1.0, 0.0])


def test_problem_rejects_shape():
    with pytest.raises(InvalidParams):
        FdeProblem(np.eye(2), 0.5, CAPUTO, [1.0, 0.0, 0.0])


# }}}


# {{{ Caputo


def test_scalar_caputo_closed_form():
    a, alpha, z0 = -1.3, 0.7, 2.0
    grid = TimeGrid(1.5, 15)
    tr = solve_caputo(FdeProblem([[a]], alpha, CAPUTO, [z0]), grid)
    expected = [z0 * mittag_leffler(a * t**alpha, alpha, 1.0) for t in grid.nodes]
    assert np.max(np.abs(tr.y - np.real(expected))) <= 1e-14
    assert np.array_equal(tr.forced_part, np.zeros_like(tr.forced_part))


def test_alpha_one_is_matrix_exponential(rng):
    A = rng.standard_normal((3, 3))
    A *= 2.0 / np.linalg.norm(A, 2)
    z0 = rng.standard_normal(3)
    grid = TimeGrid(2.0, 20)
    tr = solve_caputo(FdeProblem(A, 1.0, CAPUTO, z0), grid)
    for t, z in zip(grid.nodes, tr.values):
        assert np.linalg.norm(z - (mp_expm(A * t) @ z0).real) <= 1e-11


def test_alpha_one_rl_equals_caputo(rng):
    A = rng.standard_normal((3, 3))
    z0 = rng.standard_normal(3)
    f = lambda t: np.array([np.sin(t), 1.0, t])  # noqa: E731
    grid = TimeGrid(1.0, 16)
    a = solve_caputo(FdeProblem(A, 1.0, CAPUTO, z0, f), grid)
    b = solve_rl(FdeProblem(A, 1.0, RL, z0, f), grid)
    assert not b.singular.any()
    assert np.max(np.abs(a.values - b.values)) <= 1e-14


def test_diagonal_caputo_decouples(rng):
    d = np.array([-2.0, 0.5, -0.3])
    z0 = np.array([1.0, -2.0, 0.5])
    alpha = 0.6
    grid = TimeGrid(2.0, 25)
    tr = solve_caputo(FdeProblem(np.diag(d), alpha, CAPUTO, z0), grid)
    for i in range(3):
        expected = [z0[i] * mittag_leffler(d[i] * t**alpha, alpha, 1.0).real for t in grid.nodes]
        assert np.max(np.abs(tr.values[:, i] - expected)) <= 1e-12

    # with forcing: components match independent scalar solves
    f = lambda t: np.array([np.cos(t), t, 1.0])  # noqa: E731
    tr = solve_caputo(FdeProblem(np.diag(d), alpha, CAPUTO, z0, f), grid)
    for i in range(3):
        fi = lambda t, i=i: f(t)[i]  # noqa: E731
        scalar = solve_caputo(FdeProblem([[d[i]]], alpha, CAPUTO, [z0[i]], fi), grid)
        assert np.max(np.abs(tr.values[:, i] - scalar.y)) <= 1e-12


@settings(max_examples=20, deadline=None)
@given(st.floats(0.1, 1.0), st.integers(0, 2**32 - 1))
def test_initial_value_exact(alpha, seed):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((3, 3))
    z0 = rng.standard_normal(3)
    tr = solve_caputo(FdeProblem(A, alpha, CAPUTO, z0, lambda t: np.array([1.0, t, -t])), TimeGrid(1.0, 8))
    assert np.array_equal(tr.values[0], z0)
    assert np.array_equal(tr.values, tr.homogeneous_part + tr.forced_part)


def test_linearity(rng):
    A = rng.standard_normal((2, 2))
    z1, z2 = rng.standard_normal(2), rng.standard_normal(2)
    f1 = lambda t: np.array([np.sin(3 * t), t**2])  # noqa: E731
    f2 = lambda t: np.array([1.0, np.exp(-t)])  # noqa: E731
    grid = TimeGrid(1.5, 30)
    a = solve_caputo(FdeProblem(A, 0.6, CAPUTO, z1, f1), grid)
    b = solve_caputo(FdeProblem(A, 0.6, CAPUTO, z2, f2), grid)
    c = solve_caputo(FdeProblem(A, 0.6, CAPUTO, z1 + z2, lambda t: f1(t) + f2(t)), grid)
    assert np.max(np.abs(c.values - a.values - b.values)) <= 1e-12


def test_complex_problem_stays_complex():
    A = np.array([[1j, 0.0], [0.0, -1j]])
    tr = solve_caputo(FdeProblem(A, 0.8, CAPUTO, [1.0, 1.0]), TimeGrid(1.0, 4))
    assert np.iscomplexobj(tr.values)
    assert abs(tr.values[-1, 0] - mittag_leffler(1j, 0.8, 1.0)) <= 1e-13


# }}}


# {{{ convolution


def test_zero_forcing_gives_zero():
    out = convolve_forcing(np.eye(2), 0.5, lambda t: np.zeros(2), TimeGrid(1.0, 5))
    assert np.array_equal(out, np.zeros((6, 2)))
    assert np.array_equal(convolve_forcing(np.eye(2), 0.5, None, TimeGrid(1.0, 5)), np.zeros((6, 2)))


@pytest.mark.parametrize("alpha", [0.3, 0.5, 1.0])
def test_constant_forcing_zero_matrix(alpha):
    c = 1.7
    grid = TimeGrid(2.0, 10)
    out = convolve_forcing([[0.0]], alpha, lambda t: c, grid)
    expected = c * grid.nodes**alpha / math.gamma(alpha + 1)
    assert np.max(np.abs(out[:, 0] - expected)) <= 1e-14


def _scalar_convolution(a, alpha, f, t):
    """Adaptive quadrature of the convolution with the algebraic endpoint weight."""
    def g(tau):
        return mittag_leffler(a * (t - tau) ** alpha, alpha, alpha).real * f(tau)

    value, _ = quad(g, 0.0, t, weight="alg", wvar=(0.0, alpha - 1.0), epsabs=1e-14, epsrel=1e-13, limit=200)
    return value


def test_convolution_exact_for_linear_forcing():
    a, alpha = -0.8, 0.6
    f = lambda t: 1.0 + 2.0 * t  # noqa: E731
    grid = TimeGrid(1.0, 10)
    out = convolve_forcing([[a]], alpha, f, grid)
    for i in (1, 4, 10):
        ref = _scalar_convolution(a, alpha, f, grid.nodes[i])
        assert abs(out[i, 0] - ref) <= 1e-12


def test_convolution_smooth_forcing_against_quadrature():
    a, alpha = -0.8, 0.6
    grid = TimeGrid(1.0, 200)
    out = convolve_forcing([[a]], alpha, np.cos, grid)
    ref = _scalar_convolution(a, alpha, np.cos, 1.0)
    assert abs(out[-1, 0] - ref) <= 1e-5


def test_manufactured_convergence_order():
    A = np.array([[-1.0, 0.5], [0.3, -0.7]])
    z1 = np.array([1.0, -0.5])
    errors = [_manufactured_error(0.5, n, A, z1) for n in (32, 64, 128)]
    orders = [math.log2(errors[i] / errors[i + 1]) for i in range(2)]
    assert min(orders) >= 1.4


def test_forcing_failure_reports_node():
    def f(t):
        if t > 0.55:
            raise RuntimeError("sensor offline")
        return np.ones(2)

    with pytest.raises(ForcingEvaluationError) as info:
        solve(FdeProblem(np.eye(2), 0.5, CAPUTO, [0.0, 0.0], f), TimeGrid(1.0, 10))
    assert info.value.node == 6


def test_nonfinite_forcing_rejected():
    with pytest.raises(ForcingEvaluationError):
        convolve_forcing(np.eye(1), 0.5, lambda t: np.nan, TimeGrid(1.0, 3))


# }}}


# {{{ Riemann-Liouville


def test_rl_zero_matrix():
    grid = TimeGrid(1.0, 10)
    tr = solve_rl(FdeProblem([[0.0]], 0.5, RL, [3.0]), grid)
    assert tr.singular[0] and not tr.singular[1:].any()
    assert np.isnan(tr.y[0])
    t = grid.nodes[1:]
    assert np.max(np.abs(tr.y[1:] - 3.0 * t**-0.5 / math.sqrt(math.pi))) <= 1e-14


def test_rl_against_quadrature():
    a, alpha, z0 = -0.5, 0.7, 1.2
    f = lambda t: 2.0 - t  # noqa: E731
    grid = TimeGrid(2.0, 20)
    tr = solve_rl(FdeProblem([[a]], alpha, RL, [z0], f), grid)
    for i in (3, 11, 20):
        t = grid.nodes[i]
        hom = t ** (alpha - 1) * mittag_leffler(a * t**alpha, alpha, alpha).real * z0
        assert abs(tr.y[i] - hom - _scalar_convolution(a, alpha, f, t)) <= 1e-12


def test_solve_dispatch():
    p = FdeProblem([[0.0]], 0.5, "rl", [1.0])
    assert solve(p, TimeGrid(1.0, 2)).singular[0]
    with pytest.raises(InvalidParams):
        solve_caputo(p, TimeGrid(1.0, 2))
    with pytest.raises(InvalidParams):
        solve_rl(FdeProblem([[0.0]], 0.5, "caputo", [1.0]), TimeGrid(1.0, 2))


# }}}


# {{{ Bagley-Torvik


def test_reduce_companion_matrix():
    B, C, z0 = bagley_torvik_reduce(BagleyTorvikSpec(1.0, 1.0, 0.0))
    assert np.array_equal(B, companion_matrix(-1.0))
    assert np.array_equal(C, [0, 0, 0, 1])


def test_reduce_arithmetic():
    B, C, z0 = bagley_torvik_reduce(BagleyTorvikSpec(2.0, 0.0, 2.0, 3.0, 7.0))
    assert np.array_equal(B[3], [-1.0, 0.0, 0.0, 0.0])
    assert np.array_equal(np.diag(B, 1), [1, 1, 1])
    assert np.array_equal(C, [0, 0, 0, 0.5])
    assert np.array_equal(z0, [3.0, 0.0, 7.0, 0.0])


def test_reduce_rejects_zero_a():
    with pytest.raises(InvalidSpec):
        BagleyTorvikSpec(0.0, 1.0, 1.0)


def test_bagley_torvik_reference_state():
    tr = bagley_torvik_solve(BagleyTorvikSpec(1.0, 1.0, 0.0, 1.0, 0.0), TimeGrid(1.0, 4))
    assert np.max(np.abs(tr.values[-1] - [1, 0, 0, 0])) <= 1e-13

    tr = bagley_torvik_solve(BagleyTorvikSpec(1.0, 1.0, 0.0, 0.4, -1.3), TimeGrid(1.0, 4))
    expected = reference_H1(-1.0) @ [0.4, 0.0, -1.3, 0.0]
    assert np.max(np.abs(tr.values[-1] - expected)) <= 1e-13


def test_bagley_torvik_zero_data():
    tr = bagley_torvik_solve(BagleyTorvikSpec(1.0, 0.5, 2.0), TimeGrid(3.0, 30))
    assert np.array_equal(tr.y, np.zeros(31))


def test_bagley_torvik_classical_oscillator():
    # b = 0: a y'' + c y = F, y(0) = y'(0) = 0 gives y = F/c (1 - cos(w t))
    a, c, F = 2.0, 3.0, 1.5
    grid = TimeGrid(4.0, 40)
    tr = bagley_torvik_solve(BagleyTorvikSpec(a, 0.0, c, forcing=lambda t: F), grid)
    expected = F / c * (1 - np.cos(math.sqrt(c / a) * grid.nodes))
    assert np.max(np.abs(tr.y - expected)) <= 1e-10


def test_bagley_torvik_free_oscillator():
    a, c, y0, yp0 = 1.0, 4.0, 0.5, -1.0
    grid = TimeGrid(3.0, 12)
    tr = bagley_torvik_solve(BagleyTorvikSpec(a, 0.0, c, y0, yp0), grid)
    w = math.sqrt(c / a)
    expected = y0 * np.cos(w * grid.nodes) + yp0 / w * np.sin(w * grid.nodes)
    assert np.max(np.abs(tr.y - expected)) <= 1e-12


# }}}


# {{{ reference matrices


@pytest.mark.parametrize("p", [-1.0, -0.5, -2.0, 0.3, 1.7])
def test_reference_fixed_entries(p):
    H1, H2 = reference_H1(p), reference_H2(p)
    assert H1[0, 0] == 1.0
    assert H1[1, 2] == 2 / math.sqrt(math.pi)
    assert H2[0, 0] == 1 / math.sqrt(math.pi)
    assert np.all(np.tril(H1, -1) == 0) and np.all(np.tril(H2, -1) == 0)


def test_reference_known_entries():
    g = 0.427583576155807004410750344490
    H1, H2 = reference_H1(-1.0), reference_H2(-1.0)
    assert abs(H1[3, 3] - g) <= 1e-15
    assert abs(H1[2, 3] - (1 - g)) <= 1e-15
    assert abs(H2[3, 3] - (1 / math.sqrt(math.pi) - g)) <= 1e-15


def test_reference_rejects_zero():
    with pytest.raises(SingularReference):
        reference_H1(0.0)
    with pytest.raises(SingularReference):
        reference_H2(0.0)


# }}}
