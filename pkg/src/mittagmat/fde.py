"""Linear fractional differential systems ``D^alpha z = A z + f(t)``.

Solutions are written in closed form through matrix Mittag-Leffler
functions. For the Caputo derivative

.. math::

    z(t) = E_{\\alpha, 1}(A t^\\alpha) z^0
        + \\int_0^t (t - \\tau)^{\\alpha - 1}
            E_{\\alpha, \\alpha}(A (t - \\tau)^\\alpha) f(\\tau) \\, \\mathrm{d}\\tau,

and for the Riemann-Liouville derivative the first term is replaced by
:math:`t^{\\alpha - 1} E_{\\alpha, \\alpha}(A t^\\alpha) z^0`.

The convolution is discretized by product integration: ``f`` is replaced by
its piecewise linear interpolant on a uniform grid and the kernel is
integrated exactly against it, using

.. math::

    \\int_0^s \\sigma^{\\alpha - 1} E_{\\alpha, \\alpha}(A \\sigma^\\alpha) \\, \\mathrm{d}\\sigma
        = s^\\alpha E_{\\alpha, \\alpha + 1}(A s^\\alpha), \\qquad
    \\int_0^s \\sigma^{\\alpha} E_{\\alpha, \\alpha}(A \\sigma^\\alpha) \\, \\mathrm{d}\\sigma
        = s^{\\alpha + 1} [E_{\\alpha, \\alpha + 1} - E_{\\alpha, \\alpha + 2}](A s^\\alpha).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from mittagmat.errors import (
    ForcingEvaluationError,
    InvalidParams,
    InvalidSpec,
    SingularReference,
)
from mittagmat.linalg import as_matrix, jordan_decompose
from mittagmat.matrix import ml_matrix_from_jordan
from mittagmat.parallel import parallel_map
from mittagmat.special import DEFAULT_CONFIG, EvalConfig, erfc

Forcing = Callable[[float], Union[float, complex, np.ndarray]]

_SQRT_PI = math.sqrt(math.pi)


class DerivativeKind(enum.Enum):
    RIEMANN_LIOUVILLE = "rl"
    CAPUTO = "caputo"


# {{{ problem description


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid ``t_i = i h`` on ``[0, t_end]`` with ``h = t_end / steps``."""

    t_end: float
    steps: int

    def __post_init__(self) -> None:
        if not (math.isfinite(self.t_end) and self.t_end > 0):
            raise InvalidParams(f"t_end must be positive: {self.t_end}")
        if int(self.steps) != self.steps or self.steps < 1:
            raise InvalidParams(f"steps must be a positive integer: {self.steps}")

    @property
    def h(self) -> float:
        return self.t_end / self.steps

    @property
    def nodes(self) -> np.ndarray:
        return self.h * np.arange(self.steps + 1)


@dataclass(frozen=True)
class FdeProblem:
    """Initial value problem ``D^alpha z = A z + f`` with ``0 < alpha <= 1``.

    For the Caputo derivative ``z0`` is the initial value ``z(0)``; for the
    Riemann-Liouville derivative it is the limit at ``t = 0`` of the
    fractional integral of order ``1 - alpha`` of ``z``.
    """

    A: np.ndarray
    alpha: float
    kind: DerivativeKind
    z0: np.ndarray
    #: ``f(t)``, a vector of length ``n``; ``None`` means ``f = 0``
    forcing: Optional[Forcing] = None

    def __post_init__(self) -> None:
        A = as_matrix(self.A)
        z0 = np.array(self.z0, dtype=np.complex128).reshape(-1)
        if not (0 < self.alpha <= 1):
            raise InvalidParams(f"alpha must lie in (0, 1]: {self.alpha}")
        if z0.shape[0] != A.shape[0]:
            raise InvalidParams(
                f"z0 has length {z0.shape[0]} but A is {A.shape[0]}x{A.shape[0]}"
            )
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "z0", z0)
        object.__setattr__(self, "kind", DerivativeKind(self.kind))

    @property
    def n(self) -> int:
        return self.A.shape[0]


@dataclass(frozen=True)
class Trajectory:
    """Solution values on a grid, split into homogeneous and forced parts.

    Nodes flagged in ``singular`` carry ``nan`` (the Riemann-Liouville
    solution is unbounded at ``t = 0`` for ``alpha < 1``).
    """

    grid: TimeGrid
    values: np.ndarray
    homogeneous_part: np.ndarray
    forced_part: np.ndarray
    singular: np.ndarray = field(default=None)

    def __post_init__(self) -> None:
        if self.singular is None:
            object.__setattr__(
                self, "singular", np.zeros(self.grid.steps + 1, dtype=bool)
            )

    @property
    def t(self) -> np.ndarray:
        return self.grid.nodes

    @property
    def y(self) -> np.ndarray:
        """First solution component."""
        return self.values[:, 0]


# }}}


# {{{ convolution quadrature


def _sample_forcing(f: Forcing, grid: TimeGrid, n: int) -> np.ndarray:
    samples = np.empty((grid.steps + 1, n), dtype=np.complex128)
    for i, t in enumerate(grid.nodes):
        try:
            value = np.asarray(f(float(t)), dtype=np.complex128)
            samples[i] = np.broadcast_to(value.reshape(-1) if value.ndim else value, (n,))
        except Exception as exc:
            raise ForcingEvaluationError(
                f"forcing evaluation failed at node {i} (t = {t}): {exc}", i
            ) from exc
        if not np.all(np.isfinite(samples[i])):
            raise ForcingEvaluationError(
                f"forcing is not finite at node {i} (t = {t})", i
            )
    return samples


def convolution_weights(
    A, alpha: float, grid: TimeGrid, cfg: EvalConfig = DEFAULT_CONFIG
) -> tuple[np.ndarray, np.ndarray]:
    """Product-integration weights for every lag ``k = 0, ..., steps - 1``.

    :returns: ``(near, far)`` arrays of shape ``(steps, n, n)`` such that

        .. math::

            \\int_0^{t_i} K(t_i - \\tau) f(\\tau) \\, \\mathrm{d}\\tau \\approx
            \\sum_{k = 0}^{i - 1} W^{near}_k f_{i - k} + W^{far}_k f_{i - k - 1}.
    """
    A = as_matrix(A)
    n = A.shape[0]
    h = grid.h
    jd = jordan_decompose(A)

    # antiderivatives P0(s), P1(s) of s^{a-1} E_{a,a}(A s^a) and s^a E_{a,a}(A s^a)
    def moments(k: int) -> tuple[np.ndarray, np.ndarray]:
        s = k * h
        c = s**alpha
        E1 = ml_matrix_from_jordan(jd, alpha, alpha + 1.0, cfg, scale=c)
        E2 = ml_matrix_from_jordan(jd, alpha, alpha + 2.0, cfg, scale=c)
        return c * E1, c * s * (E1 - E2)

    P0 = np.zeros((grid.steps + 1, n, n), dtype=np.complex128)
    P1 = np.zeros((grid.steps + 1, n, n), dtype=np.complex128)
    for k, (p0, p1) in enumerate(parallel_map(moments, range(1, grid.steps + 1)), start=1):
        P0[k], P1[k] = p0, p1

    dP0 = np.diff(P0, axis=0)
    dP1 = np.diff(P1, axis=0)
    s_near = h * np.arange(grid.steps)[:, None, None]
    s_far = s_near + h
    near = (s_far * dP0 - dP1) / h
    far = (dP1 - s_near * dP0) / h
    if np.all(A.imag == 0):
        # exactly real for real A; drop the rounding residue of the complex Jordan basis
        near, far = near.real.astype(np.complex128), far.real.astype(np.complex128)
    return near, far


def convolve_forcing(
    A,
    alpha: float,
    f: Optional[Forcing],
    grid: TimeGrid,
    cfg: EvalConfig = DEFAULT_CONFIG,
) -> np.ndarray:
    """Approximate the convolution integral at every grid node.

    :returns: an array of shape ``(steps + 1, n)``; row ``i`` approximates
        :math:`\\int_0^{t_i} (t_i - \\tau)^{\\alpha - 1}
        E_{\\alpha, \\alpha}(A (t_i - \\tau)^\\alpha) f(\\tau) \\, \\mathrm{d}\\tau`.
    """
    A = as_matrix(A)
    if not (0 < alpha <= 1):
        raise InvalidParams(f"alpha must lie in (0, 1]: {alpha}")
    n = A.shape[0]
    out = np.zeros((grid.steps + 1, n), dtype=np.complex128)
    if f is None:
        return out

    samples = _sample_forcing(f, grid, n)
    if not np.any(samples):
        return out

    near, far = convolution_weights(A, alpha, grid, cfg)
    for i in range(1, grid.steps + 1):
        # lag k pairs f_{i-k} with near[k] and f_{i-k-1} with far[k]
        out[i] = np.einsum("kab,kb->a", near[:i], samples[i:0:-1]) + np.einsum(
            "kab,kb->a", far[:i], samples[i - 1::-1]
        )
    return out


# }}}


# {{{ solvers


def _finish(p: FdeProblem, grid: TimeGrid, hom: np.ndarray, forced: np.ndarray,
            singular: np.ndarray) -> Trajectory:
    real = (
        np.all(p.A.imag == 0)
        and np.all(p.z0.imag == 0)
        and np.all(hom.imag[~singular] == 0)
        and np.all(forced.imag == 0)
    )
    if real:
        hom, forced = hom.real.copy(), forced.real.copy()
    values = hom + forced
    return Trajectory(grid, values, hom, forced, singular)


def _homogeneous(
    p: FdeProblem, grid: TimeGrid, beta: float, cfg: EvalConfig
) -> np.ndarray:
    """``E_{alpha, beta}(A t_i^alpha) z0`` at the nodes ``t_1, ..., t_N``."""
    jd = jordan_decompose(p.A)
    real = bool(np.all(p.A.imag == 0))

    def node(t: float) -> np.ndarray:
        E = ml_matrix_from_jordan(jd, p.alpha, beta, cfg, scale=t**p.alpha)
        if real:
            E = E.real.astype(np.complex128)
        return E @ p.z0

    hom = np.zeros((grid.steps + 1, p.n), dtype=np.complex128)
    hom[1:] = parallel_map(node, grid.nodes[1:])
    return hom


def solve_caputo(
    p: FdeProblem, grid: TimeGrid, cfg: EvalConfig = DEFAULT_CONFIG
) -> Trajectory:
    """Closed-form solution of the Caputo problem on a uniform grid.

    ``z(0) = z0`` holds exactly.
    """
    if p.kind is not DerivativeKind.CAPUTO:
        raise InvalidParams("solve_caputo needs a Caputo problem")

    hom = _homogeneous(p, grid, 1.0, cfg)
    hom[0] = p.z0
    forced = convolve_forcing(p.A, p.alpha, p.forcing, grid, cfg)
    return _finish(p, grid, hom, forced, np.zeros(grid.steps + 1, dtype=bool))


def solve_rl(
    p: FdeProblem, grid: TimeGrid, cfg: EvalConfig = DEFAULT_CONFIG
) -> Trajectory:
    """Closed-form solution of the Riemann-Liouville problem on a uniform grid.

    For ``alpha < 1`` the node ``t = 0`` is flagged singular and holds ``nan``.
    """
    if p.kind is not DerivativeKind.RIEMANN_LIOUVILLE:
        raise InvalidParams("solve_rl needs a Riemann-Liouville problem")

    hom = _homogeneous(p, grid, p.alpha, cfg)
    t = grid.nodes
    hom[1:] *= (t[1:] ** (p.alpha - 1.0))[:, None]

    singular = np.zeros(grid.steps + 1, dtype=bool)
    if p.alpha == 1.0:
        hom[0] = p.z0
    else:
        hom[0] = np.nan
        singular[0] = True

    forced = convolve_forcing(p.A, p.alpha, p.forcing, grid, cfg)
    return _finish(p, grid, hom, forced, singular)


def solve(p: FdeProblem, grid: TimeGrid, cfg: EvalConfig = DEFAULT_CONFIG) -> Trajectory:
    if p.kind is DerivativeKind.CAPUTO:
        return solve_caputo(p, grid, cfg)
    return solve_rl(p, grid, cfg)


# }}}


# {{{ Bagley-Torvik


@dataclass(frozen=True)
class BagleyTorvikSpec:
    """``a y'' + b D^{3/2} y + c y = f(t)`` with ``y(0) = y0``, ``y'(0) = yp0``."""

    a: float
    b: float
    c: float
    y0: float = 0.0
    yp0: float = 0.0
    forcing: Optional[Callable[[float], float]] = None

    def __post_init__(self) -> None:
        if self.a == 0:
            raise InvalidSpec("the coefficient a of y'' must be nonzero")
        for name in ("a", "b", "c", "y0", "yp0"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidSpec(f"{name} must be finite")


def bagley_torvik_reduce(s: BagleyTorvikSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Companion system of order 1/2 for ``z = (y, D^{1/2} y, y', D^{3/2} y)``.

    :returns: ``(B, C, z0)`` with ``D^{1/2} z = B z + C f``.
    """
    if s.a == 0:
        raise InvalidSpec("the coefficient a of y'' must be nonzero")
    B = np.diag(np.ones(3), 1)
    B[3, 0] = -s.c / s.a
    B[3, 3] = -s.b / s.a
    C = np.array([0.0, 0.0, 0.0, 1.0 / s.a])
    z0 = np.array([s.y0, 0.0, s.yp0, 0.0])
    return B, C, z0


def bagley_torvik_solve(
    s: BagleyTorvikSpec, grid: TimeGrid, cfg: EvalConfig = DEFAULT_CONFIG
) -> Trajectory:
    """Solve the Bagley-Torvik problem; ``Trajectory.y`` is the displacement."""
    B, C, z0 = bagley_torvik_reduce(s)
    forcing = None
    if s.forcing is not None:
        scalar_f = s.forcing

        def forcing(t: float) -> np.ndarray:
            return C * scalar_f(t)

    p = FdeProblem(B, 0.5, DerivativeKind.CAPUTO, z0, forcing)
    return solve_caputo(p, grid, cfg)


def companion_matrix(p: float) -> np.ndarray:
    """The matrix ``B`` of the Bagley-Torvik system with ``c = 0`` and ``p = -b/a``."""
    B = np.diag(np.ones(3), 1)
    B[3, 3] = p
    return B


def _check_p(p: float) -> float:
    p = float(p)
    if p == 0:
        raise SingularReference("the closed-form matrices are undefined at p = 0")
    return p


def reference_H1(p: float) -> np.ndarray:
    """Closed form of :math:`E_{1/2, 1}(B)` for :func:`companion_matrix` ``B``."""
    p = _check_p(p)
    g = math.exp(p * p) * erfc(-p)
    r = 1.0 / _SQRT_PI
    return np.array([
        [1.0, 2 * r, 1.0, g / p**3 - 1 / p**3 - 2 * r / p**2 - 1 / p],
        [0.0, 1.0, 2 * r, g / p**2 - 1 / p**2 - 2 * r / p],
        [0.0, 0.0, 1.0, g / p - 1 / p],
        [0.0, 0.0, 0.0, g],
    ])


def reference_H2(p: float) -> np.ndarray:
    """Closed form of :math:`E_{1/2, 1/2}(B)` for :func:`companion_matrix` ``B``."""
    p = _check_p(p)
    g = math.exp(p * p) * erfc(-p)
    r = 1.0 / _SQRT_PI
    return np.array([
        [r, 1.0, 2 * r, g / p**2 - 1 / p**2 - 2 * r / p],
        [0.0, r, 1.0, g / p - 1 / p],
        [0.0, 0.0, r, g],
        [0.0, 0.0, 0.0, p * g + r],
    ])


# }}}
