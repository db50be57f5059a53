"""Matrix Mittag-Leffler functions through the Jordan canonical form.

For ``A = Z J Z^{-1}`` with Jordan blocks ``J_k`` (eigenvalue ``lambda_k``,
size ``m_k``)

.. math::

    E_{\\alpha, \\beta}(A) = Z \\operatorname{diag}(E_{\\alpha, \\beta}(J_k)) Z^{-1},

and each ``E_{\\alpha, \\beta}(J_k)`` is upper triangular Toeplitz with
``E^{j + 1}_{\\alpha, \\beta + j \\alpha}(\\lambda_k)`` on its ``j``-th
superdiagonal. The Hermite interpolation polynomial gives an independent
route to the same matrix and is provided as a test oracle.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from mittagmat.errors import DomainLimitError, InvalidParams, MittagMatError
from mittagmat.linalg import JordanDecomposition, as_matrix, jordan_decompose
from mittagmat.special import (
    DEFAULT_CONFIG,
    EvalConfig,
    MLParams,
    Scalar,
    ml_derivative,
    ml_scalar,
)

#: eigenvalues of larger magnitude are outside the certified scalar range
EIGENVALUE_LIMIT = 100.0
#: imaginary residue below this fraction of the real part is discarded
REALIFICATION_TOL = 1.0e-8
#: largest Hermite interpolation degree accepted by the oracle
MAX_ORACLE_DEGREE = 30


class RealificationResidual(UserWarning):
    """A real-input matrix function kept a non-negligible imaginary part."""


def _check_alpha(alpha: float) -> None:
    if isinstance(alpha, complex) or not math.isfinite(alpha) or alpha <= 0:
        raise InvalidParams(f"alpha must be a positive real number: {alpha!r}")


def _check_domain(lam: complex) -> None:
    if abs(lam) > EIGENVALUE_LIMIT:
        raise DomainLimitError(
            f"eigenvalue {lam} exceeds the supported magnitude {EIGENVALUE_LIMIT:g}"
        )


# {{{ Jordan block values


def toeplitz_row(
    lam: Scalar,
    size: int,
    alpha: float,
    beta: Scalar = 1.0,
    cfg: EvalConfig = DEFAULT_CONFIG,
    scale: float = 1.0,
) -> np.ndarray:
    r"""First row of :math:`E_{\alpha, \beta}(c J)` for a Jordan block ``J``.

    Entry ``j`` is :math:`c^j E^{j + 1}_{\alpha, \beta + j \alpha}(c \lambda)`
    with ``c = scale``.
    """
    _check_alpha(alpha)
    if size < 1:
        raise InvalidParams(f"block size must be positive: {size}")
    z = scale * complex(lam)
    _check_domain(z)

    row = np.empty(size, dtype=np.complex128)
    for j in range(size):
        row[j] = scale**j * ml_scalar(z, MLParams(alpha, beta + j * alpha, j + 1), cfg)
    return row


def _toeplitz_upper(row: np.ndarray) -> np.ndarray:
    size = len(row)
    F = np.zeros((size, size), dtype=np.complex128)
    for j in range(size):
        idx = np.arange(size - j)
        F[idx, idx + j] = row[j]
    return F


def fill_jordan_block(
    lam: Scalar,
    size: int,
    alpha: float,
    beta: Scalar = 1.0,
    cfg: EvalConfig = DEFAULT_CONFIG,
) -> np.ndarray:
    """Evaluate :math:`E_{\\alpha, \\beta}` at a single Jordan block."""
    return _toeplitz_upper(toeplitz_row(lam, size, alpha, beta, cfg))


# }}}


# {{{ matrix function


def _is_real_problem(A: np.ndarray, alpha: float, beta: Scalar) -> bool:
    return bool(np.all(A.imag == 0)) and complex(beta).imag == 0


def _realify(F: np.ndarray) -> np.ndarray:
    """Drop the imaginary residue of a matrix that is real in exact arithmetic."""
    imag = np.linalg.norm(F.imag)
    real = np.linalg.norm(F.real)
    if imag <= REALIFICATION_TOL * real or imag == 0.0:
        return F.real.copy()

    warnings.warn(
        f"imaginary part {imag:.3e} of a real matrix function exceeds "
        f"{REALIFICATION_TOL:.0e} times its real part {real:.3e}",
        RealificationResidual,
        stacklevel=3,
    )
    return F


def ml_matrix_from_jordan(
    jd: JordanDecomposition,
    alpha: float,
    beta: Scalar = 1.0,
    cfg: EvalConfig = DEFAULT_CONFIG,
    scale: float = 1.0,
) -> np.ndarray:
    """Evaluate :math:`E_{\\alpha, \\beta}(c A)` from a decomposition of ``A``.

    The complex result is returned without realification.
    """
    _check_alpha(alpha)
    for lam, _ in jd.blocks:
        _check_domain(scale * lam)

    # one Toeplitz row per distinct eigenvalue, long enough for its largest block
    rows = {
        lam: toeplitz_row(lam, size, alpha, beta, cfg, scale=scale)
        for lam, size in jd.largest_blocks().items()
    }

    n = jd.n
    D = np.zeros((n, n), dtype=np.complex128)
    start = 0
    for lam, size in jd.blocks:
        D[start:start + size, start:start + size] = _toeplitz_upper(rows[lam][:size])
        start += size

    return jd.transform @ D @ jd.transform_inverse


def ml_matrix(
    A,
    alpha: float,
    beta: Scalar = 1.0,
    cfg: EvalConfig = DEFAULT_CONFIG,
    cluster_tol: Optional[float] = None,
) -> np.ndarray:
    """Matrix Mittag-Leffler function :math:`E_{\\alpha, \\beta}(A)`.

    For real ``A`` and real ``beta`` a real array is returned (the imaginary
    rounding residue is discarded). An ill-conditioned Jordan transform is
    reported with an :class:`~mittagmat.errors.IllConditionedTransform`
    warning.

    :raises DomainLimitError: if ``A`` has an eigenvalue of magnitude above 100.
    """
    _check_alpha(alpha)
    A = as_matrix(A)
    jd = jordan_decompose(A, cluster_tol=cluster_tol)
    F = ml_matrix_from_jordan(jd, alpha, beta, cfg)
    if _is_real_problem(A, alpha, beta):
        return _realify(F)
    return F


def alpha_exponential(
    A,
    t: float,
    alpha: float,
    cfg: EvalConfig = DEFAULT_CONFIG,
) -> np.ndarray:
    """Matrix alpha-exponential :math:`t^{\\alpha - 1} E_{\\alpha, \\alpha}(A t^\\alpha)`."""
    _check_alpha(alpha)
    if not t > 0:
        raise InvalidParams(f"t must be positive: {t}")
    A = as_matrix(A)
    return t ** (alpha - 1.0) * ml_matrix(A * t**alpha, alpha, alpha, cfg)


class ScaledEvaluator:
    """Evaluate :math:`E_{\\alpha, \\beta}(c A)` for many scalars ``c``.

    ``A`` is decomposed once; for every ``c`` only the scalar functions on
    the scaled spectrum are recomputed.
    """

    def __init__(
        self,
        A,
        alpha: float,
        beta: Scalar = 1.0,
        cfg: EvalConfig = DEFAULT_CONFIG,
        cluster_tol: Optional[float] = None,
    ) -> None:
        _check_alpha(alpha)
        self.A = as_matrix(A)
        self.alpha = alpha
        self.beta = beta
        self.cfg = cfg
        self.decomposition = jordan_decompose(self.A, cluster_tol=cluster_tol)
        self.real = _is_real_problem(self.A, alpha, beta)

    def __call__(self, c: float) -> np.ndarray:
        F = ml_matrix_from_jordan(self.decomposition, self.alpha, self.beta, self.cfg, scale=c)
        return _realify(F) if self.real else F


# }}}


# {{{ interpolation oracle


@dataclass(frozen=True)
class SpectrumValues:
    """Values ``f(lambda), f'(lambda), ..., f^(m - 1)(lambda)`` per eigenvalue."""

    #: ``(eigenvalue, derivatives)`` with ``derivatives[j]`` the ``j``-th derivative
    values: tuple[tuple[complex, tuple[complex, ...]], ...]

    @property
    def degree_bound(self) -> int:
        """Number of interpolation conditions, ``sum m_k``."""
        return sum(len(d) for _, d in self.values)


def spectrum_values(
    jd: JordanDecomposition,
    alpha: float,
    beta: Scalar = 1.0,
    cfg: EvalConfig = DEFAULT_CONFIG,
) -> SpectrumValues:
    """Derivatives of :math:`E_{\\alpha, \\beta}` on the spectrum of a matrix."""
    _check_alpha(alpha)
    out = []
    for lam, size in jd.largest_blocks().items():
        _check_domain(lam)
        derivs = tuple(complex(ml_derivative(lam, alpha, beta, j, cfg)) for j in range(size))
        out.append((complex(lam), derivs))
    return SpectrumValues(tuple(out))


def hermite_newton_coefficients(vals: SpectrumValues) -> tuple[list[complex], list[complex]]:
    """Newton form of the Hermite interpolation polynomial.

    :returns: ``(nodes, coefficients)`` such that
        ``r(x) = sum_i c_i prod_{j < i} (x - nodes_j)``.
    """
    nodes: list[complex] = []
    derivs: list[tuple[complex, ...]] = []
    for lam, d in vals.values:
        for _ in d:
            nodes.append(lam)
            derivs.append(d)

    N = len(nodes)
    table = np.zeros((N, N), dtype=np.complex128)
    for i in range(N):
        table[i, 0] = derivs[i][0]
    for j in range(1, N):
        for i in range(N - j):
            dz = nodes[i + j] - nodes[i]
            if dz == 0:
                table[i, j] = derivs[i][j] / math.factorial(j)
            else:
                table[i, j] = (table[i + 1, j - 1] - table[i, j - 1]) / dz

    return nodes, [complex(c) for c in table[0]]


def interpolation_oracle(A, vals: SpectrumValues) -> np.ndarray:
    """Evaluate ``f(A) = r(A)`` with ``r`` the Hermite interpolation polynomial.

    Newton divided differences with repeated nodes, then Horner's scheme in
    the matrix argument. Only intended for small test problems.
    """
    A = as_matrix(A)
    if vals.degree_bound > MAX_ORACLE_DEGREE:
        raise MittagMatError(
            f"interpolation degree {vals.degree_bound} exceeds {MAX_ORACLE_DEGREE}"
        )
    if vals.degree_bound == 0:
        raise InvalidParams("no spectrum values given")

    nodes, coef = hermite_newton_coefficients(vals)
    n = A.shape[0]
    I = np.eye(n, dtype=np.complex128)
    R = coef[-1] * I
    for c, x in zip(reversed(coef[:-1]), reversed(nodes[:-1])):
        R = (A - x * I) @ R + c * I
    return R


# }}}
