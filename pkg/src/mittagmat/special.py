r"""Scalar special functions.

This module provides the reciprocal gamma function, the complementary error
function and the three-parameter (Prabhakar) Mittag-Leffler function

.. math::

    E^{\rho}_{\alpha, \beta}(z) = \sum_{k = 0}^\infty
        \frac{(\rho)_k}{\Gamma(\alpha k + \beta)} \frac{z^k}{k!},

together with the derivative identity

.. math::

    \frac{\mathrm{d}^m}{\mathrm{d} z^m} E_{\alpha, \beta}(z)
        = m! \, E^{m + 1}_{\alpha, \beta + \alpha m}(z).

Small arguments are summed directly. Larger arguments go through numerical
inversion of the Laplace transform

.. math::

    \mathcal{L}[t^{\beta - 1} E^\rho_{\alpha, \beta}(z t^\alpha)](s)
        = \frac{s^{\alpha \rho - \beta}}{(s^\alpha - z)^\rho}

on a parabolic contour, with the contour parameters chosen by the
error-balancing rules for optimal parabolic contours.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Literal, Optional, Union

import numpy as np

from mittagmat.errors import (
    InvalidParams,
    NumericalOverflow,
    RequestedAccuracyUnreachable,
)

Scalar = Union[int, float, complex]

EPS = float(np.finfo(float).eps)
LOG_EPS = math.log(EPS)

# {{{ reciprocal gamma

# Lanczos coefficients for g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def _is_real(z: Scalar) -> bool:
    return not isinstance(z, complex) or z.imag == 0.0


def _sinpi(z: complex) -> complex:
    # shift by an even integer first so that pi * z stays accurate
    shift = 2.0 * round(z.real / 2.0)
    return cmath.sin(math.pi * (z - shift))


def _log_gamma_lanczos(z: complex) -> complex:
    """Logarithm of :math:`\\Gamma(z)` for :math:`\\Re z \\ge 1/2`."""
    z = z - 1.0
    x = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        x += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    # (z + 1/2) log t - t, grouped to avoid cancelling two large terms
    return (z + 0.5) * (cmath.log(t) - 1.0) + (_LOG_SQRT_2PI - _LANCZOS_G) + cmath.log(x)


# B_{2k} / (2k (2k - 1)) for k = 1, ..., 10
_STIRLING_COEF = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
)
# Stirling's series is used for |z| at least this
_STIRLING_RADIUS = 10.0


def _log_gamma_stirling(z: complex) -> complex:
    r"""Logarithm of :math:`\Gamma(z)` for :math:`|z| \ge 10`, :math:`\Re z > 0`."""
    w = 1.0 / z
    w2 = w * w
    series = 0.0j
    for c in reversed(_STIRLING_COEF):
        series = series * w2 + c
    return (z - 0.5) * cmath.log(z) - z + _LOG_SQRT_2PI + series * w


def _log_gamma(z: complex) -> complex:
    if abs(z) >= _STIRLING_RADIUS:
        return _log_gamma_stirling(z)
    return _log_gamma_lanczos(z)


def _rgamma_real(x: float) -> float:
    if x <= 0.0 and x == math.floor(x):
        return 0.0

    if x > 171.0:
        # Gamma overflows while 1/Gamma underflows gracefully
        return math.exp(-math.lgamma(x))

    try:
        return 1.0 / math.gamma(x)
    except (OverflowError, ZeroDivisionError):
        pass

    # very negative non-integer x: 1/Gamma(x) = sin(pi x) Gamma(1 - x) / pi
    log_mag = math.lgamma(1.0 - x) + math.log(abs(math.sin(math.pi * (x % 2.0))) / math.pi)
    if log_mag > 709.0:
        raise NumericalOverflow(f"1/Gamma({x}) overflows")
    return math.copysign(math.exp(log_mag), math.sin(math.pi * (x % 2.0)))


def rgamma(z: Scalar) -> Scalar:
    r"""Reciprocal gamma function :math:`1 / \Gamma(z)`.

    The reciprocal is entire, so this returns exact zeros at the poles
    :math:`z = 0, -1, -2, \dots` of :math:`\Gamma`. Real arguments return a
    :class:`float`, complex ones a :class:`complex`.
    """
    if _is_real(z):
        return _rgamma_real(float(z.real if isinstance(z, complex) else z))

    z = complex(z)
    if z.real < 0.5:
        # reflection: 1/Gamma(z) = sin(pi z) Gamma(1 - z) / pi
        lg = _log_gamma(1.0 - z)
        if lg.real > 709.0:
            raise NumericalOverflow(f"1/Gamma({z}) overflows")
        return _sinpi(z) * cmath.exp(lg) / math.pi

    lg = _log_gamma(z)
    if -lg.real > 709.0:
        raise NumericalOverflow(f"1/Gamma({z}) overflows")
    return cmath.exp(-lg)


# }}}


# {{{ complementary error function

_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)
_ONE_OVER_SQRT_PI = 1.0 / math.sqrt(math.pi)


def _erf_maclaurin(z: complex) -> complex:
    # erf(z) = 2/sqrt(pi) sum (-1)^n z^(2n+1) / (n! (2n+1)); fine off the real axis
    z2 = z * z
    term = z
    re = [z.real]
    im = [z.imag]
    for n in range(1, 2000):
        term *= -z2 / n
        t = term / (2 * n + 1)
        re.append(t.real)
        im.append(t.imag)
        if abs(t) <= 1.0e-17 * abs(complex(math.fsum(re), math.fsum(im))):
            break
    return _TWO_OVER_SQRT_PI * complex(math.fsum(re), math.fsum(im))


def _erf_kummer(z: complex) -> complex:
    # erf(z) = 2/sqrt(pi) exp(-z^2) sum (2 z^2)^n z / (2n+1)!!; fine near the real axis
    z2 = 2.0 * z * z
    term = z
    re = [z.real]
    im = [z.imag]
    for n in range(1, 2000):
        term *= z2 / (2 * n + 1)
        re.append(term.real)
        im.append(term.imag)
        if abs(term) <= 1.0e-17 * abs(complex(math.fsum(re), math.fsum(im))):
            break
    return _TWO_OVER_SQRT_PI * cmath.exp(-z * z) * complex(math.fsum(re), math.fsum(im))


def _erfc_continued_fraction(z: complex, maxiter: int = 20000) -> complex:
    # erfc(z) = exp(-z^2)/sqrt(pi) / (z + (1/2)/(z + 1/(z + (3/2)/(z + ...)))), Re z > 0
    tiny = 1.0e-300
    f = z
    c = z
    d = 0.0
    for k in range(1, maxiter):
        a = 0.5 * k
        d = z + a * d
        d = tiny if d == 0 else d
        c = z + a / c
        c = tiny if c == 0 else c
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 0.5 * EPS:
            break
    return cmath.exp(-z * z) * _ONE_OVER_SQRT_PI / f


def erfc(z: Scalar) -> Scalar:
    r"""Complementary error function
    :math:`\operatorname{erfc}(z) = \frac{2}{\sqrt{\pi}} \int_z^\infty e^{-t^2} \, \mathrm{d}t`.

    Real arguments are delegated to :func:`math.erfc`. For complex arguments
    the right half-plane is covered by power series for :math:`|z| < 2` (or
    close to the imaginary axis) and by the Laplace continued fraction
    otherwise; the left half-plane follows from
    :math:`\operatorname{erfc}(-z) = 2 - \operatorname{erfc}(z)`.
    """
    if _is_real(z):
        return math.erfc(float(z.real if isinstance(z, complex) else z))

    z = complex(z)
    if z.real < 0.0:
        return 2.0 - erfc(-z)

    x, y = z.real, abs(z.imag)
    if abs(z) < 2.0 or x < 1.0:
        if y > x:
            return 1.0 - _erf_maclaurin(z)
        return 1.0 - _erf_kummer(z)

    return _erfc_continued_fraction(z)


# }}}


# {{{ parameters


@dataclass(frozen=True)
class MLParams:
    r"""Parameters :math:`(\alpha, \beta, \rho)` of
    :math:`E^\rho_{\alpha, \beta}`.

    Only real positive :math:`\alpha` is supported.
    """

    alpha: float
    beta: Scalar = 1.0
    rho: Scalar = 1.0

    def __post_init__(self) -> None:
        if isinstance(self.alpha, complex) or not math.isfinite(self.alpha):
            raise InvalidParams(f"alpha must be a finite real number: {self.alpha!r}")
        if self.alpha <= 0:
            raise InvalidParams(f"alpha must be positive: {self.alpha}")
        for name in ("beta", "rho"):
            value = complex(getattr(self, name))
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                raise InvalidParams(f"{name} must be finite: {value}")


@dataclass(frozen=True)
class EvalConfig:
    """Accuracy and strategy controls for :func:`ml_scalar`."""

    #: Target accuracy, measured as ``|error| / (1 + |E|)``.
    target_accuracy: float = 1.0e-13
    #: Arguments with ``|z|`` at most this are always summed as a series.
    series_radius: float = 1.0
    #: Maximum number of series terms.
    max_series_terms: int = 500
    #: Cap on the half-number of contour nodes. When the optimal contour needs
    #: more, the internal tolerance is relaxed (and accuracy reported).
    contour_nodes: Optional[int] = None

    def __post_init__(self) -> None:
        if not self.target_accuracy > 0:
            raise InvalidParams("target_accuracy must be positive")
        if self.max_series_terms < 1:
            raise InvalidParams("max_series_terms must be at least 1")
        if self.series_radius < 0:
            raise InvalidParams("series_radius must be non-negative")
        if self.contour_nodes is not None and self.contour_nodes < 1:
            raise InvalidParams("contour_nodes must be positive")


DEFAULT_CONFIG = EvalConfig()

# }}}


# {{{ power series


def _nonpositive_integer(x: Scalar) -> bool:
    x = complex(x)
    return x.imag == 0.0 and x.real <= 0.0 and x.real == math.floor(x.real)


def _positive_integer(x: Scalar) -> bool:
    x = complex(x)
    return x.imag == 0.0 and x.real >= 1.0 and x.real == math.floor(x.real)


def ml_series(
    z: Scalar, p: MLParams, max_terms: int = 500
) -> tuple[Scalar, float, bool]:
    """Sum the power series of :math:`E^\\rho_{\\alpha, \\beta}(z)`.

    :returns: a tuple ``(value, error_estimate, converged)``, where the error
        estimate is absolute and accounts for both truncation and rounding.
    """
    alpha, beta, rho = p.alpha, p.beta, p.rho
    real = _is_real(z) and _is_real(beta) and _is_real(rho)
    if real:
        z, beta, rho = complex(z).real, complex(beta).real, complex(rho).real

    # index after which consecutive term ratios decrease monotonically
    k_mono = max(
        math.ceil((2.0 - complex(beta).real) / alpha),
        math.ceil(abs(complex(rho))) + 1,
        1,
    )

    re: list[float] = []
    im: list[float] = []
    abs_sum = 0.0
    poch = 1.0 if real else complex(1.0)  # (rho)_k / k!
    zk = 1.0 if real else complex(1.0)
    prev = 0.0
    converged = False
    tail = math.inf
    for k in range(max_terms):
        t = poch * zk * rgamma(alpha * k + beta)
        at = abs(t)
        abs_sum += at
        if real:
            re.append(t)
        else:
            re.append(t.real)
            im.append(t.imag)

        poch = poch * (rho + k) / (k + 1)
        if poch == 0:
            # rho is a non-positive integer: the series is a polynomial
            converged, tail = True, 0.0
            break
        zk = zk * z
        if zk == 0:
            converged, tail = True, 0.0
            break

        if k >= k_mono and prev > 0:
            ratio = at / prev
            if ratio < 1.0:
                tail = at * ratio / (1.0 - ratio)
                s = abs(complex(math.fsum(re), math.fsum(im) if im else 0.0))
                if tail <= 0.5 * EPS * max(s, 1.0e-300):
                    converged = True
                    break
        prev = at

    value: Scalar = math.fsum(re) if real else complex(math.fsum(re), math.fsum(im))
    rounding = 8.0 * EPS * abs_sum
    if not math.isfinite(abs_sum):
        raise NumericalOverflow(f"series overflow at z = {z}")
    return value, rounding + (tail if math.isfinite(tail) else abs_sum), converged


# }}}


# {{{ optimal parabolic contour


def _optimal_param_rb(
    t: float, phi_j: float, phi_j1: float, pj: float, qj: float, log_eps: float
) -> tuple[float, float, float]:
    """Contour parameters for a region bounded by two singularities."""
    fac = 1.01
    f_max = math.exp(log_eps - LOG_EPS)

    sq_phi_j = math.sqrt(phi_j)
    threshold = 2.0 * math.sqrt((log_eps - LOG_EPS) / t)
    sq_phi_j1 = min(math.sqrt(phi_j1), threshold - sq_phi_j)

    f_bar = 1.0
    if pj < 1.0e-14 and qj < 1.0e-14:
        sq_phibar_j, sq_phibar_j1 = sq_phi_j, sq_phi_j1
        admissible = True
    elif pj < 1.0e-14:
        sq_phibar_j = sq_phi_j
        f_min = fac * (sq_phi_j / (sq_phi_j1 - sq_phi_j)) ** qj if sq_phi_j > 0 else fac
        admissible = f_min < f_max
        if admissible:
            f_bar = f_min + f_min / f_max * (f_max - f_min)
            fq = f_bar ** (-1.0 / qj)
            sq_phibar_j1 = (2.0 * sq_phi_j1 - fq * sq_phi_j) / (2.0 + fq)
    elif qj < 1.0e-14:
        sq_phibar_j1 = sq_phi_j1
        f_min = fac * (sq_phi_j1 / (sq_phi_j1 - sq_phi_j)) ** pj
        admissible = f_min < f_max
        if admissible:
            f_bar = f_min + f_min / f_max * (f_max - f_min)
            fp = f_bar ** (-1.0 / pj)
            sq_phibar_j = (2.0 * sq_phi_j + fp * sq_phi_j1) / (2.0 - fp)
    else:
        f_min = fac * (sq_phi_j + sq_phi_j1) / (sq_phi_j1 - sq_phi_j) ** max(pj, qj)
        admissible = f_min < f_max
        if admissible:
            f_min = max(f_min, 1.5)
            f_bar = f_min + f_min / f_max * (f_max - f_min)
            fp = f_bar ** (-1.0 / pj)
            fq = f_bar ** (-1.0 / qj)
            w = -phi_j1 * t / log_eps
            den = 2.0 + w - (1.0 + w) * fp + fq
            sq_phibar_j = ((2.0 + w + fq) * sq_phi_j + fp * sq_phi_j1) / den
            sq_phibar_j1 = (
                -(1.0 + w) * fq * sq_phi_j + (2.0 + w - (1.0 + w) * fp) * sq_phi_j1
            ) / den

    if not admissible:
        return 0.0, 0.0, math.inf

    log_eps = log_eps - math.log(f_bar)
    w = -(sq_phibar_j1**2) * t / log_eps
    mu = (((1.0 + w) * sq_phibar_j + sq_phibar_j1) / (2.0 + w)) ** 2
    h = (
        -2.0 * math.pi / log_eps
        * (sq_phibar_j1 - sq_phibar_j)
        / ((1.0 + w) * sq_phibar_j + sq_phibar_j1)
    )
    if not (mu > 0 and h > 0):
        return 0.0, 0.0, math.inf
    n = math.ceil(math.sqrt(1.0 - log_eps / t / mu) / h)
    return mu, h, n


def _optimal_param_ru(
    t: float, phi_j: float, pj: float, log_eps: float
) -> tuple[float, float, float]:
    """Contour parameters for the unbounded region right of all singularities."""
    sq_phi_j = math.sqrt(phi_j)
    phibar_j = 1.01 * phi_j if phi_j > 0 else 0.01
    sq_phibar_j = math.sqrt(phibar_j)

    f_min, f_max, f_tar = 1.0, 10.0, 5.0
    for _ in range(100):
        phi_t = phibar_j * t
        log_eps_phi_t = log_eps / phi_t
        n = math.ceil(phi_t / math.pi * (1.0 - 1.5 * log_eps_phi_t + math.sqrt(1.0 - 2.0 * log_eps_phi_t)))
        a = math.pi * n / phi_t
        sq_mu = sq_phibar_j * abs(4.0 - a) / abs(7.0 - math.sqrt(1.0 + 12.0 * a))
        fbar = ((sq_phibar_j - sq_phi_j) / sq_mu) ** (-pj)
        if pj < 1.0e-14 or f_min < fbar < f_max:
            break
        sq_phibar_j = f_tar ** (-1.0 / pj) * sq_mu + sq_phi_j
        phibar_j = sq_phibar_j**2

    mu = sq_mu**2
    h = (-3.0 * a - 2.0 + 2.0 * math.sqrt(1.0 + 12.0 * a)) / (4.0 - a) / n

    # keep round-off under control
    threshold = (log_eps - LOG_EPS) / t
    if mu > threshold:
        q = 0.0 if abs(pj) < 1.0e-14 else f_tar ** (-1.0 / pj) * math.sqrt(mu)
        phibar_j = (q + math.sqrt(phi_j)) ** 2
        if phibar_j >= threshold:
            # clearance measured against the capped contour instead
            q = 0.0 if abs(pj) < 1.0e-14 else f_tar ** (-1.0 / pj) * math.sqrt(threshold)
            phibar_j = (q + math.sqrt(phi_j)) ** 2
        if phibar_j < threshold:
            w = math.sqrt(LOG_EPS / (LOG_EPS - log_eps))
            u = math.sqrt(-phibar_j * t / LOG_EPS)
            mu = threshold
            n = math.ceil(w * log_eps / 2.0 / math.pi / (u * w - 1.0))
            h = math.sqrt(LOG_EPS / (LOG_EPS - log_eps)) / n
        else:
            return 0.0, 0.0, math.inf

    return mu, h, n


def _pole_residues(
    poles: list[complex], alpha: float, beta: Scalar, gamma: int
) -> complex:
    r"""Sum of residues of :math:`e^s s^{\alpha\gamma - \beta} / (s^\alpha - z)^\gamma`.

    For integer :math:`\gamma = m + 1` the residue equals
    :math:`\frac{1}{m!} D^m [\alpha^{-1} s^{1 - \beta_0} e^s]` with
    :math:`D = \alpha^{-1} s^{1 - \alpha} \, \mathrm{d}/\mathrm{d}s` and
    :math:`\beta_0 = \beta - \alpha m`, since each pole moves with
    :math:`z = s^\alpha`.
    """
    if not poles:
        return 0.0

    m = gamma - 1
    beta0 = complex(beta) - alpha * m

    # coefficients of s^(base + j) e^s, base = 1 - beta0 - k alpha after k steps
    coef = [1.0 / alpha]
    base = 1.0 - beta0
    for _ in range(m):
        new = [0.0] * (len(coef) + 1)
        for j, c in enumerate(coef):
            new[j] += c * (base + j) / alpha
            new[j + 1] += c / alpha
        coef = new
        base = base - alpha
    scale = 1.0 / math.factorial(m)

    total = 0.0
    for s in poles:
        try:
            es = cmath.exp(s)
        except OverflowError as exc:
            raise NumericalOverflow(f"residue term exp({s}) overflows") from exc
        total += scale * es * sum(c * s ** (base + j) for j, c in enumerate(coef))
    return total


def ml_contour(
    z: Scalar,
    p: MLParams,
    log_eps: float,
    max_nodes: int = 200,
) -> tuple[complex, float]:
    """Evaluate :math:`E^\\rho_{\\alpha, \\beta}(z)` by Laplace transform
    inversion on an optimal parabolic contour.

    Requires either a positive integer :math:`\\rho` or no singularities of
    the transform off the origin on the principal sheet.

    :returns: a tuple ``(value, achieved_tolerance)``.
    """
    alpha, beta, gamma = p.alpha, complex(p.beta), complex(p.rho)
    lam = complex(z)
    t = 1.0

    theta = cmath.phase(lam)
    kmin = math.ceil(-alpha / 2.0 - theta / 2.0 / math.pi)
    kmax = math.floor(alpha / 2.0 - theta / 2.0 / math.pi)
    rad = abs(lam) ** (1.0 / alpha)
    s_star = [rad * cmath.exp(1j * (theta + 2.0 * k * math.pi) / alpha) for k in range(kmin, kmax + 1)]

    if s_star and not _positive_integer(gamma):
        raise InvalidParams(
            "contour evaluation with non-integer rho requires |arg z| > alpha pi"
        )
    gamma_int = int(gamma.real) if s_star else 1
    ag_b = (alpha * gamma - beta)

    phi_star = [(s.real + abs(s)) / 2.0 for s in s_star]
    order = sorted(range(len(s_star)), key=lambda i: phi_star[i])
    s_star = [s_star[i] for i in order if phi_star[i] > 1.0e-15]
    phi_star = [phi_star[i] for i in order if phi_star[i] > 1.0e-15]

    s_star = [0.0, *s_star]
    phi_star = [0.0, *phi_star]
    n_sing = len(s_star)
    strength = gamma.real if s_star else 1.0
    pstr = [max(0.0, -2.0 * (ag_b.real + 1.0)), *([strength] * (n_sing - 1))]
    qstr = [*([strength] * (n_sing - 1)), math.inf]
    phi_ext = [*phi_star, math.inf]

    admissible = [
        j for j in range(n_sing)
        if phi_ext[j] < (log_eps - LOG_EPS) / t and phi_ext[j] < phi_ext[j + 1]
    ]

    while True:
        params = {}
        for j in admissible:
            if j < n_sing - 1:
                params[j] = _optimal_param_rb(t, phi_ext[j], phi_ext[j + 1], pstr[j], qstr[j], log_eps)
            else:
                params[j] = _optimal_param_ru(t, phi_ext[j], pstr[j], log_eps)
        jbest = min(params, key=lambda j: params[j][2])
        mu, h, n = params[jbest]
        if n > max_nodes:
            log_eps += math.log(10.0)
            if log_eps >= 0:
                raise RequestedAccuracyUnreachable(
                    f"no admissible contour for z = {z}", complex("nan"), math.inf
                )
        else:
            break

    k = np.arange(-n, n + 1)
    u = h * k
    s = mu * (1j * u + 1.0) ** 2
    ds = -2.0 * mu * u + 2.0j * mu
    with np.errstate(over="ignore", invalid="ignore"):
        f = s**ag_b / (s**alpha - lam) ** gamma * ds
        integral = h * np.sum(np.exp(s * t) * f) / (2.0j * math.pi)

    residues = _pole_residues(s_star[jbest + 1:], alpha, beta, gamma_int)
    value = complex(integral + residues)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise NumericalOverflow(f"Mittag-Leffler function overflows at z = {z}")

    if lam.imag == 0.0 and beta.imag == 0.0 and gamma.imag == 0.0:
        value = complex(value.real, 0.0)

    return value, math.exp(log_eps)


# }}}


# {{{ public interface

Method = Literal["auto", "series", "contour"]


def ml_scalar(
    z: Scalar,
    p: MLParams,
    cfg: EvalConfig = DEFAULT_CONFIG,
    method: Method = "auto",
) -> complex:
    r"""Evaluate the Prabhakar function :math:`E^\rho_{\alpha, \beta}(z)`.

    With ``method="auto"`` the series is used for :math:`|z|` up to
    ``cfg.series_radius`` and the contour integral elsewhere. Non-integer
    :math:`\rho` with singularities on the principal sheet falls back to
    the series, whose accuracy is then checked.

    :raises RequestedAccuracyUnreachable: if the accuracy estimate exceeds
        ``cfg.target_accuracy`` (relative to ``1 + |E|``).
    """
    if not isinstance(p, MLParams):
        raise InvalidParams(f"expected MLParams, got {type(p).__name__}")
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InvalidParams(f"argument must be finite: {z}")

    if z == 0 or _nonpositive_integer(p.rho):
        method = "series"

    contour_ok = _positive_integer(p.rho) or abs(cmath.phase(z)) > p.alpha * math.pi
    if method == "auto":
        if abs(z) <= cfg.series_radius:
            try:
                return ml_scalar(z, p, cfg, method="series")
            except RequestedAccuracyUnreachable:
                if not contour_ok:
                    raise
            method = "contour"
        elif contour_ok:
            method = "contour"
        else:
            method = "series"

    if method == "series":
        value, err, converged = ml_series(z, p, cfg.max_series_terms)
        value = complex(value)
        achieved = err / (1.0 + abs(value))
        if not converged or achieved > cfg.target_accuracy:
            raise RequestedAccuracyUnreachable(
                f"series for E at z = {z} reached only {achieved:.3e}", value, achieved
            )
        return value

    if method == "contour":
        log_eps = math.log(max(min(cfg.target_accuracy * 1.0e-2, 1.0e-15), 10.0 * EPS))
        max_nodes = cfg.contour_nodes if cfg.contour_nodes is not None else 10000
        value, achieved = ml_contour(z, p, log_eps, max_nodes=max_nodes)
        if achieved > cfg.target_accuracy * (1.0 + 1.0e-9):
            raise RequestedAccuracyUnreachable(
                f"contour for E at z = {z} reached only {achieved:.3e}", value, achieved
            )
        return value

    raise InvalidParams(f"unknown method: {method!r}")


def mittag_leffler(
    z: Scalar, alpha: float, beta: Scalar = 1.0, cfg: EvalConfig = DEFAULT_CONFIG
) -> complex:
    """Two-parameter Mittag-Leffler function :math:`E_{\\alpha, \\beta}(z)`."""
    return ml_scalar(z, MLParams(alpha, beta, 1.0), cfg)


def ml_derivative(
    z: Scalar,
    alpha: float,
    beta: Scalar,
    m: int,
    cfg: EvalConfig = DEFAULT_CONFIG,
) -> complex:
    r"""The :math:`m`-th derivative of :math:`E_{\alpha, \beta}` at :math:`z`,
    computed as :math:`m! \, E^{m + 1}_{\alpha, \beta + \alpha m}(z)`."""
    if m < 0 or int(m) != m:
        raise InvalidParams(f"derivative order must be a non-negative integer: {m}")
    m = int(m)
    if m == 0:
        return ml_scalar(z, MLParams(alpha, beta, 1.0), cfg)
    return math.factorial(m) * ml_scalar(z, MLParams(alpha, beta + alpha * m, m + 1), cfg)


# }}}
