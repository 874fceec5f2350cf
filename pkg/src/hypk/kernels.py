"""Hitting densities (Poisson kernels) for H^2, H^n, the Poincare disc and S^2.

Every density is per unit of the relevant angle: ``dalpha`` for H^2, ``psi``
for the angular marginal in H^n, ``dtheta`` for the disc and ``dphi`` on the
sphere.  Scalar functions broadcast over numpy arrays.

Closed forms are evaluated through half-angle factorisations, e.g.

    cosh(eta) cosh(eta_bar) - 1 - sinh(eta) sinh(eta_bar) cos(d)
        = 2 sinh^2((eta - eta_bar)/2) + 2 sinh(eta) sinh(eta_bar) sin^2(d/2),

which avoid the cancellation of the textbook forms near the pole of the
kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from hypk.errors import ConvergenceError, DomainError
from hypk.specialfn import (
    DEFAULT_CONTROL,
    SeriesControl,
    gauss_2f1,
    log_gamma,
    surface_ratio,
)

__all__ = [
    "KernelEvaluation",
    "poisson_h2",
    "poisson_h2_series",
    "poisson_h2_boundary",
    "cauchy_hitting_density",
    "poisson_h2_cartesian",
    "poisson_hn",
    "poisson_hn_infinite",
    "euclidean_poisson_nd",
    "cauchy_type_hn",
    "poisson_d2",
    "poisson_d2_boundary",
    "poisson_sphere",
    "sphere_kernel_expression",
]

_INV_2PI = 1.0 / (2.0 * math.pi)
# Beyond this radius cosh overflows soon; switch to tanh(eta/2) ratios.
_OVERFLOW_ETA = 300.0


@dataclass(frozen=True)
class KernelEvaluation:
    """A series-evaluated density.

    Attributes
    ----------
    density : float or ndarray
        Density per unit angle.
    terms_used : int
        Number of series terms summed (the largest over an array input).
    truncation_error_bound : float or ndarray
        Rigorous bound on the omitted tail.
    """

    density: float | np.ndarray
    terms_used: int
    truncation_error_bound: float | np.ndarray


def _out(v):
    v = np.asarray(v)
    return float(v) if v.ndim == 0 else v


def _check_order(inner, outer, what):
    inner = np.asarray(inner, dtype=float)
    outer = np.asarray(outer, dtype=float)
    if np.any(inner < 0) or np.any(~(inner < outer)):
        raise DomainError(f"{what}: need 0 <= start < boundary radius")
    return inner, outer


# --------------------------------------------------------------------------
# H^2 and the disc


def poisson_h2(eta, dalpha, eta_bar):
    """Hitting density of the circle of radius ``eta_bar`` from radius ``eta``.

    ``(1/2pi) (cosh eta_bar - cosh eta) /
    (cosh eta cosh eta_bar - 1 - sinh eta sinh eta_bar cos dalpha)``
    """
    eta, eta_bar = _check_order(eta, eta_bar, "poisson_h2")
    d = np.asarray(dalpha, dtype=float)
    if np.any(eta_bar > _OVERFLOW_ETA):
        return _out(_poisson_h2_log(eta, d, eta_bar))
    num = 2.0 * np.sinh(0.5 * (eta_bar + eta)) * np.sinh(0.5 * (eta_bar - eta))
    den = 2.0 * (np.sinh(0.5 * (eta - eta_bar)) ** 2 + np.sinh(eta) * np.sinh(eta_bar) * np.sin(0.5 * d) ** 2)
    return _out(_INV_2PI * num / den)


def _log_sinh(x):
    x = np.asarray(x, dtype=float)
    big = x > 20.0
    safe = np.where(big, 1.0, x)
    return np.where(big, x - math.log(2.0) + np.log1p(-np.exp(-2.0 * x)), np.log(np.sinh(safe)))


def _poisson_h2_log(eta, d, eta_bar):
    # The closed form divided through by s = sinh((eta_bar + eta)/2), with
    # both denominator terms combined in log space.  Once tanh(eta/2) rounds
    # to 1 the disc form degenerates to 0/0; this one stays finite.
    ls = _log_sinh(0.5 * (eta_bar + eta))
    ld = _log_sinh(0.5 * (eta_bar - eta))
    with np.errstate(divide="ignore"):
        lsin2 = 2.0 * np.log(np.abs(np.sin(0.5 * d)))
    # sinh(eta) sinh(eta_bar) / s^2 lies in [0, 1]; eta = 0 makes it vanish
    pos = eta > 0
    lprod = np.where(pos, _log_sinh(np.where(pos, eta, 1.0)), -np.inf) + _log_sinh(eta_bar) - 2.0 * ls
    lden = np.logaddexp(2.0 * ld - ls, ls + lprod + lsin2)
    return _INV_2PI * np.exp(ld - lden)


def poisson_h2_series(eta: float, dalpha, eta_bar: float, M: int) -> KernelEvaluation:
    """Fourier partial sum ``1/2pi + (1/pi) sum_{m<=M} cos(m d) q^m``.

    ``q = tanh(eta/2) / tanh(eta_bar/2)``; the omitted tail is at most
    ``q^(M+1) / (pi (1 - q))``.
    """
    eta, eta_bar = _check_order(eta, eta_bar, "poisson_h2_series")
    if int(M) != M or M < 0:
        raise DomainError(f"term count must be a non-negative integer, got {M!r}")
    q = float(np.tanh(0.5 * eta) / np.tanh(0.5 * eta_bar))
    d = np.asarray(dalpha, dtype=float)
    m = np.arange(1, int(M) + 1)
    qm = q ** m
    total = _INV_2PI + np.tensordot(qm, np.cos(np.multiply.outer(m, d)), axes=1) / math.pi
    bound = q ** (M + 1) / (math.pi * (1.0 - q))
    return KernelEvaluation(_out(total), int(M) + 1, bound)


def poisson_h2_boundary(eta, dalpha):
    """Hitting density of the ideal boundary: ``(1/2pi) / (cosh eta - sinh eta cos d)``."""
    eta = np.asarray(eta, dtype=float)
    if np.any(eta < 0):
        raise DomainError("poisson_h2_boundary: eta must be >= 0")
    d = np.asarray(dalpha, dtype=float)
    with np.errstate(over="ignore"):
        den = np.exp(-eta) + 2.0 * np.sinh(eta) * np.sin(0.5 * d) ** 2
    return _out(_INV_2PI / den)


def cauchy_hitting_density(x, y, x_bar):
    """Density on the real line of the first hit of ``y = 0`` from ``(x, y)``.

    This is the Cauchy law with location ``x`` and scale ``y``,
    ``(1/pi) y / ((x_bar - x)^2 + y^2)``.  Pushed through the boundary map
    ``x_bar = cos(a) / (1 - sin(a))`` it coincides with
    :func:`poisson_h2_boundary`.
    """
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0):
        raise DomainError("cauchy_hitting_density: y must be positive")
    u = np.asarray(x_bar, dtype=float) - np.asarray(x, dtype=float)
    return _out(y / (math.pi * (u * u + y * y)))


def poisson_h2_cartesian(x, y, x_bar, y_bar):
    """Hitting density, per unit boundary angle, in half-plane coordinates.

    ``(1/2pi) [(x_bar^2 + y_bar^2) y - (x^2 + y^2) y_bar + y - y_bar] /
    ((x - x_bar)^2 + (y - y_bar)^2)``

    ``(x_bar, y_bar)`` lies on the hyperbolic circle about ``O`` being hit;
    ``y_bar = 0`` is the ideal boundary, where the density becomes
    ``(1/2pi) (1 + x_bar^2) y / ((x - x_bar)^2 + y^2)``.
    """
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    xb, yb = np.asarray(x_bar, dtype=float), np.asarray(y_bar, dtype=float)
    if np.any(y <= 0) or np.any(yb < 0):
        raise DomainError("poisson_h2_cartesian: need y > 0 and y_bar >= 0")
    den = (x - xb) ** 2 + (y - yb) ** 2
    if np.any(den == 0):
        raise DomainError("poisson_h2_cartesian: start point lies on the target point")
    num = (xb * xb + yb * yb) * y - (x * x + y * y) * yb + y - yb
    return _out(_INV_2PI * num / den)


def poisson_d2(r, dtheta, r_bar, _strict=True):
    """Disc kernel ``(1/2pi) (r_bar^2 - r^2) / (r_bar^2 + r^2 - 2 r r_bar cos d)``."""
    r = np.asarray(r, dtype=float)
    r_bar = np.asarray(r_bar, dtype=float)
    if _strict:
        r, r_bar = _check_order(r, r_bar, "poisson_d2")
        if np.any(r_bar >= 1):
            raise DomainError("poisson_d2: need r_bar < 1")
    d = np.asarray(dtheta, dtype=float)
    num = (r_bar - r) * (r_bar + r)
    den = (r_bar - r) ** 2 + 4.0 * r * r_bar * np.sin(0.5 * d) ** 2
    return _out(_INV_2PI * num / den)


def poisson_d2_boundary(r, dtheta):
    """Disc boundary kernel ``(1/2pi) (1 - r^2) / (1 + r^2 - 2 r cos d)``."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0) or np.any(r >= 1):
        raise DomainError("poisson_d2_boundary: need 0 <= r < 1")
    d = np.asarray(dtheta, dtype=float)
    num = (1.0 - r) * (1.0 + r)
    den = (1.0 - r) ** 2 + 4.0 * r * np.sin(0.5 * d) ** 2
    return _out(_INV_2PI * num / den)


# --------------------------------------------------------------------------
# H^n


def _f_at_one_closed(k: int, n: int) -> float:
    # F(k, 1 - n/2; k + n/2; 1), used only inside truncation bounds.
    return math.exp(log_gamma(k + 0.5 * n) + log_gamma(n - 1.0) - log_gamma(0.5 * n) - log_gamma(k + n - 1.0))


def _tail_weight(k: int, n: int, q: float) -> float:
    # Upper bound for term k of the series at cos(psi) = 1, with the ratio of
    # hypergeometric factors bounded by 1 / F(k, .; .; 1): every F in the
    # family decreases on [0, 1] from 1 to F(.; 1) > 0.
    lam2 = n - 2.0
    if q == 0.0:
        return 0.0
    log_c1 = log_gamma(k + lam2) - log_gamma(k + 1.0) - log_gamma(lam2)
    return (2.0 * k / lam2 + 1.0) * math.exp(k * math.log(q) + log_c1) / _f_at_one_closed(k, n)


def _tail_ratio(k: int, n: int, q: float) -> float:
    # weight(k + 1) / weight(k); decreases in k towards q
    return ((2.0 * k + n) / (2.0 * k + n - 2.0)) * ((k + n - 2.0) / (k + 1.0)) * ((k + n - 1.0) / (k + 0.5 * n)) * q


def _series_length(n: int, q: float, ctrl: SeriesControl) -> tuple[int, float]:
    # Smallest K whose tail bound (at cos psi = 1, before the angular weight)
    # is <= tol.  An absolute test keeps K independent of psi.
    if q == 0.0:
        return 1, 0.0
    for k in range(1, ctrl.max_terms):
        rho = _tail_ratio(k, n, q)
        if rho < 1.0:
            tail = _tail_weight(k, n, q) / (1.0 - rho)
            if tail <= ctrl.tol:
                return k, tail
    raise ConvergenceError(f"H^{n} kernel series needs more than {ctrl.max_terms} terms (q = {q})", terms=ctrl.max_terms)


@lru_cache(maxsize=512)
def _radial_coefficients(n: int, t: float, t_bar: float | None, tol: float, max_terms: int):
    # (2k/(n-2) + 1) q^k F_k(t^2) / F_k(t_bar^2) for k < K; t_bar None means 1.
    ctrl = SeriesControl(tol, max_terms)
    q = t if t_bar is None else t / t_bar
    K, tail = _series_length(n, q, ctrl)
    b, c0 = 1.0 - 0.5 * n, 0.5 * n
    coef = np.empty(K)
    coef[0] = 1.0
    qk = 1.0
    for k in range(1, K):
        qk *= q
        num = gauss_2f1(k, b, k + c0, t * t, ctrl)
        den = gauss_2f1(k, b, k + c0, 1.0 if t_bar is None else t_bar * t_bar, ctrl)
        coef[k] = (2.0 * k / (n - 2.0) + 1.0) * qk * num / den
    coef.flags.writeable = False
    return coef, tail


def _poisson_hn_series(n, t, t_bar, psi, ctrl, what):
    if int(n) != n or n < 3:
        raise DomainError(f"{what}: dimension must be an integer >= 3, got {n!r}")
    n = int(n)
    psi = np.asarray(psi, dtype=float)
    if np.any(psi < 0) or np.any(psi > math.pi):
        raise DomainError(f"{what}: psi must lie in [0, pi]")
    coef, tail = _radial_coefficients(n, t, t_bar, ctrl.tol, ctrl.max_terms)
    lam = 0.5 * (n - 2)
    x = np.cos(psi)
    weight = surface_ratio(n) * np.sin(psi) ** (n - 2)

    total = coef[0] * np.ones_like(x)
    c_prev, c_cur = np.ones_like(x), 2.0 * lam * x
    for k in range(1, coef.size):
        if k >= 2:
            c_prev, c_cur = c_cur, (2.0 * (k + lam - 1.0) * x * c_cur - (k + 2.0 * lam - 2.0) * c_prev) / k
        total = total + coef[k] * c_cur
    return KernelEvaluation(_out(weight * total), int(coef.size), _out(weight * tail))


def poisson_hn(n: int, eta: float, eta_bar: float, psi, ctrl: SeriesControl = DEFAULT_CONTROL) -> KernelEvaluation:
    """Angular marginal of the hitting law of the sphere of radius ``eta_bar`` in H^n.

    ``(O_(n-1)/O_n) sum_k (2k/(n-2) + 1) [t^k F_k(t^2)] / [tb^k F_k(tb^2)]
    C_k^((n-2)/2)(cos psi) sin^(n-2)(psi)``

    with ``t = tanh(eta/2)``, ``tb = tanh(eta_bar/2)`` and
    ``F_k(x) = F(k, 1 - n/2; k + n/2; x)``.  ``psi`` is the angle at ``O``
    between the start point and the exit point.

    The series stops once a rigorous bound on the remaining terms, times the
    angular weight, falls below ``ctrl.tol``; the bound accounts for
    ``|C_k(cos psi)| <= C_k(1)`` and for the hypergeometric ratio.  Radial
    coefficients are cached per ``(n, eta, eta_bar, ctrl)``.
    """
    eta_f, eta_bar_f = float(eta), float(eta_bar)
    if not (0.0 <= eta_f < eta_bar_f) or not math.isfinite(eta_bar_f):
        raise DomainError("poisson_hn: need 0 <= eta < eta_bar < inf")
    return _poisson_hn_series(n, math.tanh(0.5 * eta_f), math.tanh(0.5 * eta_bar_f), psi, ctrl, "poisson_hn")


def poisson_hn_infinite(n: int, eta: float, psi, ctrl: SeriesControl = DEFAULT_CONTROL) -> KernelEvaluation:
    """Limit of :func:`poisson_hn` as ``eta_bar`` goes to infinity.

    The denominators become ``F_k(1)``, evaluated by the hypergeometric
    series at ``x = 1``.
    """
    eta_f = float(eta)
    if not (eta_f >= 0.0) or not math.isfinite(eta_f):
        raise DomainError("poisson_hn_infinite: need finite eta >= 0")
    return _poisson_hn_series(n, math.tanh(0.5 * eta_f), None, psi, ctrl, "poisson_hn_infinite")


def euclidean_poisson_nd(n: int, rho, psi):
    """Angular marginal of the Euclidean ball kernel in R^n.

    ``(O_(n-1)/O_n) (1 - rho^2) / (1 - 2 rho cos psi + rho^2)^(n/2) sin^(n-2) psi``
    """
    if int(n) != n or n < 2:
        raise DomainError(f"euclidean_poisson_nd: dimension must be an integer >= 2, got {n!r}")
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0) or np.any(rho >= 1):
        raise DomainError("euclidean_poisson_nd: need 0 <= rho < 1")
    psi = np.asarray(psi, dtype=float)
    den = (1.0 - rho) ** 2 + 4.0 * rho * np.sin(0.5 * psi) ** 2
    return _out(surface_ratio(int(n)) * (1.0 - rho) * (1.0 + rho) / den ** (0.5 * n) * np.sin(psi) ** (n - 2))


def cauchy_type_hn(n: int, x, y):
    """Limit hitting density on ``y = 0`` of H^n from ``(x, y)``, centred at ``x = 0``.

    ``Gamma(n-1) / (pi^((n-1)/2) Gamma((n-1)/2)) (y / (y^2 + |x|^2))^(n-1)``;
    ``x`` has ``n - 1`` components along its last axis.
    """
    if int(n) != n or n < 2:
        raise DomainError(f"cauchy_type_hn: dimension must be an integer >= 2, got {n!r}")
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0):
        raise DomainError("cauchy_type_hn: y must be positive")
    x = np.asarray(x, dtype=float)
    if n == 2 and (x.ndim == 0 or x.shape[-1] != 1):
        r2 = x * x
    elif x.ndim >= 1 and x.shape[-1] == n - 1:
        r2 = np.sum(x * x, axis=-1)
    else:
        raise DomainError(f"cauchy_type_hn: x needs {n - 1} components on its last axis")
    const = math.exp(log_gamma(n - 1.0) - 0.5 * (n - 1) * math.log(math.pi) - log_gamma(0.5 * (n - 1)))
    return _out(const * (y / (y * y + r2)) ** (n - 1))


# --------------------------------------------------------------------------
# S^2


def poisson_sphere(theta, dphi, theta_bar):
    """Hitting density of the colatitude circle ``theta_bar`` from colatitude ``theta``.

    ``(1/2pi) (cos theta - cos theta_bar) /
    (1 - cos theta cos theta_bar - sin theta sin theta_bar cos dphi)``

    Requires ``0 <= theta < theta_bar < pi``: the start lies in the polar cap
    bounded by the target circle.
    """
    theta, theta_bar = _check_order(theta, theta_bar, "poisson_sphere")
    if np.any(theta_bar >= math.pi):
        raise DomainError("poisson_sphere: need theta_bar < pi")
    d = np.asarray(dphi, dtype=float)
    num = 2.0 * np.sin(0.5 * (theta_bar + theta)) * np.sin(0.5 * (theta_bar - theta))
    den = 2.0 * (np.sin(0.5 * (theta - theta_bar)) ** 2 + np.sin(theta) * np.sin(theta_bar) * np.sin(0.5 * d) ** 2)
    return _out(_INV_2PI * num / den)


def sphere_kernel_expression(theta, dphi, theta_bar):
    """The spherical kernel written with plain cosines, without domain checks.

    Accepts complex arguments; substituting ``theta = i eta`` and
    ``theta_bar = i eta_bar`` gives the hyperbolic kernel.
    """
    ct, cb = np.cos(theta), np.cos(theta_bar)
    return _INV_2PI * (ct - cb) / (1.0 - ct * cb - np.sin(theta) * np.sin(theta_bar) * np.cos(dphi))
