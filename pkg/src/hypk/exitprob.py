"""Exit probabilities from annuli and escape (hitting) probabilities.

For a rotationally symmetric domain the probability of reaching the inner
circle first is ``(v(outer) - v(start)) / (v(outer) - v(inner))`` for any
radial harmonic function ``v``.  In H^n the radial Laplacian is
``v'' + (n-1) coth(eta) v'`` and one may take ``v' = sinh(eta)^(1-n)``.

The module works with the decreasing function

    u_n(eta) = integral from eta to infinity of sinh(s)^(1-n) ds,

which is finite for every ``n >= 2`` (transience).  The escape probability
``P{T_eta1 < infinity}`` is then ``u_n(eta) / u_n(eta1)``.

Closed forms follow from the reduction formula for ``integral csch^p``::

    v_n(eta) = sum_k (-1)^(k+1) c_k cosh(eta) / sinh(eta)^(n-2-2k)
               [+ (-1)^((n-2)/2) (n-3)!!/(n-2)!! log tanh(eta/2), even n]

with ``c_0 = 1/(n-2)`` and ``c_k = (n-3)(n-5)...(n-2k-1) / ((n-2)(n-4)...(n-2k-2))``.
Note that :func:`c_coeff` returns the tabulated coefficients, whose ``k = 0``
entry is 1; the harmonic function needs ``1/(n-2)`` there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from hypk.errors import DomainError
from hypk.specialfn import log_gamma

__all__ = [
    "AnnulusSpec",
    "MAX_DIMENSION",
    "c_coeff",
    "radial_solution_hn",
    "escape_potential_hn",
    "exit_prob_h2",
    "hit_prob_h2",
    "exit_prob_hn",
    "hit_prob_hn",
    "exit_prob_d2",
    "hit_prob_d2",
    "exit_prob_sphere",
    "sphere_exit_expression",
    "exit_prob_euclidean",
    "hit_prob_euclidean",
]

MAX_DIMENSION = 30
_SNAP = 1e-12
# Above this radius u_n is summed from its exponential series, whose terms
# are all positive; the alternating closed form cancels badly for large n.
_SERIES_ETA = 0.5


@dataclass(frozen=True)
class AnnulusSpec:
    """Radii ``0 < inner < outer`` of an annulus (eta, r or theta)."""

    inner: float
    outer: float

    def __post_init__(self):
        if not (0.0 < self.inner < self.outer) or not math.isfinite(self.outer):
            raise DomainError(f"annulus needs 0 < inner < outer < inf, got ({self.inner}, {self.outer})")


def _check_dim(n):
    if int(n) != n or n < 2:
        raise DomainError(f"dimension must be an integer >= 2, got {n!r}")
    if n > MAX_DIMENSION:
        raise DomainError(f"dimension {n} exceeds the supported maximum {MAX_DIMENSION}")
    return int(n)


def _ordered(lo, mid, hi, names):
    lo, mid, hi = float(lo), float(mid), float(hi)
    if not (lo < hi):
        raise DomainError(f"need {names[0]} < {names[2]}, got {lo} and {hi}")
    if not (lo - _SNAP <= mid <= hi + _SNAP):
        raise DomainError(f"need {names[0]} <= {names[1]} <= {names[2]}, got {lo}, {mid}, {hi}")
    return lo, mid, hi


def _snap(value, x, inner, outer):
    # exact boundary values for starts within _SNAP of a boundary
    if abs(x - inner) < _SNAP:
        return 1.0
    if abs(x - outer) < _SNAP:
        return 0.0
    return min(1.0, max(0.0, value))


# --------------------------------------------------------------------------
# coefficients


def c_coeff(n: int, k: int) -> float:
    """Tabulated coefficient ``c(n, k)`` of the H^n exit formulas.

    ``c(n, 0) = 1`` and for ``k >= 1``
    ``c(n, k) = (n-3)(n-5)...(n-2k-1) / ((n-2)(n-4)...(n-2k-2))``, with
    ``0 <= k <= (n-3)/2`` for odd ``n`` and ``(n-4)/2`` for even ``n``.
    """
    n = _check_dim(n)
    if n < 3:
        raise DomainError("c_coeff is defined for n >= 3")
    kmax = (n - 3) // 2 if n % 2 else (n - 4) // 2
    if int(k) != k or not (0 <= k <= kmax):
        raise DomainError(f"c_coeff({n}, k): k must be an integer in [0, {kmax}], got {k!r}")
    k = int(k)
    if k == 0:
        return 1.0
    num = 1.0
    den = 1.0
    for j in range(1, k + 1):
        num *= n - 2 * j - 1
        den *= n - 2 * j
    return num / (den * (n - 2 * k - 2))


def _harmonic_coeffs(n: int) -> list[float]:
    kmax = (n - 3) // 2 if n % 2 else (n - 4) // 2
    return [1.0 / (n - 2.0)] + [c_coeff(n, k) for k in range(1, kmax + 1)]


def _odd_over_even_double_factorial(n: int) -> float:
    # (n-3)!! / (n-2)!! for even n = 2m + 2, i.e. Gamma(m + 1/2) / (sqrt(pi) m!)
    m = (n - 2) // 2
    return math.exp(log_gamma(m + 0.5) - 0.5 * math.log(math.pi) - log_gamma(m + 1.0))


# --------------------------------------------------------------------------
# radial functions


def _neg_log_tanh_half(eta):
    # -log tanh(eta/2) = log1p(2 / expm1(eta)), accurate for large eta
    return np.log1p(2.0 / np.expm1(eta))


def radial_solution_hn(n: int, eta):
    """Closed-form radial harmonic function ``v_n`` with ``v_n' = sinh^(1-n)``.

    For ``n = 2`` this is ``log tanh(eta/2)``.  ``v_n`` is increasing and, for
    even ``n``, tends to 0 at infinity.
    """
    n = _check_dim(n)
    eta = np.asarray(eta, dtype=float)
    if np.any(eta <= 0):
        raise DomainError("radial_solution_hn: eta must be positive")
    if n == 2:
        out = -_neg_log_tanh_half(eta)
    else:
        ch, sh = np.cosh(eta), np.sinh(eta)
        out = np.zeros_like(eta)
        for k, c in enumerate(_harmonic_coeffs(n)):
            out = out + (-1.0) ** (k + 1) * c * ch / sh ** (n - 2 - 2 * k)
        if n % 2 == 0:
            out = out - (-1.0) ** ((n - 2) // 2) * _odd_over_even_double_factorial(n) * _neg_log_tanh_half(eta)
    return float(out) if out.ndim == 0 else out


def _potential_closed(n: int, eta: float) -> float:
    # u_n = v_n(inf) - v_n(eta); the coth term uses coth - 1 = 2 / expm1(2 eta)
    if n == 2:
        return float(_neg_log_tanh_half(eta))
    ch, sh = math.cosh(eta), math.sinh(eta)
    coeffs = _harmonic_coeffs(n)
    total = 0.0
    for k, c in enumerate(coeffs):
        p = n - 2 - 2 * k
        g = 2.0 / math.expm1(2.0 * eta) if p == 1 else ch / sh ** p
        total -= (-1.0) ** (k + 1) * c * g
    if n % 2 == 0:
        total += (-1.0) ** ((n - 2) // 2) * _odd_over_even_double_factorial(n) * float(_neg_log_tanh_half(eta))
    return total


def _potential_series(n: int, eta: float) -> float:
    # sinh^-p = 2^p e^(-p s) sum_m binom(p+m-1, m) e^(-2 m s); integrate termwise
    p = n - 1
    q = math.exp(-2.0 * eta)
    total, coef, m = 0.0, 1.0, 0
    while True:
        term = coef * q ** m / (p + 2 * m)
        total += term
        if term <= 1e-17 * total:
            break
        coef *= (p + m) / (m + 1.0)
        m += 1
    return math.exp(p * (math.log(2.0) - eta)) * total


def escape_potential_hn(n: int, eta: float) -> float:
    """``u_n(eta)``, the integral of ``sinh^(1-n)`` from ``eta`` to infinity."""
    n = _check_dim(n)
    eta = float(eta)
    if not (eta > 0):
        raise DomainError("escape_potential_hn: eta must be positive")
    if math.isinf(eta):
        return 0.0
    if eta > _SERIES_ETA:
        return _potential_series(n, eta)
    return _potential_closed(n, eta)


# --------------------------------------------------------------------------
# H^2


def exit_prob_h2(eta: float, eta1: float, eta2: float) -> float:
    """``P{T_eta1 < T_eta2}`` in H^2 from radius ``eta``.

    ``(log tanh(eta2/2) - log tanh(eta/2)) / (log tanh(eta2/2) - log tanh(eta1/2))``
    """
    eta1, eta, eta2 = _ordered(eta1, eta, eta2, ("eta1", "eta", "eta2"))
    if eta1 <= 0:
        raise DomainError("exit_prob_h2: eta1 must be positive")
    u, u1, u2 = (float(_neg_log_tanh_half(v)) for v in (eta, eta1, eta2))
    return _snap((u - u2) / (u1 - u2), eta, eta1, eta2)


def hit_prob_h2(eta: float, eta1: float) -> float:
    """``P{T_eta1 < infinity} = log tanh(eta/2) / log tanh(eta1/2)``."""
    eta1, eta = float(eta1), float(eta)
    if not (0 < eta1) or eta < eta1 - _SNAP:
        raise DomainError("hit_prob_h2: need 0 < eta1 <= eta")
    if abs(eta - eta1) < _SNAP:
        return 1.0
    return float(_neg_log_tanh_half(eta) / _neg_log_tanh_half(eta1))


# --------------------------------------------------------------------------
# H^n


def exit_prob_hn(n: int, eta: float, eta1: float, eta2: float) -> float:
    """``P{T_eta1 < T_eta2}`` in H^n; ``n = 2`` delegates to :func:`exit_prob_h2`.

    For ``n = 3`` this is ``(coth eta2 - coth eta) / (coth eta2 - coth eta1)``.
    """
    n = _check_dim(n)
    if n == 2:
        return exit_prob_h2(eta, eta1, eta2)
    eta1, eta, eta2 = _ordered(eta1, eta, eta2, ("eta1", "eta", "eta2"))
    if eta1 <= 0:
        raise DomainError("exit_prob_hn: eta1 must be positive")
    u, u1, u2 = (escape_potential_hn(n, v) for v in (eta, eta1, eta2))
    return _snap((u - u2) / (u1 - u2), eta, eta1, eta2)


def hit_prob_hn(n: int, eta: float, eta1: float) -> float:
    """Escape-complement ``P{T_eta1 < infinity} = u_n(eta) / u_n(eta1)``.

    For ``n = 3`` this is ``(1 - coth eta) / (1 - coth eta1)``.
    """
    n = _check_dim(n)
    if n == 2:
        return hit_prob_h2(eta, eta1)
    eta1, eta = float(eta1), float(eta)
    if not (0 < eta1) or eta < eta1 - _SNAP:
        raise DomainError("hit_prob_hn: need 0 < eta1 <= eta")
    if abs(eta - eta1) < _SNAP:
        return 1.0
    return escape_potential_hn(n, eta) / escape_potential_hn(n, eta1)


# --------------------------------------------------------------------------
# Poincare disc


def exit_prob_d2(r: float, r1: float, r2: float) -> float:
    """``(log r2 - log r) / (log r2 - log r1)`` for ``0 < r1 < r < r2 < 1``."""
    r1, r, r2 = _ordered(r1, r, r2, ("r1", "r", "r2"))
    if r1 <= 0 or r2 >= 1:
        raise DomainError("exit_prob_d2: need 0 < r1 and r2 < 1")
    return _snap((math.log(r2) - math.log(r)) / (math.log(r2) - math.log(r1)), r, r1, r2)


def hit_prob_d2(r: float, r1: float) -> float:
    """``log r / log r1``, the ``r2 -> 1`` limit of :func:`exit_prob_d2`."""
    r1, r = float(r1), float(r)
    if not (0 < r1 < 1) or not (r1 - _SNAP <= r < 1):
        raise DomainError("hit_prob_d2: need 0 < r1 <= r < 1")
    if abs(r - r1) < _SNAP:
        return 1.0
    return math.log(r) / math.log(r1)


# --------------------------------------------------------------------------
# S^2


def _log_tan_half(theta):
    return np.log(np.abs(np.tan(0.5 * np.asarray(theta, dtype=float))))


def exit_prob_sphere(theta: float, theta1: float, theta2: float) -> float:
    """``P{T_theta1 < T_theta2}`` on S^2 for ``0 < theta2 < theta < theta1 < pi``.

    ``(f(theta) - f(theta2)) / (f(theta1) - f(theta2))`` with
    ``f = log|tan(theta/2)|``.
    """
    theta2, theta, theta1 = _ordered(theta2, theta, theta1, ("theta2", "theta", "theta1"))
    if theta2 <= 0 or theta1 >= math.pi:
        raise DomainError("exit_prob_sphere: need 0 < theta2 and theta1 < pi")
    f, f1, f2 = (float(_log_tan_half(v)) for v in (theta, theta1, theta2))
    # inner/outer roles are swapped relative to the hyperbolic annulus
    return _snap((f - f2) / (f1 - f2), theta, theta1, theta2)


def sphere_exit_expression(theta, theta1, theta2):
    """Sphere exit probability written with ``log((cos t - 1)/(cos t + 1))``.

    No domain checks and complex arguments allowed; ``theta = i eta``
    reproduces :func:`exit_prob_h2`.
    """
    def g(t):
        ct = np.cos(t)
        return np.log((ct - 1.0) / (ct + 1.0))

    return (g(theta) - g(theta2)) / (g(theta1) - g(theta2))


# --------------------------------------------------------------------------
# Euclidean


def exit_prob_euclidean(n: int, eta: float, eta1: float, eta2: float) -> float:
    """Euclidean annulus: log ratio for ``n = 2``, power ``2 - n`` ratio otherwise."""
    n = _check_dim(n)
    eta1, eta, eta2 = _ordered(eta1, eta, eta2, ("eta1", "eta", "eta2"))
    if eta1 <= 0:
        raise DomainError("exit_prob_euclidean: eta1 must be positive")
    if n == 2:
        val = (math.log(eta2) - math.log(eta)) / (math.log(eta2) - math.log(eta1))
    else:
        p = 2.0 - n
        val = (eta2 ** p - eta ** p) / (eta2 ** p - eta1 ** p)
    return _snap(val, eta, eta1, eta2)


def hit_prob_euclidean(n: int, eta: float, eta1: float) -> float:
    """Euclidean ``P{T_eta1 < infinity}``: 1 in the plane, ``(eta1/eta)^(n-2)`` above."""
    n = _check_dim(n)
    eta1, eta = float(eta1), float(eta)
    if not (0 < eta1) or eta < eta1 - _SNAP:
        raise DomainError("hit_prob_euclidean: need 0 < eta1 <= eta")
    if n == 2:
        return 1.0
    return min(1.0, (eta1 / eta) ** (n - 2))
