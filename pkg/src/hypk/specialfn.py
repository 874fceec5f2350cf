"""Gegenbauer polynomials, the Gauss hypergeometric series, log-Gamma and
unit-sphere surface areas.

The hypergeometric evaluator is a plain power series with explicit tail
bounds.  Two situations need help beyond the raw series:

* ``x == 1`` converges only algebraically.  The tail is bracketed with a
  Kummer-type telescoping estimate, so a few thousand terms reach 1e-12.
* ``x`` close to 1 with an integer ``c - a - b`` (the odd-dimensional kernel
  at large radii) converges geometrically with ratio ``x``, which may need
  millions of terms.  When ``(|a| + |b| + c - a - b)(1 - x) <= 1/2`` the
  logarithmic connection formula around ``1 - x`` is used instead, which
  then needs only a few dozen terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sc

from hypk.errors import ConvergenceError, DomainError

__all__ = [
    "SeriesControl",
    "SeriesResult",
    "DEFAULT_CONTROL",
    "gegenbauer",
    "gegenbauer_sequence",
    "gauss_2f1",
    "hyp2f1_series",
    "log_gamma",
    "gamma",
    "surface_area",
    "surface_ratio",
]


@dataclass(frozen=True)
class SeriesControl:
    """Truncation control for series evaluations.

    Parameters
    ----------
    tol : float
        Relative tolerance on the bounded tail.
    max_terms : int
        Term budget; exceeding it raises :class:`ConvergenceError`.
    """

    tol: float = 1e-12
    max_terms: int = 200_000

    def __post_init__(self):
        if not (self.tol > 0):
            raise DomainError(f"tol must be positive, got {self.tol!r}")
        if int(self.max_terms) < 1:
            raise DomainError(f"max_terms must be >= 1, got {self.max_terms!r}")


DEFAULT_CONTROL = SeriesControl()


@dataclass(frozen=True)
class SeriesResult:
    """Value of a truncated series together with its bookkeeping."""

    value: float
    terms: int
    tail_bound: float
    method: str


# --------------------------------------------------------------------------
# Gegenbauer


def gegenbauer(k: int, lam: float, x):
    """Gegenbauer polynomial ``C_k^(lam)(x)`` by the three-term recurrence.

    ``k C_k = 2 (k + lam - 1) x C_(k-1) - (k + 2 lam - 2) C_(k-2)`` with
    ``C_0 = 1`` and ``C_1 = 2 lam x``.  ``x`` may be an array.
    """
    return gegenbauer_sequence(k, lam, x)[k]


def gegenbauer_sequence(kmax: int, lam: float, x) -> np.ndarray:
    """All of ``C_0 .. C_kmax`` at ``x``; result has shape ``(kmax + 1,) + x.shape``."""
    if int(kmax) != kmax or kmax < 0:
        raise DomainError(f"degree must be a non-negative integer, got {kmax!r}")
    if not (lam > 0):
        raise DomainError(f"Gegenbauer parameter must be positive, got {lam!r}")
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise DomainError("Gegenbauer argument must lie in [-1, 1]")
    kmax = int(kmax)
    out = np.empty((kmax + 1,) + x.shape)
    out[0] = 1.0
    if kmax >= 1:
        out[1] = 2.0 * lam * x
    for k in range(2, kmax + 1):
        out[k] = (2.0 * (k + lam - 1.0) * x * out[k - 1] - (k + 2.0 * lam - 2.0) * out[k - 2]) / k
    return out


# --------------------------------------------------------------------------
# Gamma


# Lanczos coefficients for g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS = (
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
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def log_gamma(x: float) -> float:
    """``log Gamma(x)`` for ``x > 0`` by the Lanczos approximation.

    Arguments below 1/2 go through the reflection formula.
    """
    x = float(x)
    if not (x > 0) or not math.isfinite(x):
        raise DomainError(f"log_gamma needs a finite positive argument, got {x!r}")
    if x < 0.5:
        # Gamma(x) Gamma(1 - x) = pi / sin(pi x)
        return math.log(math.pi / math.sin(math.pi * x)) - log_gamma(1.0 - x)
    z = x - 1.0
    s = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        s += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * math.log(t) - t + math.log(s)


def gamma(x: float) -> float:
    """``Gamma(x) = exp(log_gamma(x))`` for ``x > 0``."""
    return math.exp(log_gamma(x))


def surface_area(n: int) -> float:
    """Surface area ``2 pi^(n/2) / Gamma(n/2)`` of the unit sphere in R^n."""
    if int(n) != n or n < 2:
        raise DomainError(f"surface_area needs an integer n >= 2, got {n!r}")
    return math.exp(math.log(2.0) + 0.5 * n * math.log(math.pi) - log_gamma(0.5 * n))


def surface_ratio(n: int) -> float:
    """``Omega_(n-1) / Omega_n``, the normaliser of the angular marginal.

    Equals ``Gamma(n/2) / (sqrt(pi) Gamma((n-1)/2))``; for ``n = 2`` the
    convention ``Omega_1 = 2`` gives ``1/pi``.
    """
    if int(n) != n or n < 2:
        raise DomainError(f"surface_ratio needs an integer n >= 2, got {n!r}")
    return math.exp(log_gamma(0.5 * n) - log_gamma(0.5 * (n - 1)) - 0.5 * math.log(math.pi))


# --------------------------------------------------------------------------
# Gauss hypergeometric function


def _is_nonpos_int(v: float) -> bool:
    return v <= 0 and float(v).is_integer()


def gauss_2f1(a: float, b: float, c: float, x: float, ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """``F(a, b; c; x)`` for ``0 <= x <= 1``.

    See :func:`hyp2f1_series` for the evaluation strategy and the errors.
    """
    return hyp2f1_series(a, b, c, x, ctrl).value


def hyp2f1_series(a: float, b: float, c: float, x: float, ctrl: SeriesControl = DEFAULT_CONTROL) -> SeriesResult:
    """Evaluate ``F(a, b; c; x)`` and report terms and tail bound.

    Parameters
    ----------
    a, b, c : float
        Parameters; ``c`` must not be a non-positive integer.
    x : float
        Argument in ``[0, 1]``.  ``x == 1`` requires ``c - a - b > 0``.
    ctrl : SeriesControl
        Tolerance and term budget.

    Returns
    -------
    SeriesResult
        ``method`` is one of ``"polynomial"``, ``"series"``,
        ``"series+kummer-tail"`` or ``"connection"``.

    Raises
    ------
    DomainError
        For invalid parameters or ``x`` outside ``[0, 1]``.
    ConvergenceError
        When the term budget runs out; carries the last partial sum.
    """
    a, b, c, x = float(a), float(b), float(c), float(x)
    if _is_nonpos_int(c):
        raise DomainError(f"c must not be a non-positive integer, got {c!r}")
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"x must lie in [0, 1], got {x!r}")
    s = c - a - b

    if _is_nonpos_int(a) or _is_nonpos_int(b):
        return _polynomial(a, b, c, x)
    if x == 0.0:
        return SeriesResult(1.0, 1, 0.0, "series")
    if x == 1.0:
        if not (s > 0):
            raise DomainError(f"F(a,b;c;1) needs c - a - b > 0, got {s!r}")
        return _series_at_one(a, b, c, ctrl)
    if float(s).is_integer() and s >= 1 and (abs(a) + abs(b) + s) * (1.0 - x) <= 0.5:
        # near 1 the direct series needs about 30 / (1 - x) terms
        return _connection_integer_s(a, b, int(s), x, ctrl)
    return _series(a, b, c, x, ctrl)


def _polynomial(a, b, c, x):
    nterms = int(-(a if _is_nonpos_int(a) and (not _is_nonpos_int(b) or a >= b) else b)) + 1
    total, t = 1.0, 1.0
    for m in range(nterms - 1):
        t *= (m + a) * (m + b) / ((m + c) * (m + 1.0)) * x
        total += t
    return SeriesResult(total, nterms, 0.0, "polynomial")


def _series(a, b, c, x, ctrl):
    # Once m exceeds m_star every ratio t_(m+1)/t_m is positive and <= x, so
    # the tail after term m is at most |t_(m+1)| / (1 - x).
    s = c - a - b
    m_star = max(0.0, -a, -b, (a * b - c) / (s + 1.0) if s > -1 else math.inf)
    total, t = 1.0, 1.0
    for m in range(ctrl.max_terms):
        t *= (m + a) * (m + b) / ((m + c) * (m + 1.0)) * x
        total += t
        if m + 1 > m_star:
            r = (m + 1 + a) * (m + 1 + b) / ((m + 1 + c) * (m + 2.0)) * x
            bound = abs(t * r) / (1.0 - x)
            if bound <= ctrl.tol * abs(total):
                return SeriesResult(total, m + 2, bound, "series")
    raise ConvergenceError(
        f"2F1({a}, {b}; {c}; {x}) did not converge in {ctrl.max_terms} terms",
        partial_sum=total,
        terms=ctrl.max_terms,
    )


def _series_at_one(a, b, c, ctrl):
    # Telescoping with D_m = m + g: D_m t_m - D_(m+1) t_(m+1) = kappa_m t_m
    # where kappa_m = s + (delta - s c) / ((m + c)(m + 1)).  With t_m of one
    # sign from M on, the tail lies between D_M t_M / kappa_hi and
    # D_M t_M / kappa_lo.
    s = c - a - b
    g = (s * c + a * b) / (s + 1.0)
    e = g * c - (1.0 + g) * a * b - s * c
    m_sign = max(0.0, -a, -b, -c)
    total, t = 0.0, 1.0
    for m in range(ctrl.max_terms):
        if m > m_sign:
            k_m = s + e / ((m + c) * (m + 1.0))
            if k_m > 0:
                k_lo, k_hi = min(k_m, s), max(k_m, s)
                lo = (m + g) * t / k_hi
                hi = (m + g) * t / k_lo
                est = total + 0.5 * (lo + hi)
                half = 0.5 * abs(hi - lo)
                if half <= ctrl.tol * abs(est):
                    return SeriesResult(est, m, half, "series+kummer-tail")
        total += t
        t *= (m + a) * (m + b) / ((m + c) * (m + 1.0))
    raise ConvergenceError(
        f"2F1({a}, {b}; {c}; 1) did not converge in {ctrl.max_terms} terms",
        partial_sum=total,
        terms=ctrl.max_terms,
    )


def _gamma_product(num, den):
    # prod Gamma(num) / prod Gamma(den) through log-Gamma, keeping signs
    sign, logv = 1.0, 0.0
    for v in num:
        sign *= sc.gammasgn(v)
        logv += sc.gammaln(v)
    for v in den:
        sign *= sc.gammasgn(v)
        logv -= sc.gammaln(v)
    return sign * math.exp(logv)


def _connection_integer_s(a, b, m, x, ctrl):
    # Expansion about x = 1 for c = a + b + m, m a positive integer
    # (Abramowitz & Stegun 15.3.11).  Both sums run in powers of 1 - x.
    w = 1.0 - x
    c = a + b + m
    finite, t = 0.0, 1.0
    for k in range(m):
        finite += t
        if k + 1 < m:
            t *= (a + k) * (b + k) / ((k + 1.0) * (1.0 - m + k)) * w
    finite *= _gamma_product((m, c), (a + m, b + m))

    pref = -((-w) ** m) * _gamma_product((c,), (a, b, m + 1.0))
    log_w = math.log(w)
    t = 1.0
    total = 0.0
    small = 0
    for k in range(ctrl.max_terms):
        bracket = log_w - sc.digamma(k + 1.0) - sc.digamma(k + m + 1.0) + sc.digamma(a + k + m) + sc.digamma(b + k + m)
        term = t * bracket
        total += term
        # two small terms in a row guard against a bracket passing near zero
        small = small + 1 if abs(term) <= 1e-2 * ctrl.tol * max(abs(total), 1e-300) else 0
        if small >= 2:
            return SeriesResult(finite + pref * total, k + 1 + m, abs(pref * term), "connection")
        t *= (a + m + k) * (b + m + k) / ((k + 1.0) * (k + m + 1.0)) * w
    raise ConvergenceError(
        f"2F1({a}, {b}; {c}; {x}) connection series did not converge",
        partial_sum=finite + pref * total,
        terms=ctrl.max_terms,
    )
