"""Quadrature, goodness-of-fit tests and binomial intervals for validation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist
from typing import Callable

import numpy as np

from hypk.errors import ConvergenceError, DomainError

__all__ = [
    "IntegrationResult",
    "GofReport",
    "integrate",
    "cdf_from_density",
    "ks_threshold",
    "ks_test",
    "chi_square_quantile",
    "merge_bins",
    "chi_square_test",
    "binomial_ci",
]


@dataclass(frozen=True)
class IntegrationResult:
    value: float
    error: float
    evaluations: int


@dataclass(frozen=True)
class GofReport:
    """Outcome of a goodness-of-fit test; ``passed`` iff ``statistic < threshold``."""

    statistic: float
    threshold: float
    n_samples: int
    passed: bool
    method: str
    dof: int | None = None


def _eval(f, x):
    y = np.asarray(f(x), dtype=float)
    if y.shape != x.shape:
        y = np.array([float(f(v)) for v in x])
    return y


def integrate(f: Callable, a: float, b: float, tol: float = 1e-12, min_level: int = 4, max_level: int = 22) -> IntegrationResult:
    """Composite Simpson rule, halving the panel width until two successive
    estimates differ by less than ``tol * max(1, |I|)``.

    ``f`` should accept numpy arrays; scalar-only callables are looped.
    The returned value is the Richardson-extrapolated estimate and ``error``
    is ``|S_2n - S_n| / 15``.

    Raises
    ------
    ConvergenceError
        When ``max_level`` halvings do not reach the tolerance; carries the
        best estimate.
    """
    a, b = float(a), float(b)
    if a == b:
        return IntegrationResult(0.0, 0.0, 0)
    n = 2 ** min_level
    x = np.linspace(a, b, n + 1)
    fx = _eval(f, x)
    if not np.all(np.isfinite(fx)):
        raise DomainError("integrand is not finite on the interval")
    evals = n + 1
    hstep = (b - a) / n
    odd_sum = fx[1:-1:2].sum()
    even_sum = fx[2:-1:2].sum()
    ends = fx[0] + fx[-1]
    prev = hstep / 3.0 * (ends + 4.0 * odd_sum + 2.0 * even_sum)
    for _ in range(min_level, max_level):
        n *= 2
        hstep *= 0.5
        xm = a + hstep * (2 * np.arange(n // 2) + 1)
        fm = _eval(f, xm)
        if not np.all(np.isfinite(fm)):
            raise DomainError("integrand is not finite on the interval")
        evals += fm.size
        even_sum += odd_sum
        odd_sum = fm.sum()
        cur = hstep / 3.0 * (ends + 4.0 * odd_sum + 2.0 * even_sum)
        diff = abs(cur - prev)
        if diff < tol * max(1.0, abs(cur)):
            return IntegrationResult(cur + (cur - prev) / 15.0, diff / 15.0, evals)
        prev = cur
    raise ConvergenceError(f"Simpson rule did not reach tol={tol} in {max_level} levels", partial_sum=prev, terms=evals)


def cdf_from_density(density: Callable, a: float, b: float, panels: int = 1 << 14) -> Callable:
    """Distribution function ``F(x) = integral_a^x density`` on ``[a, b]``.

    Panel integrals use Simpson's rule with the panel midpoint, so ``F`` is
    non-decreasing whenever the density is non-negative; values between nodes
    are linearly interpolated.
    """
    x = np.linspace(a, b, panels + 1)
    fx = _eval(density, x)
    fm = _eval(density, 0.5 * (x[:-1] + x[1:]))
    pieces = (x[1] - x[0]) / 6.0 * (fx[:-1] + 4.0 * fm + fx[1:])
    cum = np.concatenate([[0.0], np.cumsum(pieces)])

    def cdf(v):
        out = np.interp(v, x, cum)
        return float(out) if np.ndim(out) == 0 else out

    return cdf


def ks_threshold(n: int, alpha: float) -> float:
    """Asymptotic Kolmogorov-Smirnov critical value ``sqrt(-ln(alpha/2)/2) / sqrt(n)``."""
    return math.sqrt(-0.5 * math.log(0.5 * alpha)) / math.sqrt(n)


def ks_test(samples, cdf: Callable, alpha: float = 0.01) -> GofReport:
    """One-sample Kolmogorov-Smirnov test against a continuous ``cdf``.

    ``samples`` must be sorted ascending and contain at least 100 values.
    """
    s = np.asarray(samples, dtype=float)
    if s.ndim != 1 or s.size < 100:
        raise DomainError("ks_test needs at least 100 samples")
    if np.any(np.diff(s) < 0):
        raise DomainError("ks_test needs sorted samples")
    n = s.size
    F = np.asarray(cdf(s), dtype=float)
    i = np.arange(1, n + 1)
    d = max(float(np.max(i / n - F)), float(np.max(F - (i - 1) / n)))
    thr = ks_threshold(n, alpha)
    return GofReport(d, thr, n, d < thr, "KS")


def chi_square_quantile(dof: int, alpha: float) -> float:
    """Upper ``alpha`` quantile of chi-square by the Wilson-Hilferty approximation."""
    if dof < 1:
        raise DomainError("chi-square needs at least one degree of freedom")
    z = NormalDist().inv_cdf(1.0 - alpha)
    c = 2.0 / (9.0 * dof)
    return dof * (1.0 - c + z * math.sqrt(c)) ** 3


def merge_bins(observed, expected, min_expected: float = 5.0):
    """Merge adjacent bins left to right until each expected count reaches
    ``min_expected``; a short remainder joins the last merged bin."""
    obs_out, exp_out = [], []
    o_acc = e_acc = 0.0
    for o, e in zip(observed, expected):
        o_acc += o
        e_acc += e
        if e_acc >= min_expected:
            obs_out.append(o_acc)
            exp_out.append(e_acc)
            o_acc = e_acc = 0.0
    if e_acc > 0 or o_acc > 0:
        if exp_out:
            obs_out[-1] += o_acc
            exp_out[-1] += e_acc
        else:
            obs_out.append(o_acc)
            exp_out.append(e_acc)
    return np.array(obs_out), np.array(exp_out)


def chi_square_test(hist, density: Callable, alpha: float = 0.01, min_expected: float = 5.0) -> GofReport:
    """Pearson chi-square test of a histogram against a density.

    ``hist`` needs ``bin_edges``, ``counts`` and ``total`` (an
    :class:`~hypk.sim.config.EmpiricalDistribution`).  Expected counts come
    from integrating ``density`` over each bin; bins are merged until every
    expected count is at least ``min_expected``.  Degrees of freedom are the
    merged bin count minus one.
    """
    if hist.total <= 0:
        raise DomainError("chi_square_test: empty histogram")
    edges = np.asarray(hist.bin_edges, dtype=float)
    mass = np.array([integrate(density, lo, hi, tol=1e-11).value for lo, hi in zip(edges[:-1], edges[1:])])
    expected = hist.total * mass
    obs, exp = merge_bins(np.asarray(hist.counts, dtype=float), expected, min_expected)
    if obs.size < 2:
        raise DomainError("chi_square_test: fewer than two bins after merging")
    stat = float(np.sum((obs - exp) ** 2 / exp))
    dof = obs.size - 1
    thr = chi_square_quantile(dof, alpha)
    return GofReport(stat, thr, int(hist.total), stat < thr, "ChiSquare", dof)


def binomial_ci(successes: int, trials: int, z: float = 3.0, min_trials: int = 1000) -> tuple[float, float]:
    """Normal-approximation interval ``p +- z sqrt(p (1 - p) / N)`` clamped to [0, 1].

    ``p (1 - p)`` is floored at its value for a single success, so that
    0 or N successes still give an interval of positive width.
    """
    if trials < min_trials:
        raise DomainError(f"binomial_ci needs at least {min_trials} trials, got {trials}")
    if not (0 <= successes <= trials):
        raise DomainError("successes must lie in [0, trials]")
    p = successes / trials
    one = 1.0 / trials
    half = z * math.sqrt(max(p * (1.0 - p), one * (1.0 - one)) / trials)
    return max(0.0, p - half), min(1.0, p + half)
