"""Acceptance checks shared by ``hypk validate`` and the test suite.

Each ``criterion_*`` function returns a list of :class:`Check` records.
Analytic checks are deterministic; Monte Carlo checks use fixed seeds.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from hypk import exitprob, kernels, specialfn
from hypk.geometry import PolarPoint, SpherePoint
from hypk.sim import (
    EmpiricalDistribution,
    SimConfig,
    escape_estimate,
    first_exit_annulus,
    first_hit_sphere,
    first_hit_spherical_circle,
    sphere_exit_estimate,
)
from hypk.stats import chi_square_test, integrate

__all__ = ["Check", "Budget", "SUITES", "run_suite", "CRITERIA"]


@dataclass(frozen=True)
class Check:
    """One validated quantity: passes iff ``statistic <= threshold``."""

    criterion: int
    name: str
    statistic: float
    threshold: float
    passed: bool
    detail: str = ""

    def as_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "name": self.name,
            "statistic": self.statistic,
            "threshold": self.threshold,
            "passed": self.passed,
            "detail": self.detail,
        }


def _check(criterion, name, statistic, threshold, detail="", strict=False) -> Check:
    statistic, threshold = float(statistic), float(threshold)
    ok = statistic < threshold if strict else statistic <= threshold
    return Check(criterion, name, statistic, threshold, bool(ok and math.isfinite(statistic)), detail)


@dataclass(frozen=True)
class Budget:
    """Sizes for the Monte Carlo checks.

    ``kernel_paths`` and ``kernel_step`` drive the hitting-law tests,
    ``exit_paths`` the exit and escape estimates, which use distance-adaptive
    steps between ``exit_step_min`` and ``exit_step_max``.
    """

    kernel_paths: int = 50_000
    kernel_step: float = 1e-4
    exit_paths: int = 100_000
    exit_step_min: float = 1e-6
    exit_step_max: float = 1e-2
    bins: int = 40
    seed: int = 20240601
    backend: str | None = None

    @classmethod
    def fast(cls, backend: str | None = None) -> "Budget":
        return cls(kernel_paths=5_000, kernel_step=1e-3, exit_paths=10_000, bins=20, backend=backend)


# --------------------------------------------------------------------------
# analytic criteria


def criterion_1(budget: Budget | None = None) -> list[Check]:
    """Normalisation of every kernel over its angular domain."""
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    out = []

    err = 0.0
    for _ in range(10):
        eta_bar = rng.uniform(0.2, 4.0)
        eta = rng.uniform(0.0, 0.95) * eta_bar
        val = integrate(lambda a: kernels.poisson_h2(eta, a, eta_bar), -math.pi, math.pi).value
        err = max(err, abs(val - 1.0))
    out.append(_check(1, "poisson_h2 normalisation", err, 1e-8, "10 random (eta, eta_bar)"))

    for n in (3, 4, 5):
        err = 0.0
        for _ in range(5):
            eta_bar = rng.uniform(0.2, 2.5)
            eta = rng.uniform(0.0, 0.8) * eta_bar
            val = integrate(lambda p: kernels.poisson_hn(n, eta, eta_bar, p).density, 0.0, math.pi, tol=1e-10).value
            err = max(err, abs(val - 1.0))
        out.append(_check(1, f"poisson_hn n={n} normalisation", err, 1e-7, "5 random (eta, eta_bar)"))

    err = 0.0
    for _ in range(5):
        r_bar = rng.uniform(0.1, 0.95)
        r = rng.uniform(0.0, 0.95) * r_bar
        err = max(err, abs(integrate(lambda a: kernels.poisson_d2(r, a, r_bar), -math.pi, math.pi).value - 1.0))
    out.append(_check(1, "poisson_d2 normalisation", err, 1e-8))

    err = 0.0
    for _ in range(5):
        tb = rng.uniform(0.2, 3.0)
        t = rng.uniform(0.0, 0.95) * tb
        err = max(err, abs(integrate(lambda a: kernels.poisson_sphere(t, a, tb), -math.pi, math.pi).value - 1.0))
    out.append(_check(1, "poisson_sphere normalisation", err, 1e-8))

    err = 0.0
    for eta in (0.0, 0.5, 1.5, 3.0):
        err = max(err, abs(integrate(lambda a: kernels.poisson_h2_boundary(eta, a), -math.pi, math.pi).value - 1.0))
    for r in (0.0, 0.3, 0.8):
        err = max(err, abs(integrate(lambda a: kernels.poisson_d2_boundary(r, a), -math.pi, math.pi).value - 1.0))
    for x0, y0 in ((0.0, 1.0), (1.5, 0.4)):
        # x = x0 + y0 tan(u) maps the line onto (-pi/2, pi/2)
        f = lambda u: kernels.cauchy_hitting_density(x0, y0, x0 + y0 * np.tan(u)) * y0 / np.cos(u) ** 2
        err = max(err, abs(integrate(f, -0.5 * math.pi + 1e-9, 0.5 * math.pi - 1e-9).value - 1.0))
    out.append(_check(1, "boundary kernels normalisation", err, 1e-8, "h2, d2 and Cauchy boundary laws"))

    err = 0.0
    for n in (3, 4):
        for eta in (0.3, 1.0):
            val = integrate(lambda p: kernels.poisson_hn_infinite(n, eta, p).density, 0.0, math.pi, tol=1e-10).value
            err = max(err, abs(val - 1.0))
    out.append(_check(1, "poisson_hn_infinite normalisation", err, 1e-7))

    out.append(_check(1, "runtime seconds", time.perf_counter() - t0, 10.0))
    return out


def criterion_2(budget: Budget | None = None) -> list[Check]:
    """Closed form against the Fourier series with 200 terms."""
    rng = np.random.default_rng(2)
    worst_excess, worst_bound = -np.inf, 0.0
    for _ in range(1000):
        eta_bar = rng.uniform(0.1, 5.0)
        # keep q = tanh(eta/2)/tanh(eta_bar/2) <= 0.85 so that q^201 < 1e-12
        q = rng.uniform(0.0, 0.85)
        eta = 2.0 * math.atanh(q * math.tanh(0.5 * eta_bar))
        d = rng.uniform(-math.pi, math.pi)
        closed = kernels.poisson_h2(eta, d, eta_bar)
        ser = kernels.poisson_h2_series(eta, d, eta_bar, 200)
        # rounding allowance of a few ulps of the series magnitude
        slack = 1e-14 * max(1.0, abs(closed))
        worst_excess = max(worst_excess, abs(closed - ser.density) - ser.truncation_error_bound - slack)
        worst_bound = max(worst_bound, ser.truncation_error_bound)
    return [
        _check(2, "closed form minus series beyond tail bound", max(worst_excess, 0.0), 0.0, "1000 random points"),
        _check(2, "largest tail bound", worst_bound, 1e-12, strict=True),
    ]


def criterion_3(budget: Budget | None = None) -> list[Check]:
    """Limits: ideal boundary, Euclidean scaling and the Cauchy law."""
    out = []
    d = np.linspace(-math.pi, math.pi, 721)
    err = 0.0
    for eta in (0.0, 0.5, 1.0, 2.0):
        err = max(err, float(np.max(np.abs(kernels.poisson_h2(eta, d, 12.0) - kernels.poisson_h2_boundary(eta, d)))))
    out.append(_check(3, "(a) eta_bar=12 vs ideal boundary", err, 1e-4, strict=True))

    s = 1e-3
    err = 0.0
    for eta, eta_bar in ((0.3, 1.0), (0.7, 1.0), (1.0, 2.5)):
        hyp = kernels.poisson_h2(s * eta, d, s * eta_bar)
        euc = kernels.poisson_d2(0.5 * eta / eta_bar, d, 0.5)
        err = max(err, float(np.max(np.abs(hyp - euc))))
    out.append(_check(3, "(b) scaled H^2 vs Euclidean disc", err, 1e-4, strict=True))

    psi = np.linspace(0.0, math.pi, 181)
    for n in (3, 4):
        err = 0.0
        for eta, eta_bar in ((0.3, 1.0), (0.6, 1.0)):
            hyp = kernels.poisson_hn(n, s * eta, s * eta_bar, psi).density
            euc = kernels.euclidean_poisson_nd(n, eta / eta_bar, psi)
            err = max(err, float(np.max(np.abs(hyp - euc))))
        out.append(_check(3, f"(c) scaled H^{n} vs Euclidean ball", err, 1e-4, strict=True))

    xb = np.linspace(-50.0, 50.0, 2001)
    err = float(np.max(np.abs(kernels.cauchy_hitting_density(0.0, 1.0, xb) - 1.0 / (math.pi * (1.0 + xb * xb)))))
    out.append(_check(3, "(d) Cauchy law from (0, 1)", err, 1e-12, strict=True))
    return out


def criterion_4(budget: Budget | None = None) -> list[Check]:
    """H^2 and disc formulas agree under r = tanh(eta/2)."""
    rng = np.random.default_rng(4)
    kerr = perr = 0.0
    for _ in range(1000):
        eta_bar = rng.uniform(0.1, 6.0)
        eta = rng.uniform(0.0, 0.95) * eta_bar
        d = rng.uniform(-math.pi, math.pi)
        a = kernels.poisson_h2(eta, d, eta_bar)
        b = kernels.poisson_d2(math.tanh(0.5 * eta), d, math.tanh(0.5 * eta_bar))
        kerr = max(kerr, abs(a - b) / max(1.0, abs(a)))
        # annuli at least 0.1 wide: for thinner ones rounding of r = tanh(eta/2)
        # alone, amplified by 1/|log r1 - log r2|, exceeds the tolerance
        e1 = rng.uniform(0.05, 5.0)
        e2 = e1 + rng.uniform(0.1, 3.0)
        e = rng.uniform(e1, e2)
        pa = exitprob.exit_prob_h2(e, e1, e2)
        pb = exitprob.exit_prob_d2(math.tanh(0.5 * e), math.tanh(0.5 * e1), math.tanh(0.5 * e2))
        perr = max(perr, abs(pa - pb))
    return [
        _check(4, "kernel H^2 vs disc (relative)", kerr, 1e-12, "1000 random points", strict=True),
        _check(4, "exit probability H^2 vs disc", perr, 1e-12, "1000 random points", strict=True),
    ]


def criterion_8(budget: Budget | None = None) -> list[Check]:
    """Gegenbauer identities and 2F1 at x = 1."""
    out = []
    rho = 0.3
    t = np.linspace(-1.0, 1.0, 41)
    gerr = oerr = 0.0
    for n in (3, 4, 5):
        lam = 0.5 * (n - 2)
        seq = specialfn.gegenbauer_sequence(60, lam, t)
        partial = np.sum(seq * rho ** np.arange(61)[:, None], axis=0)
        gerr = max(gerr, float(np.max(np.abs(partial - (1.0 - 2.0 * rho * t + rho * rho) ** (-lam)))))
        for j in range(9):
            for k in range(j + 1, 9):
                f = lambda th: (specialfn.gegenbauer(j, lam, np.cos(th)) * specialfn.gegenbauer(k, lam, np.cos(th))
                                * np.sin(th) ** (2.0 * lam))
                oerr = max(oerr, abs(integrate(f, 0.0, math.pi, tol=1e-13).value))
    out.append(_check(8, "Gegenbauer generating function", gerr, 1e-10, "rho=0.3, 60 terms", strict=True))
    out.append(_check(8, "Gegenbauer orthogonality", oerr, 1e-8, "j != k <= 8, n = 3, 4, 5", strict=True))

    ferr = 0.0
    for n in (3, 4, 5):
        for k in range(11):
            a, b, c = float(k), 1.0 - 0.5 * n, k + 0.5 * n
            exact = math.exp(math.lgamma(c) + math.lgamma(c - a - b) - math.lgamma(c - a) - math.lgamma(c - b))
            ferr = max(ferr, abs(specialfn.gauss_2f1(a, b, c, 1.0) / exact - 1.0))
    out.append(_check(8, "2F1 at x=1 vs Gamma form (relative)", ferr, 1e-9, "k <= 10, n = 3, 4, 5", strict=True))
    return out


def _radial_residual(f, x, lap_coef, delta=1e-4):
    # five-point centred differences; the three-point rule's O(delta^2)
    # error alone reaches 5e-6 for n = 8
    f2, f1, f0, g1, g2 = f(x + 2 * delta), f(x + delta), f(x), f(x - delta), f(x - 2 * delta)
    d2 = (-f2 + 16.0 * f1 - 30.0 * f0 + 16.0 * g1 - g2) / (12.0 * delta ** 2)
    d1 = (-f2 + 8.0 * f1 - 8.0 * g1 + g2) / (12.0 * delta)
    return abs(d2 + lap_coef(x) * d1)


def criterion_9(budget: Budget | None = None) -> list[Check]:
    """Finite-difference radial Laplacian of every exit probability."""
    out = []
    grid = np.linspace(0.6, 1.9, 27)
    worst = 0.0
    for n in range(2, 9):
        f = lambda e: exitprob.exit_prob_hn(n, e, 0.5, 2.0)
        for e in grid:
            worst = max(worst, _radial_residual(f, e, lambda x: (n - 1) / math.tanh(x)))
    out.append(_check(9, "H^n exit probability, n = 2..8", worst, 1e-6, strict=True))

    worst = 0.0
    for n in range(2, 9):
        f = lambda e: exitprob.hit_prob_hn(n, e, 0.5)
        for e in grid:
            worst = max(worst, _radial_residual(f, e, lambda x: (n - 1) / math.tanh(x)))
    out.append(_check(9, "H^n escape complement, n = 2..8", worst, 1e-6, strict=True))

    worst = 0.0
    for r in np.linspace(0.25, 0.85, 25):
        worst = max(worst, _radial_residual(lambda v: exitprob.exit_prob_d2(v, 0.2, 0.9), r, lambda x: 1.0 / x))
    out.append(_check(9, "disc exit probability", worst, 1e-6, strict=True))

    worst = 0.0
    for th in np.linspace(0.85, 1.75, 25):
        worst = max(worst, _radial_residual(lambda v: exitprob.exit_prob_sphere(v, 1.8, 0.8), th, lambda x: 1.0 / math.tan(x)))
    out.append(_check(9, "sphere exit probability", worst, 1e-6, strict=True))
    return out


# --------------------------------------------------------------------------
# Monte Carlo criteria


def _chi2_check(criterion, name, samples, lo, hi, density, bins, elapsed):
    hist = EmpiricalDistribution.from_samples(samples, bins, lo, hi)
    rep = chi_square_test(hist, density, alpha=0.01)
    return [
        _check(criterion, name, rep.statistic, rep.threshold, f"chi-square, dof={rep.dof}, N={rep.n_samples}", strict=True),
        _check(criterion, f"{name} runtime seconds", elapsed, 300.0),
    ]


def criterion_5(budget: Budget | None = None) -> list[Check]:
    """Simulated hitting laws against the analytic kernels."""
    b = budget or Budget()
    out = []
    base = dict(step=b.kernel_step, num_paths=b.kernel_paths, seed=b.seed, backend=b.backend)

    t0 = time.perf_counter()
    s = first_hit_sphere(SimConfig(dimension=2, **base), PolarPoint.h2(0.8, 0.0), 1.5)
    out += _chi2_check(5, "(i) H^2 exit angle, eta=0.8, eta_bar=1.5", s.signed_angle, -math.pi, math.pi,
                       lambda a: kernels.poisson_h2(0.8, a, 1.5), b.bins, time.perf_counter() - t0)

    t0 = time.perf_counter()
    s = first_hit_sphere(SimConfig(dimension=3, **base), PolarPoint(0.5, (0.0, 0.0)), 1.2)
    out += _chi2_check(5, "(ii) H^3 exit angle psi, eta=0.5, eta_bar=1.2", s.psi, 0.0, math.pi,
                       lambda p: kernels.poisson_hn(3, 0.5, 1.2, p).density, b.bins, time.perf_counter() - t0)

    t0 = time.perf_counter()
    s = first_hit_spherical_circle(SimConfig(**base), SpherePoint(0.6, 0.0), 1.2)
    out += _chi2_check(5, "(iii) S^2 exit longitude, theta=0.6, theta_bar=1.2", s.dphi, -math.pi, math.pi,
                       lambda p: kernels.poisson_sphere(0.6, p, 1.2), b.bins, time.perf_counter() - t0)
    return out


def _exit_config(b: Budget, dimension=2, **kw) -> SimConfig:
    return SimConfig(dimension=dimension, step=b.exit_step_min, step_max=b.exit_step_max,
                     num_paths=b.exit_paths, seed=b.seed, backend=b.backend, **kw)


def _zscore_check(criterion, name, est, exact, elapsed_from):
    z = abs(est.estimate - exact) / est.stderr if est.stderr > 0 else math.inf
    return _check(criterion, name, z, 3.0,
                  f"estimate={est.estimate:.6f} +- {est.stderr:.6f}, exact={exact:.6f}, "
                  f"{time.perf_counter() - elapsed_from:.1f}s")


def criterion_6(budget: Budget | None = None) -> list[Check]:
    """Simulated annulus exit probabilities within 3 standard errors."""
    b = budget or Budget()
    t_all = time.perf_counter()
    out = []
    t0 = time.perf_counter()
    est = first_exit_annulus(_exit_config(b, 2), 1.0, 0.5, 2.0)
    out.append(_zscore_check(6, "H^2 annulus (0.5, 1.0, 2.0), |z|", est, exitprob.exit_prob_h2(1.0, 0.5, 2.0), t0))

    t0 = time.perf_counter()
    est = first_exit_annulus(_exit_config(b, 3), 1.0, 0.5, 2.0)
    coth = lambda x: 1.0 / math.tanh(x)
    exact3 = (coth(2.0) - coth(1.0)) / (coth(2.0) - coth(0.5))
    out.append(_zscore_check(6, "H^3 annulus (0.5, 1.0, 2.0), |z|", est, exact3, t0))

    t0 = time.perf_counter()
    est = sphere_exit_estimate(_exit_config(b), 1.2, 1.8, 0.8)
    out.append(_zscore_check(6, "S^2 band (0.8, 1.2, 1.8), |z|", est, exitprob.exit_prob_sphere(1.2, 1.8, 0.8), t0))
    out.append(_check(6, "runtime seconds", time.perf_counter() - t_all, 300.0))
    return out


def criterion_7(budget: Budget | None = None) -> list[Check]:
    """Escape probability below one, consistent with the analytic value."""
    b = budget or Budget()
    t0 = time.perf_counter()
    est = escape_estimate(_exit_config(b, 2, escape_cap=10.0), 1.5, 0.5)
    exact = exitprob.hit_prob_h2(1.5, 0.5)
    z_below = (1.0 - est.estimate) / est.stderr
    dev = abs(est.estimate - exact)
    allowed = 3.0 * est.stderr + est.bias_bound
    detail = (f"estimate={est.estimate:.6f} +- {est.stderr:.6f}, exact={exact:.6f}, "
              f"bias_bound={est.bias_bound:.2e}, {time.perf_counter() - t0:.1f}s")
    return [
        # statistic is -z so that "below 1 by more than 5 sigma" reads statistic < -5
        _check(7, "escape estimate below 1, -(1 - p)/se", -z_below, -5.0, detail, strict=True),
        _check(7, "escape estimate vs analytic, |p - exact|", dev, allowed, "threshold = 3 se + bias bound"),
    ]


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
}

SUITES = {
    "kernels": (1, 2, 3, 4, 8, 9),
    "exits": (6, 7),
    "all": (1, 2, 3, 4, 5, 6, 7, 8, 9),
}


def run_suite(suite: str, budget: Budget | None = None) -> list[Check]:
    """Run every criterion of ``suite`` and collect the checks in order."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose one of {sorted(SUITES)}")
    out = []
    for c in SUITES[suite]:
        out.extend(CRITERIA[c](budget))
    return out
