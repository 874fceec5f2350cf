"""Euler-Maruyama simulation of Brownian motion on H^n and S^2.

Hyperbolic Brownian motion in the half-space model solves

    dX_i = Y dW_i  (i < n),    dY = -((n-2)/2) Y dt + Y dW_n,

whose generator is ``(y^2/2) Laplacian_euclid - ((n-2)/2) y d/dy``, half the
Laplace-Beltrami operator.  On S^2 the colatitude and longitude follow

    dtheta = (1/2) cot(theta) dt + dW_1,    dphi = dW_2 / sin(theta).

Exit detection uses the first discrete point at or beyond the boundary.
With ``SimConfig.step_max`` set the step adapts to the distance ``d`` from
the nearest boundary, ``h = clip((d/kappa)^2, step, step_max)``, which keeps
the per-step displacement (about ``sqrt(h)``) a fixed fraction of ``d``.
"""

from __future__ import annotations

import math

import numpy as np

from hypk import exitprob
from hypk._accel import configure_threads, resolve_backend
from hypk.errors import DomainError, StepRejected, TruncationError
from hypk.geometry import (
    HalfSpacePoint,
    PolarPoint,
    SpherePoint,
    _distance,
    angle_from_carnot,
    direction_from_angles,
    distance_from_origin,
    halfspace_to_ball,
    polar_to_halfspace,
    wrap_angle,
)
from hypk.sim import rng
from hypk.sim._numpy_kernels import fold_colatitude
from hypk.sim.config import ExitEstimate, ExitSamples, SimConfig, SphereExitSamples
from hypk.stats import binomial_ci

__all__ = [
    "hbm_step",
    "hbm_step_arrays",
    "sbm_step",
    "sbm_step_arrays",
    "first_hit_sphere",
    "first_exit_annulus",
    "escape_estimate",
    "first_hit_spherical_circle",
    "sphere_exit_estimate",
    "backend_module",
]


def backend_module(name: str | None = None):
    """Kernel module for ``name`` (or the ``HYPK_BACKEND`` default)."""
    if resolve_backend(name) == "numba":
        configure_threads()
        from hypk.sim import _numba_kernels as mod
    else:
        from hypk.sim import _numpy_kernels as mod
    return mod


def _cosh_m1(eta: float) -> float:
    return 2.0 * math.sinh(0.5 * eta) ** 2


# --------------------------------------------------------------------------
# single steps


def hbm_step(point: HalfSpacePoint, n: int, h: float, gaussians, max_halvings: int = 10) -> HalfSpacePoint:
    """One Euler-Maruyama step of hyperbolic Brownian motion.

    ``X_i' = X_i + Y sqrt(h) Z_i`` and ``Y' = Y (1 - (n-2)/2 h + sqrt(h) Z_n)``.
    A step with ``Y' <= 0`` is retried with ``h/2`` and the same normals.

    Raises
    ------
    StepRejected
        If ``Y' <= 0`` after ``max_halvings`` halvings.
    """
    if point.dim != n:
        raise DomainError(f"point of dimension {point.dim} used with n={n}")
    if not (h > 0):
        raise DomainError("step must be positive")
    z = np.asarray(gaussians, dtype=float)
    if z.shape != (n,):
        raise DomainError(f"hbm_step needs {n} normals, got shape {z.shape}")
    drift = 0.5 * (n - 2)
    for _ in range(max_halvings + 1):
        sh = math.sqrt(h)
        ynew = point.y * (1.0 - drift * h + sh * z[n - 1])
        if ynew > 0.0:
            x = np.array(point.x) + (point.y * sh) * z[: n - 1]
            return HalfSpacePoint(tuple(x), ynew)
        h *= 0.5
    raise StepRejected(f"y stayed non-positive after {max_halvings} halvings")


def hbm_step_arrays(x, y, n: int, h: float, z):
    """Vectorised step without rejection; ``x`` is ``(N, n-1)``, ``z`` is ``(N, n)``.

    Returns ``(x', y')``; callers must check ``y' > 0``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    sh = math.sqrt(h)
    return x + (y * sh)[:, None] * z[:, : n - 1], y * (1.0 - 0.5 * (n - 2) * h + sh * z[:, n - 1])


def sbm_step(point: SpherePoint, h: float, gaussians) -> SpherePoint:
    """One Euler-Maruyama step on S^2.

    ``theta' = theta + (h/2) cot(theta) + sqrt(h) Z_1``, reflected into
    ``[0, pi]`` with ``phi`` turned by ``pi`` on reflection, and
    ``phi' = phi + sqrt(h) Z_2 / sin(theta)``.
    """
    th = point.theta
    if not (0.0 < th < math.pi):
        raise DomainError("sbm_step needs 0 < theta < pi")
    a, b = (float(v) for v in np.asarray(gaussians, dtype=float))
    tn, pn = sbm_step_arrays(np.array([th]), np.array([point.phi]), h, np.array([[a, b]]))
    return SpherePoint(float(tn[0]), float(pn[0]))


def sbm_step_arrays(theta, phi, h: float, z):
    """Vectorised :func:`sbm_step`; ``z`` has shape ``(N, 2)``."""
    theta = np.asarray(theta, dtype=float)
    z = np.asarray(z, dtype=float)
    sh = math.sqrt(h)
    s = np.sin(theta)
    tn = theta + 0.5 * h * np.cos(theta) / s + sh * z[:, 0]
    pn = np.asarray(phi, dtype=float) + sh * z[:, 1] / s
    return fold_colatitude(tn, pn)


# --------------------------------------------------------------------------
# path batches


def _run_hbm(cfg: SimConfig, start: HalfSpacePoint, eta_inner: float, eta_outer: float):
    mod = backend_module(cfg.backend)
    n = cfg.dimension
    seeds = rng.path_seeds(cfg.seed, cfg.num_paths)
    q_in = _cosh_m1(eta_inner) if eta_inner >= 0 else -1.0
    h_max = cfg.step_max if cfg.adaptive else cfg.step
    return mod.run_hbm_paths(
        n, np.array(start.x, dtype=float), float(start.y), q_in, _cosh_m1(eta_outer),
        float(eta_inner), float(eta_outer), float(cfg.step), float(h_max), float(cfg.kappa),
        int(cfg.max_steps), int(cfg.max_halvings), seeds,
    )


def _run_sbm(cfg: SimConfig, start: SpherePoint, lo: float, hi: float):
    mod = backend_module(cfg.backend)
    seeds = rng.path_seeds(cfg.seed, cfg.num_paths)
    h_max = cfg.step_max if cfg.adaptive else cfg.step
    return mod.run_sbm_paths(
        float(start.theta), float(start.phi), float(lo), float(hi), float(cfg.step), float(h_max),
        float(cfg.kappa), float(cfg.kappa), int(cfg.max_steps), seeds,
    )


def _check_truncation(cfg: SimConfig, truncated: int, what: str):
    if truncated > cfg.max_truncated_fraction * cfg.num_paths:
        raise TruncationError(
            f"{what}: {truncated} of {cfg.num_paths} paths hit max_steps or the halving limit",
            truncated=truncated, total=cfg.num_paths,
        )


def first_hit_sphere(cfg: SimConfig, start: PolarPoint, eta_bar: float) -> ExitSamples:
    """Simulate until the distance from ``O`` first reaches ``eta_bar``.

    ``psi`` is the angle at ``O`` between start and detection point; for a
    start off ``O`` it comes from the hyperbolic law of cosines with the
    detection point's actual radius.  In H^2 ``signed_angle`` is the exit
    polar angle minus the start angle, wrapped to ``(-pi, pi]``.

    Raises
    ------
    TruncationError
        If more than ``cfg.max_truncated_fraction`` of the paths are cut off.
    """
    n = cfg.dimension
    if start.dim != n:
        raise DomainError(f"start point has dimension {start.dim}, config says {n}")
    if not (start.eta < eta_bar):
        raise DomainError("first_hit_sphere needs start.eta < eta_bar")
    z0 = polar_to_halfspace(start)
    xf, yf, steps, status = _run_hbm(cfg, z0, -1.0, eta_bar)
    done = np.flatnonzero(status == 0)
    truncated = int(cfg.num_paths - done.size)
    _check_truncation(cfg, truncated, "first_hit_sphere")

    x, y = xf[done].T, yf[done]
    eta_exit = distance_from_origin(x, y)
    if start.eta > 0.0:
        eta_hat = _distance(np.array(z0.x)[:, None], z0.y, x, y)
        psi = np.atleast_1d(angle_from_carnot(start.eta, eta_exit, eta_hat))
    else:
        w = halfspace_to_ball(x, y)
        w = w / np.linalg.norm(w, axis=0)
        c = direction_from_angles(start.angles) @ w
        psi = np.arccos(np.clip(c, -1.0, 1.0))
    signed = None
    if n == 2:
        alpha = np.arctan2(x[0] ** 2 + y * y - 1.0, 2.0 * x[0])
        signed = np.atleast_1d(wrap_angle(alpha - start.alpha))
    return ExitSamples(
        psi=psi,
        signed_angle=signed,
        steps_taken=steps[done],
        overshoot=np.maximum(eta_exit - eta_bar, 0.0),
        path_index=done,
        truncated=truncated,
        total=cfg.num_paths,
    )


def _estimate(hits: int, trials: int, truncated: int, total: int, limit: float, bias: float = 0.0) -> ExitEstimate:
    if trials == 0:
        raise TruncationError("no path finished", truncated=truncated, total=total)
    p = hits / trials
    se = math.sqrt(p * (1.0 - p) / trials)
    if trials >= 1000:
        lo, hi = binomial_ci(hits, trials, z=3.0)
    else:
        lo, hi = max(0.0, p - 3.0 * se), min(1.0, p + 3.0 * se)
    status = "warning" if truncated > limit * total else "ok"
    return ExitEstimate(p, se, lo, hi, hits, trials, truncated, status, bias)


def first_exit_annulus(cfg: SimConfig, eta: float, eta1: float, eta2: float) -> ExitEstimate:
    """Monte Carlo estimate of ``P{T_eta1 < T_eta2}`` from radius ``eta``.

    Truncated paths are left out of the estimate and counted; above the
    configured fraction the status is ``"warning"``.
    """
    if not (0.0 < eta1 < eta < eta2):
        raise DomainError("first_exit_annulus needs 0 < eta1 < eta < eta2")
    start = polar_to_halfspace(PolarPoint(eta, (0.0,) * (cfg.dimension - 1)))
    _, _, _, status = _run_hbm(cfg, start, eta1, eta2)
    hits = int(np.count_nonzero(status == 1))
    trials = int(np.count_nonzero(status >= 0))
    return _estimate(hits, trials, cfg.num_paths - trials, cfg.num_paths, cfg.max_truncated_fraction)


def escape_estimate(cfg: SimConfig, eta: float, eta1: float) -> ExitEstimate:
    """Estimate of ``P{T_eta1 < infinity}`` with ``cfg.escape_cap`` standing in for infinity.

    The simulation estimates ``P{T_eta1 < T_cap}``, which is smaller than the
    target; ``bias_bound`` is the analytic gap
    ``hit_prob(eta, eta1) - exit_prob(eta, eta1, cap)``.
    """
    cap = cfg.escape_cap
    if not (0.0 < eta1 < eta < cap):
        raise DomainError("escape_estimate needs 0 < eta1 < eta < escape_cap")
    n = cfg.dimension
    start = polar_to_halfspace(PolarPoint(eta, (0.0,) * (n - 1)))
    _, _, _, status = _run_hbm(cfg, start, eta1, cap)
    hits = int(np.count_nonzero(status == 1))
    trials = int(np.count_nonzero(status >= 0))
    bias = exitprob.hit_prob_hn(n, eta, eta1) - exitprob.exit_prob_hn(n, eta, eta1, cap)
    return _estimate(hits, trials, cfg.num_paths - trials, cfg.num_paths, cfg.max_truncated_fraction, max(bias, 0.0))


def first_hit_spherical_circle(cfg: SimConfig, start: SpherePoint, theta_bar: float) -> SphereExitSamples:
    """Simulate Brownian motion on S^2 until the colatitude first reaches ``theta_bar``.

    Records the longitude change ``dphi`` at detection.

    Raises
    ------
    TruncationError
        If more than ``cfg.max_truncated_fraction`` of the paths are cut off.
    """
    if not (0.0 < start.theta < theta_bar < math.pi):
        raise DomainError("first_hit_spherical_circle needs 0 < theta < theta_bar < pi")
    th, ph, steps, status = _run_sbm(cfg, start, -1.0, theta_bar)
    done = np.flatnonzero(status == 0)
    truncated = int(cfg.num_paths - done.size)
    _check_truncation(cfg, truncated, "first_hit_spherical_circle")
    return SphereExitSamples(
        dphi=np.atleast_1d(wrap_angle(ph[done] - start.phi)),
        steps_taken=steps[done],
        overshoot=th[done] - theta_bar,
        path_index=done,
        truncated=truncated,
        total=cfg.num_paths,
    )


def sphere_exit_estimate(cfg: SimConfig, theta: float, theta1: float, theta2: float) -> ExitEstimate:
    """Estimate of ``P{T_theta1 < T_theta2}`` on S^2 for ``theta2 < theta < theta1``."""
    if not (0.0 < theta2 < theta < theta1 < math.pi):
        raise DomainError("sphere_exit_estimate needs 0 < theta2 < theta < theta1 < pi")
    _, _, _, status = _run_sbm(cfg, SpherePoint(theta, 0.0), theta2, theta1)
    hits = int(np.count_nonzero(status == 0))
    trials = int(np.count_nonzero(status >= 0))
    return _estimate(hits, trials, cfg.num_paths - trials, cfg.num_paths, cfg.max_truncated_fraction)
