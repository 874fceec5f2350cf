"""Coordinates, distances and Carnot relations for H^n, the Poincare disc and S^2.

Conventions
-----------
* The half-space model is ``{(x, y): x in R^(n-1), y > 0}`` with origin
  ``O = (0, ..., 0, 1)``.
* Geodesic polar coordinates ``(eta, angles)`` are taken about ``O``.  The
  direction of a point is the unit vector built from the hyperspherical
  angles, its last component pointing along ``+y``.  In H^2 this reproduces
  ``x = sinh(eta) cos(a) / (cosh(eta) - sinh(eta) sin(a))``.
* At ``eta = 0`` the polar chart is degenerate; every angle is reported as 0.
* Angles in ``(-pi, pi]`` are wrapped after every operation.

All functions are pure.  The scalar helpers also broadcast over numpy arrays,
which is what the simulator uses when it post-processes exit positions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from hypk.errors import DomainError, PointAtInfinity

__all__ = [
    "HalfSpacePoint",
    "PolarPoint",
    "DiskPoint",
    "SpherePoint",
    "ORIGIN_H2",
    "wrap_angle",
    "hyperbolic_distance",
    "distance_from_origin",
    "polar_to_halfspace_h2",
    "halfspace_to_polar_h2",
    "polar_to_halfspace",
    "halfspace_to_polar",
    "halfspace_to_ball",
    "ball_to_halfspace",
    "direction_from_angles",
    "h2_to_disk",
    "disk_to_h2",
    "carnot_hyperbolic",
    "angle_from_carnot",
    "carnot_spherical",
    "boundary_angle_to_x",
    "x_to_boundary_angle",
    "boundary_angle_jacobian",
]

_TWO_PI = 2.0 * math.pi


def wrap_angle(a):
    """Reduce an angle (or array of angles) to the principal range (-pi, pi]."""
    w = np.pi - np.mod(np.pi - np.asarray(a, dtype=float), _TWO_PI)
    if np.ndim(w) == 0:
        return float(w)
    return w


@dataclass(frozen=True)
class HalfSpacePoint:
    """A point ``(x, y)`` of the half-space model of H^n."""

    x: tuple[float, ...]
    y: float

    def __post_init__(self):
        x = tuple(float(v) for v in np.atleast_1d(self.x))
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", float(self.y))
        if not (self.y > 0.0):
            raise DomainError(f"half-space point needs y > 0, got y={self.y!r}")
        if not all(math.isfinite(v) for v in x) or not math.isfinite(self.y):
            raise DomainError("half-space point has non-finite coordinates")

    @property
    def dim(self) -> int:
        return len(self.x) + 1

    def as_array(self) -> np.ndarray:
        return np.array(self.x + (self.y,))


ORIGIN_H2 = HalfSpacePoint((0.0,), 1.0)


@dataclass(frozen=True)
class PolarPoint:
    """Geodesic polar coordinates about the origin.

    ``angles`` has length ``n - 1``: entries ``0 .. n-3`` lie in ``[0, pi]``
    and the last one in ``(-pi, pi]``.  For H^2 there is the single angle
    ``alpha``.
    """

    eta: float
    angles: tuple[float, ...] = field(default=(0.0,))

    def __post_init__(self):
        eta = float(self.eta)
        if not (eta >= 0.0) or not math.isfinite(eta):
            raise DomainError(f"polar radius must be finite and >= 0, got {self.eta!r}")
        angles = [float(a) for a in np.atleast_1d(self.angles)]
        if not angles:
            raise DomainError("polar point needs at least one angle")
        for a in angles[:-1]:
            if not (0.0 <= a <= math.pi):
                raise DomainError(f"polar angle {a!r} outside [0, pi]")
        angles[-1] = wrap_angle(angles[-1])
        if eta == 0.0:
            angles = [0.0] * len(angles)
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "angles", tuple(angles))

    @classmethod
    def h2(cls, eta: float, alpha: float) -> "PolarPoint":
        return cls(eta, (alpha,))

    @property
    def dim(self) -> int:
        return len(self.angles) + 1

    @property
    def alpha(self) -> float:
        """The last (azimuthal) angle; the only angle in H^2."""
        return self.angles[-1]


@dataclass(frozen=True)
class DiskPoint:
    """Polar coordinates ``(r, theta)`` in the Poincare disc."""

    r: float
    theta: float = 0.0

    def __post_init__(self):
        r = float(self.r)
        if not (0.0 <= r < 1.0):
            raise DomainError(f"disc radius must lie in [0, 1), got {self.r!r}")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "theta", wrap_angle(self.theta) if r > 0 else 0.0)


@dataclass(frozen=True)
class SpherePoint:
    """Colatitude ``theta`` in [0, pi] and longitude ``phi`` in [0, 2 pi)."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        theta = float(self.theta)
        if not (0.0 <= theta <= math.pi):
            raise DomainError(f"colatitude must lie in [0, pi], got {self.theta!r}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", float(np.mod(float(self.phi), _TWO_PI)))


# --------------------------------------------------------------------------
# distances


def _distance(x1, y1, x2, y2):
    # cosh(d) - 1 = |dz|^2 / (2 y y') = 2 sinh^2(d / 2); the asinh form
    # needs no clamping and keeps full precision for small distances.
    dx2 = np.sum((np.asarray(x1, dtype=float) - np.asarray(x2, dtype=float)) ** 2, axis=0)
    dz2 = dx2 + (np.asarray(y1) - np.asarray(y2)) ** 2
    return 2.0 * np.arcsinh(np.sqrt(dz2 / (4.0 * y1 * y2)))


def hyperbolic_distance(a: HalfSpacePoint, b: HalfSpacePoint, n: int | None = None) -> float:
    """Hyperbolic distance between two points of the half-space model.

    Evaluates ``arcosh(1 + |a - b|^2 / (2 y_a y_b))`` in the equivalent form
    ``2 asinh(|a - b| / (2 sqrt(y_a y_b)))``.
    """
    if n is not None and not (a.dim == b.dim == n):
        raise DomainError(f"points of dimension {a.dim} and {b.dim} used with n={n}")
    if a.dim != b.dim:
        raise DomainError("points live in half-spaces of different dimension")
    d = _distance(np.array(a.x)[:, None], a.y, np.array(b.x)[:, None], b.y)
    return float(d[0])


def distance_from_origin(x, y):
    """Vectorised distance from ``O``; ``x`` has shape ``(n-1, ...)``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r2 = np.sum(x * x, axis=0) + (y - 1.0) ** 2
    return 2.0 * np.arcsinh(np.sqrt(r2 / (4.0 * y)))


# --------------------------------------------------------------------------
# H^2 polar chart


def polar_to_halfspace_h2(p: PolarPoint) -> HalfSpacePoint:
    """Map polar coordinates ``(eta, alpha)`` of H^2 to ``(x, y)``."""
    if p.dim != 2:
        raise DomainError(f"expected a point of H^2, got dimension {p.dim}")
    sh = math.sinh(p.eta)
    # cosh - sinh sin(a) = exp(-eta) + 2 sinh sin^2(pi/4 - a/2), free of cancellation
    den = math.exp(-p.eta) + 2.0 * sh * math.sin(0.25 * math.pi - 0.5 * p.alpha) ** 2
    return HalfSpacePoint((sh * math.cos(p.alpha) / den,), 1.0 / den)


def halfspace_to_polar_h2(z: HalfSpacePoint) -> PolarPoint:
    """Inverse of :func:`polar_to_halfspace_h2`.

    Uses ``sinh(eta) cos(alpha) = x / y`` and
    ``sinh(eta) sin(alpha) = (x^2 + y^2 - 1) / (2 y)``.
    """
    if z.dim != 2:
        raise DomainError(f"expected a point of H^2, got dimension {z.dim}")
    x, y = z.x[0], z.y
    eta = float(distance_from_origin([x], y))
    if eta == 0.0:
        return PolarPoint(0.0, (0.0,))
    alpha = math.atan2(x * x + y * y - 1.0, 2.0 * x)
    return PolarPoint(eta, (alpha,))


# --------------------------------------------------------------------------
# H^n via the ball model


def direction_from_angles(angles) -> np.ndarray:
    """Unit vector of R^n from ``n - 1`` hyperspherical angles.

    ``u_1 = cos a_1, u_2 = sin a_1 cos a_2, ..., u_n = sin a_1 ... sin a_(n-1)``.
    For ``n = 2`` this is ``(cos a, sin a)``.
    """
    angles = np.atleast_1d(np.asarray(angles, dtype=float))
    u = np.empty(angles.size + 1)
    s = 1.0
    for i, a in enumerate(angles):
        u[i] = s * math.cos(a)
        s *= math.sin(a)
    u[-1] = s
    return u


def _angles_from_direction(u: np.ndarray) -> tuple[float, ...]:
    n = u.size
    angles = []
    for i in range(n - 2):
        tail = math.sqrt(float(np.sum(u[i + 1:] ** 2)))
        angles.append(math.atan2(tail, u[i]))
    angles.append(math.atan2(u[-1], u[-2]))
    return tuple(angles)


def halfspace_to_ball(x, y):
    """Cayley map of the half-space onto the unit ball, ``O`` to ``0``.

    ``x`` has shape ``(n-1, ...)``; returns an array of shape ``(n, ...)``
    whose last row is the component along ``+y``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x2 = np.sum(x * x, axis=0)
    den = x2 + (1.0 + y) ** 2
    return np.concatenate([2.0 * x / den, ((x2 + y * y - 1.0) / den)[None, ...]], axis=0)


def ball_to_halfspace(w):
    """Inverse of :func:`halfspace_to_ball`."""
    w = np.asarray(w, dtype=float)
    wp, wn = w[:-1], w[-1]
    wp2 = np.sum(wp * wp, axis=0)
    den = wp2 + (1.0 - wn) ** 2
    return 2.0 * wp / den, (1.0 - wp2 - wn * wn) / den


def polar_to_halfspace(p: PolarPoint) -> HalfSpacePoint:
    """Polar coordinates of H^n (any n >= 2) to the half-space model."""
    u = direction_from_angles(p.angles)
    x, y = ball_to_halfspace(math.tanh(p.eta / 2.0) * u)
    return HalfSpacePoint(tuple(x), float(y))


def halfspace_to_polar(z: HalfSpacePoint) -> PolarPoint:
    """Half-space point of H^n to geodesic polar coordinates."""
    x = np.array(z.x)
    eta = float(distance_from_origin(x, z.y))
    if eta == 0.0:
        return PolarPoint(0.0, (0.0,) * (z.dim - 1))
    w = halfspace_to_ball(x, z.y)
    return PolarPoint(eta, _angles_from_direction(w / np.linalg.norm(w)))


# --------------------------------------------------------------------------
# Poincare disc


def h2_to_disk(p: PolarPoint) -> DiskPoint:
    """``r = tanh(eta / 2)``, ``theta = alpha``."""
    if p.dim != 2:
        raise DomainError(f"expected a point of H^2, got dimension {p.dim}")
    r = math.tanh(p.eta / 2.0)
    if r >= 1.0:
        raise DomainError(f"eta={p.eta} is beyond double precision for the disc model")
    return DiskPoint(r, p.alpha)


def disk_to_h2(q: DiskPoint) -> PolarPoint:
    """``eta = log((1 + r) / (1 - r))``, ``alpha = theta``."""
    return PolarPoint(2.0 * math.atanh(q.r), (q.theta,))


# --------------------------------------------------------------------------
# triangle relations


def carnot_hyperbolic(eta, eta_bar, psi):
    """Third side of a hyperbolic triangle with sides ``eta``, ``eta_bar``
    enclosing the angle ``psi``:

        cosh(eta_hat) = cosh(eta) cosh(eta_bar) - sinh(eta) sinh(eta_bar) cos(psi)

    Evaluated through ``sinh^2(eta_hat/2) = sinh^2((eta-eta_bar)/2)
    + sinh(eta) sinh(eta_bar) sin^2(psi/2)`` so small sides keep their digits.
    """
    eta = np.asarray(eta, dtype=float)
    eta_bar = np.asarray(eta_bar, dtype=float)
    if np.any(eta < 0) or np.any(eta_bar < 0):
        raise DomainError("triangle sides must be non-negative")
    s = np.sinh(0.5 * (eta - eta_bar)) ** 2 + np.sinh(eta) * np.sinh(eta_bar) * np.sin(0.5 * np.asarray(psi)) ** 2
    out = 2.0 * np.arcsinh(np.sqrt(s))
    return float(out) if out.ndim == 0 else out


def angle_from_carnot(eta, eta_bar, eta_hat):
    """Angle in [0, pi] opposite ``eta_hat`` in a hyperbolic triangle.

    Inverse of :func:`carnot_hyperbolic`.  Both half-angle squares are formed
    from products of sinh factors and combined with ``atan2``; each is clamped
    to [0, 1], which absorbs triangles that violate the triangle inequality by
    rounding.
    """
    eta = np.asarray(eta, dtype=float)
    eta_bar = np.asarray(eta_bar, dtype=float)
    eta_hat = np.asarray(eta_hat, dtype=float)
    if np.any(eta <= 0) or np.any(eta_bar <= 0):
        raise DomainError("angle undefined when a side adjacent to it has zero length")
    den = np.sinh(eta) * np.sinh(eta_bar)
    d = np.abs(eta - eta_bar)
    t = eta + eta_bar
    sin2 = np.sinh(0.5 * (eta_hat + d)) * np.sinh(0.5 * (eta_hat - d)) / den
    cos2 = np.sinh(0.5 * (t + eta_hat)) * np.sinh(0.5 * (t - eta_hat)) / den
    sin2 = np.clip(sin2, 0.0, 1.0)
    cos2 = np.clip(cos2, 0.0, 1.0)
    out = 2.0 * np.arctan2(np.sqrt(sin2), np.sqrt(cos2))
    return float(out) if out.ndim == 0 else out


def carnot_spherical(theta, theta_bar, dphi):
    """Spherical law of cosines:
    ``cos(theta_hat) = cos(theta) cos(theta_bar) + sin(theta) sin(theta_bar) cos(dphi)``.
    """
    theta = np.asarray(theta, dtype=float)
    theta_bar = np.asarray(theta_bar, dtype=float)
    hav = np.sin(0.5 * (theta - theta_bar)) ** 2 + np.sin(theta) * np.sin(theta_bar) * np.sin(0.5 * np.asarray(dphi)) ** 2
    hav = np.clip(hav, 0.0, 1.0)
    out = 2.0 * np.arctan2(np.sqrt(hav), np.sqrt(1.0 - hav))
    return float(out) if out.ndim == 0 else out


# --------------------------------------------------------------------------
# boundary of H^2


def boundary_angle_to_x(alpha_bar):
    """Boundary angle to abscissa on ``y = 0``: ``x = cos(a) / (1 - sin(a))``.

    Computed as ``tan(pi/4 + a/2)``.  The angle ``pi/2`` is the point at
    infinity and raises :class:`~hypk.errors.PointAtInfinity`.
    """
    a = np.asarray(wrap_angle(alpha_bar), dtype=float)
    if np.any(np.isclose(a, 0.5 * np.pi, rtol=0.0, atol=1e-15)):
        raise PointAtInfinity("boundary angle pi/2 is the point at infinity")
    out = np.tan(0.25 * np.pi + 0.5 * a)
    return float(out) if out.ndim == 0 else out


def x_to_boundary_angle(x_bar):
    """Inverse of :func:`boundary_angle_to_x`.

    ``cos(a) = 2x / (1 + x^2)`` and ``sin(a) = (x^2 - 1) / (1 + x^2)``.
    """
    x = np.asarray(x_bar, dtype=float)
    out = np.arctan2(x * x - 1.0, 2.0 * x)
    return float(out) if out.ndim == 0 else out


def boundary_angle_jacobian(x_bar):
    """``d alpha / d x = 2 / (1 + x^2)``."""
    x = np.asarray(x_bar, dtype=float)
    out = 2.0 / (1.0 + x * x)
    return float(out) if out.ndim == 0 else out
