"""Configuration and result containers for the simulator."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from hypk.errors import DomainError

__all__ = ["SimConfig", "ExitSample", "ExitSamples", "SphereExitSamples", "ExitEstimate", "EmpiricalDistribution"]


@dataclass(frozen=True)
class SimConfig:
    """Monte Carlo settings.

    Parameters
    ----------
    dimension : int
        Dimension ``n`` of H^n (ignored by the sphere routines).
    step : float
        Time step ``h``.  With ``step_max`` set this is the smallest step,
        used at the boundaries.
    num_paths : int
        Number of independent paths.
    seed : int
        64-bit seed; path ``i`` draws from a stream derived from ``(seed, i)``.
    max_steps : int
        Per-path step cap; paths reaching it are counted as truncated.
    escape_cap : float
        Radius standing in for infinity in escape estimates.
    step_max : float or None
        Enables distance-adaptive stepping ``h = clip((d / kappa)^2, step,
        step_max)`` with ``d`` the distance to the nearest boundary.
    kappa : float
        Boundary-distance divisor for adaptive steps; also bounds steps near
        the poles of S^2.
    max_halvings : int
        Retries, each halving ``h``, after a step that makes ``y <= 0``.
    max_truncated_fraction : float
        Truncated-path fraction above which results are flagged.
    backend : str or None
        ``"numba"``, ``"numpy"`` or None for the ``HYPK_BACKEND`` default.
    """

    dimension: int = 2
    step: float = 1e-4
    num_paths: int = 10_000
    seed: int = 0
    max_steps: int = 10_000_000
    escape_cap: float = 10.0
    step_max: float | None = None
    kappa: float = 4.0
    max_halvings: int = 10
    max_truncated_fraction: float = 1e-3
    backend: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if int(self.dimension) != self.dimension or self.dimension < 2:
            raise DomainError(f"dimension must be an integer >= 2, got {self.dimension!r}")
        if not (0.0 < self.step <= 1e-2):
            raise DomainError(f"step must lie in (0, 1e-2], got {self.step!r}")
        if self.step_max is not None and not (self.step <= self.step_max <= 1e-2):
            raise DomainError(f"step_max must lie in [step, 1e-2], got {self.step_max!r}")
        if int(self.num_paths) < 1:
            raise DomainError("num_paths must be positive")
        if not (0 <= int(self.seed) < 2 ** 64):
            raise DomainError("seed must be a 64-bit unsigned integer")
        if int(self.max_steps) < 1:
            raise DomainError("max_steps must be positive")
        if self.max_steps * self.step > 1e7:
            raise DomainError("max_steps * step exceeds 1e7 time units")
        if not (self.escape_cap > 0) or not math.isfinite(self.escape_cap):
            raise DomainError("escape_cap must be finite and positive")
        if not (self.kappa > 0):
            raise DomainError("kappa must be positive")
        if int(self.max_halvings) < 0:
            raise DomainError("max_halvings must be >= 0")

    @property
    def adaptive(self) -> bool:
        return self.step_max is not None and self.step_max > self.step

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ExitSample:
    """One exit event.

    ``psi`` is the angle at ``O`` between start and exit, ``signed_angle`` the
    exit angle minus the start angle in H^2 (None otherwise), ``overshoot``
    the radius at detection minus the target radius.
    """

    psi: float
    signed_angle: float | None
    steps_taken: int
    overshoot: float


@dataclass
class ExitSamples:
    """Batch of exits from :func:`first_hit_sphere`, in path-index order.

    Truncated paths are excluded from the arrays and counted in
    ``truncated``.
    """

    psi: np.ndarray
    signed_angle: np.ndarray | None
    steps_taken: np.ndarray
    overshoot: np.ndarray
    path_index: np.ndarray
    truncated: int
    total: int

    def __len__(self) -> int:
        return int(self.psi.size)

    def __getitem__(self, i: int) -> ExitSample:
        sa = None if self.signed_angle is None else float(self.signed_angle[i])
        return ExitSample(float(self.psi[i]), sa, int(self.steps_taken[i]), float(self.overshoot[i]))

    @property
    def truncated_fraction(self) -> float:
        return self.truncated / self.total


@dataclass
class SphereExitSamples:
    """Batch of exits from :func:`first_hit_spherical_circle`.

    ``dphi`` is the exit longitude minus the start longitude in (-pi, pi].
    """

    dphi: np.ndarray
    steps_taken: np.ndarray
    overshoot: np.ndarray
    path_index: np.ndarray
    truncated: int
    total: int

    def __len__(self) -> int:
        return int(self.dphi.size)

    @property
    def truncated_fraction(self) -> float:
        return self.truncated / self.total


@dataclass(frozen=True)
class ExitEstimate:
    """Monte Carlo estimate of a first-exit probability.

    ``status`` is ``"ok"`` or ``"warning"`` (truncated fraction above the
    configured limit).  ``bias_bound`` is set by escape estimates.
    """

    estimate: float
    stderr: float
    ci_low: float
    ci_high: float
    hits: int
    trials: int
    truncated: int
    status: str
    bias_bound: float = 0.0


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Histogram of samples: ``counts[i]`` samples fell in ``[edges[i], edges[i+1])``."""

    bin_edges: np.ndarray
    counts: np.ndarray
    total: int

    def __post_init__(self):
        edges = np.asarray(self.bin_edges, dtype=float)
        counts = np.asarray(self.counts)
        if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
            raise DomainError("bin edges must be strictly increasing")
        if counts.shape != (edges.size - 1,) or np.any(counts < 0):
            raise DomainError("counts must be non-negative, one per bin")
        if int(counts.sum()) != int(self.total):
            raise DomainError("counts must sum to total")
        object.__setattr__(self, "bin_edges", edges)
        object.__setattr__(self, "counts", counts.astype(np.int64))
        object.__setattr__(self, "total", int(self.total))

    @classmethod
    def from_samples(cls, samples, bins: int, lo: float, hi: float) -> "EmpiricalDistribution":
        """Equal-width histogram on ``[lo, hi]`` (the right edge is closed)."""
        edges = np.linspace(lo, hi, int(bins) + 1)
        counts, _ = np.histogram(np.asarray(samples, dtype=float), bins=edges)
        return cls(edges, counts, int(counts.sum()))

    def density(self) -> np.ndarray:
        """Counts normalised to a probability density."""
        return self.counts / (self.total * np.diff(self.bin_edges))
