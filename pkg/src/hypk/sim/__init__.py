"""Monte Carlo simulation of Brownian motion on H^n and S^2."""

from hypk.sim.api import (
    backend_module,
    escape_estimate,
    first_exit_annulus,
    first_hit_sphere,
    first_hit_spherical_circle,
    hbm_step,
    hbm_step_arrays,
    sbm_step,
    sbm_step_arrays,
    sphere_exit_estimate,
)
from hypk.sim.config import (
    EmpiricalDistribution,
    ExitEstimate,
    ExitSample,
    ExitSamples,
    SimConfig,
    SphereExitSamples,
)

__all__ = [
    "SimConfig",
    "ExitSample",
    "ExitSamples",
    "SphereExitSamples",
    "ExitEstimate",
    "EmpiricalDistribution",
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
