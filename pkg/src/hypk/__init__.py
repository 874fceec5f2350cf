"""Hitting distributions and exit probabilities of Brownian motion on
hyperbolic spaces, the Poincare disc and the sphere.

Submodules: :mod:`hypk.geometry`, :mod:`hypk.specialfn`, :mod:`hypk.kernels`,
:mod:`hypk.exitprob`, :mod:`hypk.sim`, :mod:`hypk.stats` and :mod:`hypk.cli`.
"""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

__all__ = ["__version__"]
