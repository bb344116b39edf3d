"""Geodesic interpolation of POD subspaces with a ROM benchmark pipeline."""

from . import interp, io, kernels, manifold, pipeline, pod, testbed  # noqa: F401
from .kernels import BACKEND  # noqa: F401

__version__ = "0.1.0"
