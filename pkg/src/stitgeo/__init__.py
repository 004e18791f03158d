"""stitgeo: simulation and verification toolkit for STIT random tessellations.

The package simulates the spatio-temporal cell-division construction of
iteration-stable (STIT) tessellations and Poisson hyperplane tessellations in
2 and 3 dimensions, extracts birth-time-tracked maximal polytopes and maximal
segments, evaluates the corresponding analytic distributions in any
dimension, and statistically compares simulation against theory.
"""

__version__ = "0.1.0"

from .kernels import BACKEND as KERNEL_BACKEND
from .geometry import ConvexPolytope, Face, GeometryError, Window, clip, edges_with_tags
from .measure import (
    DirectionalDistribution,
    Hyperplane,
    MeasureError,
    lambda_of_body,
    lambda_of_direction,
    sample_hitting_hyperplane,
    width,
)
from .engine import (
    SplitEvent,
    Tessellation,
    iterate,
    rescale,
    simulate_pht,
    simulate_stit,
)

__all__ = [
    "__version__",
    "KERNEL_BACKEND",
    "ConvexPolytope",
    "Face",
    "GeometryError",
    "Window",
    "clip",
    "edges_with_tags",
    "DirectionalDistribution",
    "Hyperplane",
    "MeasureError",
    "lambda_of_body",
    "lambda_of_direction",
    "sample_hitting_hyperplane",
    "width",
    "SplitEvent",
    "Tessellation",
    "iterate",
    "rescale",
    "simulate_pht",
    "simulate_stit",
]
