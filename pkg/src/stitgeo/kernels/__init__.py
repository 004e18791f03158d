"""Geometry kernel backend selection.

The compiled Cython kernel is preferred when present; the pure-Python kernel
in :mod:`stitgeo.kernels.pycore` is the reference implementation and the
fallback.  Both expose the same functions on the same plain-tuple cell
representation.  Set ``STITGEO_KERNEL=python`` or ``=compiled`` to force a
backend (``compiled`` raises if the extension is missing).
"""

import os

from .pycore import KernelError

_choice = os.environ.get("STITGEO_KERNEL", "auto")
if _choice not in ("auto", "python", "compiled"):
    raise ImportError(f"STITGEO_KERNEL must be auto|python|compiled, got {_choice!r}")

if _choice == "python":
    from . import pycore as impl
else:
    try:
        from . import _ckern as impl  # type: ignore[attr-defined]
    except ImportError:
        if _choice == "compiled":
            raise
        from . import pycore as impl

BACKEND = impl.BACKEND

support_2d = impl.support_2d
area_2d = impl.area_2d
perimeter_2d = impl.perimeter_2d
diameter_2d = impl.diameter_2d
discrete_rate_2d = impl.discrete_rate_2d
clip_2d = impl.clip_2d
support_3d = impl.support_3d
diameter_3d = impl.diameter_3d
discrete_rate_3d = impl.discrete_rate_3d
volume_3d = impl.volume_3d
facet_area_3d = impl.facet_area_3d
mean_width_3d = impl.mean_width_3d
clip_3d = impl.clip_3d

__all__ = [
    "BACKEND",
    "KernelError",
    "support_2d",
    "area_2d",
    "perimeter_2d",
    "diameter_2d",
    "discrete_rate_2d",
    "clip_2d",
    "support_3d",
    "diameter_3d",
    "discrete_rate_3d",
    "volume_3d",
    "facet_area_3d",
    "mean_width_3d",
    "clip_3d",
]
