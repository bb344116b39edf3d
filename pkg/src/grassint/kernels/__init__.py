"""Backend selection for the time-integration kernels.

The compiled extension is preferred; the numpy fallback is used when the
extension is missing or when GRASSINT_PURE_PYTHON is set in the environment.
"""

import os

if os.environ.get("GRASSINT_PURE_PYTHON"):
    from . import _fallback as _impl
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _fallback as _impl

BACKEND = _impl.BACKEND
integrate_burgers = _impl.integrate_burgers
integrate_rom = _impl.integrate_rom

__all__ = ["BACKEND", "integrate_burgers", "integrate_rom"]
