"""Pick the compiled kernels when available, the numpy fallback otherwise.

Set ``SLE_RAMAN_PURE_PYTHON=1`` to force the fallback.  :func:`select`
switches at run time; callers look kernels up through this module, so the
switch takes effect immediately.
"""

import os

from . import _fallback

try:
    from . import _kernels
except ImportError:  # extension not built
    _kernels = None

_NAMES = ("faddeeva_upper", "gauss_pole_overlap", "shifted_solve", "pole_overlap_integrand")


def available():
    return ("cython", "python") if _kernels is not None else ("python",)


def select(name):
    """Bind the kernel functions of backend ``name`` ("cython" or "python")."""
    global NAME
    if name == "cython":
        if _kernels is None:
            raise ImportError("compiled kernels are not built")
        mod = _kernels
    elif name == "python":
        mod = _fallback
    else:
        raise ValueError(f"unknown backend {name!r}")
    for n in _NAMES:
        globals()[n] = getattr(mod, n)
    NAME = name


NAME = None
if os.environ.get("SLE_RAMAN_PURE_PYTHON", "") not in ("", "0") or _kernels is None:
    select("python")
else:
    select("cython")
