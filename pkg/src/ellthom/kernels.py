"""Backend selection for the numerical kernels.

The compiled module ``_ckernels`` is used when it was built; otherwise the numpy
versions in ``_kernels_py`` are used.  Setting ``ELLTHOM_PURE_PYTHON=1`` forces
the fallback.  Both backends expose the same functions.
"""

import os

from . import _kernels_py

NAMES = (
    "jet_mul",
    "jet_div",
    "sigma_values",
    "ochanine_values",
    "sigma_taylor",
    "ochanine_taylor",
    "sparse_mul",
)

_compiled = None
if os.environ.get("ELLTHOM_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _compiled
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"
_impl = _compiled if _compiled is not None else _kernels_py

jet_mul = _impl.jet_mul
jet_div = _impl.jet_div
sigma_values = _impl.sigma_values
ochanine_values = _impl.ochanine_values
sigma_taylor = _impl.sigma_taylor
ochanine_taylor = _impl.ochanine_taylor
sparse_mul = _impl.sparse_mul


def available_backends():
    """Map backend name to module for every backend importable in this process."""
    out = {"python": _kernels_py}
    if _compiled is not None:
        out["cython"] = _compiled
    else:
        try:
            from . import _ckernels
        except ImportError:
            pass
        else:
            out["cython"] = _ckernels
    return out
