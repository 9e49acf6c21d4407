"""Select the compiled kernels when available, else the numpy fallback.

Set ``RDSMETRIC_PURE_PYTHON=1`` to force the fallback.
"""

import os

from rdsmetric import _fallback

try:
    from rdsmetric import _core
except ImportError:  # extension not built
    _core = None

if _core is not None and not os.environ.get("RDSMETRIC_PURE_PYTHON"):
    _impl = _core
    BACKEND = "cython"
else:
    _impl = _fallback
    BACKEND = "python"

COMPILED_MAX_ORDER = 3


def available():
    """Names of the importable backends."""
    return ["cython", "python"] if _core is not None else ["python"]


def get(name):
    if name == "cython":
        if _core is None:
            raise RuntimeError("compiled backend is not built")
        return _core
    if name == "python":
        return _fallback
    raise ValueError(f"unknown backend {name!r}")


def gaussian_gram(x, y, gamma):
    return _impl.gaussian_gram(x, y, float(gamma))


def l1_mean(x1, x2, gamma):
    return _impl.l1_mean(x1, x2, float(gamma))


def enum_l(g, m):
    if m > COMPILED_MAX_ORDER:
        return _fallback.enum_l(g, m)
    return _impl.enum_l(g, m)


def enum_l_tilde(g, m):
    if m > COMPILED_MAX_ORDER:
        return _fallback.enum_l_tilde(g, m)
    return _impl.enum_l_tilde(g, m)
