"""Kernel backend selection.

The hot loops exist twice: a Cython extension (``_native``) and a pure
Python twin (``pyfallback``) with identical semantics, bit for bit. The
compiled backend is preferred when importable; set SWARMBENCH_PURE_PYTHON=1
to force the fallback. ``set_backend`` exists so tests and the backend
benchmark can switch within one process; engine code always resolves the
backend through ``active()`` at call time.
"""

import importlib
import os

from swarmbench._kernels import pyfallback

_native = None
if not os.environ.get("SWARMBENCH_PURE_PYTHON"):
    try:
        _native = importlib.import_module("swarmbench._kernels._native")
    except ImportError:
        _native = None

_BACKENDS = {"python": pyfallback}
if _native is not None:
    _BACKENDS["native"] = _native

_active_name = "native" if _native is not None else "python"


def active():
    """The currently selected backend module."""
    return _BACKENDS[_active_name]


def backend_name():
    return _active_name


def available_backends():
    return sorted(_BACKENDS)


def set_backend(name):
    global _active_name
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} not available "
                         f"(have: {', '.join(sorted(_BACKENDS))})")
    _active_name = name
