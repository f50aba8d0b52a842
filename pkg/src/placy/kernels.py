"""Backend selection for the hot kernels.

The compiled ``_core`` extension is used when it imports; otherwise the numpy
implementation in ``_pykernels`` takes over.  Set ``PLACY_BACKEND=python`` to
force the fallback.
"""

import os
import types

from . import _pykernels

__all__ = ["BACKEND", "window_fits", "ou_path", "get_backend", "available_backends"]


def _load_compiled():
    try:
        from . import _core
    except ImportError:
        return None
    return _core


_compiled = _load_compiled()


def available_backends():
    names = ["python"]
    if _compiled is not None:
        names.insert(0, "cython")
    return names


def get_backend(name: str) -> types.ModuleType:
    """Return the kernel module for ``name`` ("cython" or "python")."""
    if name == "python":
        return _pykernels
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled extension placy._core is not built")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


if os.environ.get("PLACY_BACKEND", "").lower() == "python" or _compiled is None:
    BACKEND = "python"
else:
    BACKEND = "cython"

_impl = get_backend(BACKEND)
window_fits = _impl.window_fits
ou_path = _impl.ou_path
