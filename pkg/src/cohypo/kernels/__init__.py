"""Kernel lane selection.

The compiled extension is preferred when importable; the numpy lane is the
fallback. COHYPO_KERNEL=py forces the fallback, COHYPO_KERNEL=fast makes a
missing extension an import error instead of a silent downgrade.
"""

import importlib
import os

from cohypo.kernels import py_kernels

_requested = os.environ.get("COHYPO_KERNEL", "auto").lower()
if _requested not in ("auto", "fast", "py"):
    raise ImportError(f"COHYPO_KERNEL must be auto, fast or py, not {_requested!r}")

_fast = None
if _requested in ("auto", "fast"):
    try:
        _fast = importlib.import_module("cohypo.kernels._fast")
    except ImportError:
        if _requested == "fast":
            raise
        _fast = None

BACKEND = "fast" if _fast is not None else "py"
_impl = _fast if _fast is not None else py_kernels

alias_sample_block = _impl.alias_sample_block
generate_walks_block = _impl.generate_walks_block
sgns_epoch = _impl.sgns_epoch


def get_backend(name):
    """Fetch a lane by name ('py' or 'fast'); raises if unavailable."""
    if name == "py":
        return py_kernels
    if name == "fast":
        if _fast is None:
            raise ImportError("compiled kernel lane is not built")
        return _fast
    raise ValueError(f"unknown kernel lane {name!r}")


def available_backends():
    return ("py", "fast") if _fast is not None else ("py",)
