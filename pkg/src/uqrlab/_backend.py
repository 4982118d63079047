"""Kernel backend selection.

The compiled extension (``uqrlab._kernels``) is preferred when importable;
the numpy fallback (``uqrlab._purepy``) is used otherwise.  Set
``UQRLAB_BACKEND=python`` to force the fallback or ``UQRLAB_BACKEND=compiled``
to require the extension (raising if it is missing).
"""

import os

from . import _purepy

_choice = os.environ.get("UQRLAB_BACKEND", "auto").lower()

if _choice not in ("auto", "python", "compiled"):
    raise RuntimeError(f"unknown UQRLAB_BACKEND value: {_choice!r}")

if _choice == "python":
    _impl = _purepy
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        if _choice == "compiled":
            raise
        _impl = _purepy
        BACKEND = "python"

zorich_eval3 = _impl.zorich_eval3
chaos_affine = _impl.chaos_affine
gauss_linking_sum = _impl.gauss_linking_sum
