"""Kernel backend selection.

The compiled Cython kernels are preferred when the extension built; the pure
NumPy/Python implementations are the fallback. Set SWITCHSTAB_BACKEND=python
to force the fallback (used by the benchmark and the equivalence tests).
"""

from __future__ import annotations

import os

_requested = os.environ.get("SWITCHSTAB_BACKEND", "").lower()
if _requested not in ("", "python", "cython"):
    raise ImportError(
        f"SWITCHSTAB_BACKEND={_requested!r} not recognized; "
        "use 'python' or 'cython'"
    )

if _requested == "python":
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        if _requested == "cython":
            raise  # explicitly requested, so do not fall back silently
        from . import _kernels_py as _impl

        BACKEND = "python"

sample_modes = _impl.sample_modes
sample_gaps = _impl.sample_gaps
fill_sigma = _impl.fill_sigma
closed_loop = _impl.closed_loop


def backend_name() -> str:
    """Which kernel implementation is active: "cython" or "python"."""
    return BACKEND
