"""Kernel backend selection.

The hot numeric kernels exist twice: jitted scalar loops under numba and a
vectorized pure-numpy fallback.  ``TAILSETS_BACKEND`` picks one explicitly
("numba" or "numpy"); unset or "auto" prefers numba when it imports.
"""

from __future__ import annotations

import os

_choice = os.environ.get("TAILSETS_BACKEND", "auto").strip().lower()

if _choice in ("", "auto"):
    try:
        from . import _kernels_numba as kernels
    except ImportError:
        from . import _kernels_numpy as kernels
elif _choice == "numba":
    from . import _kernels_numba as kernels
elif _choice == "numpy":
    from . import _kernels_numpy as kernels
else:
    raise RuntimeError(
        f"TAILSETS_BACKEND={_choice!r} not understood (use 'numba', 'numpy' or 'auto')"
    )


def backend_name() -> str:
    """Name of the active kernel backend."""
    return kernels.BACKEND_NAME
