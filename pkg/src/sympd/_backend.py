"""Backend selection: compiled extension kernels with pure-numpy fallback.

Set ``SYMPD_BACKEND=python`` to force the fallback, ``=compiled`` to require
the extension (ImportError if missing).  Default is ``auto``.
"""

from __future__ import annotations

import os

from . import _kernels_py

_choice = os.environ.get("SYMPD_BACKEND", "auto").lower()

if _choice == "python":
    kernels = _kernels_py
elif _choice == "compiled":
    from . import _kernels as kernels  # type: ignore[no-redef]
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        kernels = _kernels_py


def backend_name() -> str:
    """Either ``"compiled"`` or ``"python"``."""
    return "compiled" if kernels.is_compiled() else "python"
