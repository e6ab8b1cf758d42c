"""Backend selector for the numerical hot loops.

Tries the compiled Cython extension first and falls back to the numpy
implementation.  Set MODITER_PURE_PYTHON=1 to force the fallback (used by
the backend-equivalence tests and as an escape hatch on platforms where
the extension fails to build).
"""

from __future__ import annotations

import os

if os.environ.get("MODITER_PURE_PYTHON") == "1":
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"

horner_many = _impl.horner_many
conv_complex = _impl.conv_complex
