"""Brute-force oracles over truncated rings and finite fields.

The hot loops live in a compiled extension; a pure-Python twin with the same
contracts is used when the extension is not built.  ``BACKEND`` names the one
in use and ``SO_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import os

if os.environ.get("SO_PURE_PYTHON") == "1":
    from . import _fallback as kernels

    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels

        BACKEND = "cython"
    except ImportError:  # extension not compiled
        from . import _fallback as kernels

        BACKEND = "python"

__all__ = ["kernels", "BACKEND"]
