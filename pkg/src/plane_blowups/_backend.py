"""Picks the compiled F_p kernels when built, else the NumPy fallback.

Set ``PLANE_BLOWUPS_PURE=1`` to force the fallback.
"""

import os

if os.environ.get("PLANE_BLOWUPS_PURE"):
    from ._fallback import rank_modp, rref_modp

    BACKEND = "python"
else:
    try:
        from ._kernels import rank_modp, rref_modp

        BACKEND = "compiled"
    except ImportError:  # extension not built
        from ._fallback import rank_modp, rref_modp

        BACKEND = "python"

__all__ = ["BACKEND", "rank_modp", "rref_modp"]
