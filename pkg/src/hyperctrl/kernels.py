"""Backend selection for the prime-field kernels.

The compiled extension is used when importable; setting the environment
variable ``HYPERCTRL_PURE=1`` forces the pure-Python fallback.
"""

import os

BACKEND = "python"

if os.environ.get("HYPERCTRL_PURE", "") not in ("", "0"):
    from ._kernels_py import ModEchelon, eval_packed, rank_mod
else:
    try:
        from ._kernels import ModEchelon, eval_packed, rank_mod

        BACKEND = "cython"
    except ImportError:
        from ._kernels_py import ModEchelon, eval_packed, rank_mod

__all__ = ["BACKEND", "ModEchelon", "eval_packed", "rank_mod"]
