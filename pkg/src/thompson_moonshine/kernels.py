"""Select the compiled kernels when available, else the pure-Python ones.

Set MOONSHINE_PURE_PYTHON=1 to force the fallback.
"""
import os

from . import _kernels_py as python_backend

compiled_backend = None
if not os.environ.get("MOONSHINE_PURE_PYTHON"):
    try:
        from . import _kernels as compiled_backend  # type: ignore[no-redef]
    except ImportError:
        compiled_backend = None

active = compiled_backend if compiled_backend is not None else python_backend
BACKEND = active.BACKEND

plus_space_block = active.plus_space_block
salie_sum = active.salie_sum
sqrt_mod_all = active.sqrt_mod_all
kloosterman_direct = active.kloosterman_direct
