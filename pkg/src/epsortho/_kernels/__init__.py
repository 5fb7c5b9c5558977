"""Kernel backend selection.

The compiled extension is used when it imports; set ``EPSORTHO_PURE_PYTHON=1``
to force the Python fallback.
"""

import os

from . import _pykernels as python

if os.environ.get("EPSORTHO_PURE_PYTHON", "") not in ("", "0"):
    compiled = None
else:
    try:
        from . import _ckernels as compiled
    except ImportError:  # extension not built
        compiled = None

_active = compiled if compiled is not None else python
BACKEND = "compiled" if compiled is not None else "python"

grow_rings = _active.grow_rings
polygon_mask = _active.polygon_mask

__all__ = ["BACKEND", "compiled", "python", "grow_rings", "polygon_mask"]
