"""Grid-geometry kernels with backend selection at import time.

The compiled extension is preferred when present; the pure-Python
reference is the fallback.  Set ``TREELAYOUT_KERNELS=python`` or
``=cython`` to force a backend (forcing cython raises if the extension
was not built).  Both backends are bit-identical; ``BACKEND`` names the
one in use.
"""

from __future__ import annotations

import os

from treelayout.kernels import _ref

_forced = os.environ.get("TREELAYOUT_KERNELS", "").strip().lower()

if _forced == "python":
    _impl = _ref
elif _forced == "cython":
    from treelayout.kernels import _fast as _impl  # type: ignore[no-redef]
else:
    try:
        from treelayout.kernels import _fast as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _ref

BACKEND: str = _impl.BACKEND
rect_intersection_area = _impl.rect_intersection_area
rasterize_codes = _impl.rasterize_codes
free_cells_on_side = _impl.free_cells_on_side
first_overlap = _impl.first_overlap

__all__ = [
    "BACKEND",
    "rect_intersection_area",
    "rasterize_codes",
    "free_cells_on_side",
    "first_overlap",
]
