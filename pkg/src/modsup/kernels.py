"""Backend selection for the graph kernels.

The compiled extension is preferred when importable; the pure-Python twin is
the fallback. ``MODSUP_KERNELS=pure`` or ``=compiled`` forces a backend
(forcing ``compiled`` raises if the extension is unavailable, so CI cannot
silently benchmark the wrong thing).
"""

from __future__ import annotations

import os

_choice = os.environ.get("MODSUP_KERNELS", "").strip().lower()

if _choice == "pure":
    from . import _pykernels as _impl
elif _choice == "compiled":
    from . import _ckernels as _impl  # type: ignore[no-redef]
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:
        from . import _pykernels as _impl

BACKEND: str = _impl.BACKEND

reachable = _impl.reachable
coreachable = _impl.coreachable
product_pair = _impl.product_pair
subset_project = _impl.subset_project
refine_partition = _impl.refine_partition


def backend_name() -> str:
    return BACKEND
