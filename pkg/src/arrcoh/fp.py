"""Prime-field kernel selection.

Prefers the compiled Cython kernel, falls back to the pure-Python twin.
Set ``ARRCOH_PURE=1`` to force the fallback (used by the benchmark and by
CI to exercise both paths).
"""

from __future__ import annotations

import os

if os.environ.get("ARRCOH_PURE"):
    from arrcoh import _fp_py as _impl
else:
    try:
        from arrcoh import _fp_c as _impl  # type: ignore[no-redef]
    except ImportError:
        from arrcoh import _fp_py as _impl  # type: ignore[no-redef]

fp_rank = _impl.fp_rank
fp_kernel = _impl.fp_kernel

BACKEND = "cython" if _impl.__name__.endswith("_fp_c") else "python"
