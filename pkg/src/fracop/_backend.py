"""Backend selection: compiled kernels if available, pure Python otherwise.

Set ``FRACOP_PURE_PYTHON=1`` to force the pure-Python kernels even when the
compiled extension is importable (used by the backend-parity tests and the
benchmark).
"""

import os

if os.environ.get("FRACOP_PURE_PYTHON", "").strip() not in ("", "0"):
    from fracop import _kernels_py as kernels
else:
    try:
        from fracop import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        from fracop import _kernels_py as kernels  # type: ignore[no-redef]

BACKEND = "compiled" if kernels.COMPILED else "pure-python"
