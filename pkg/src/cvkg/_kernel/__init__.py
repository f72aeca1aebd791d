"""Index search kernel with a compiled fast path.

The hot operations (lexicographic range narrowing and row lookup over the
sorted index columns) exist twice: a Cython extension and a numpy fallback
with identical semantics. The compiled one is picked automatically when the
extension built; set CVKG_KERNEL=python or CVKG_KERNEL=compiled to force a
backend (the latter raises if the extension is missing).
"""

import os

from . import pyindex

_choice = os.environ.get("CVKG_KERNEL", "auto").strip().lower() or "auto"
if _choice not in {"auto", "compiled", "python"}:
    raise RuntimeError(f"CVKG_KERNEL must be auto, compiled or python, not {_choice!r}")

if _choice == "python":
    _impl = pyindex
    BACKEND = "python"
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        if _choice == "compiled":
            raise RuntimeError("CVKG_KERNEL=compiled but the extension is not built")
        _impl = pyindex
        BACKEND = "python"

narrow_range = _impl.narrow_range
find_positions = _impl.find_positions


def get_primitives(backend: str):
    """Return (narrow_range, find_positions) for an explicit backend name."""
    if backend == "python":
        return pyindex.narrow_range, pyindex.find_positions
    if backend == "compiled":
        from . import _speedups

        return _speedups.narrow_range, _speedups.find_positions
    raise ValueError(f"unknown kernel backend: {backend!r}")


from .index import IndexKernel, IndexReader  # noqa: E402  (needs BACKEND above)

__all__ = [
    "BACKEND",
    "IndexKernel",
    "IndexReader",
    "find_positions",
    "get_primitives",
    "narrow_range",
]
