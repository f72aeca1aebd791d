"""Pure-numpy search primitives (fallback when the extension is not built).

Both functions operate on three parallel int64 columns sorted
lexicographically by (c0, c1, c2).
"""

import numpy as np


def narrow_range(c0, c1, c2, k0, k1, k2, nbound):
    """Half-open row range whose first `nbound` columns equal (k0, k1, k2)."""
    lo, hi = 0, len(c0)
    for col, key in ((c0, k0), (c1, k1), (c2, k2))[:nbound]:
        seg = col[lo:hi]
        new_lo = lo + int(np.searchsorted(seg, key, side="left"))
        hi = lo + int(np.searchsorted(seg, key, side="right"))
        lo = new_lo
        if lo >= hi:
            return lo, lo
    return lo, hi


def find_positions(c0, c1, c2, q0, q1, q2):
    """Row index of each query triple in the sorted columns, -1 when absent."""
    out = np.empty(len(q0), dtype=np.int64)
    for i in range(len(q0)):
        lo, hi = narrow_range(c0, c1, c2, q0[i], q1[i], q2[i], 3)
        out[i] = lo if lo < hi else -1
    return out
