"""Dictionary-encoded triple index: three sorted orderings plus a write buffer.

Triples are rows of int64 term ids kept in three lexicographic orderings
(subject-predicate-object, predicate-object-subject, object-subject-predicate)
so that any bound prefix of a match pattern maps to one binary-searchable
range. A per-row uint8 flag (0 = asserted, 1 = inferred) rides along with the
SPO ordering.

Writes go to a small pending dict and are merged into fresh arrays on read or
past a threshold; readers handed out by freeze() keep referencing the arrays
they were built over, so published snapshots never observe later writes.
"""

from __future__ import annotations

import numpy as np

from . import BACKEND, get_primitives

_EMPTY_I64 = np.empty(0, dtype=np.int64)
_EMPTY_U8 = np.empty(0, dtype=np.uint8)

# scan output layout: position of the s/p/o column inside each ordering's cols
_PERM_SPO = (0, 1, 2)
_PERM_POS = (2, 0, 1)
_PERM_OSP = (1, 2, 0)

FLUSH_THRESHOLD = 200_000


class IndexReader:
    """Immutable view of one merged generation of the index."""

    __slots__ = ("_narrow", "_findpos", "spo", "pos", "osp", "flags", "n", "shared")

    def __init__(self, spo, pos, osp, flags, narrow, findpos):
        self.spo = spo
        self.pos = pos
        self.osp = osp
        self.flags = flags
        self.n = len(spo[0])
        self.shared = False
        self._narrow = narrow
        self._findpos = findpos

    @classmethod
    def build(cls, s, p, o, flags, narrow, findpos) -> "IndexReader":
        """Build all three orderings from rows already sorted by (s, p, o)."""
        pos_order = np.lexsort((s, o, p))
        osp_order = np.lexsort((p, s, o))
        pos = (
            np.ascontiguousarray(p[pos_order]),
            np.ascontiguousarray(o[pos_order]),
            np.ascontiguousarray(s[pos_order]),
        )
        osp = (
            np.ascontiguousarray(o[osp_order]),
            np.ascontiguousarray(s[osp_order]),
            np.ascontiguousarray(p[osp_order]),
        )
        spo = tuple(np.ascontiguousarray(c) for c in (s, p, o))
        return cls(spo, pos, osp, np.ascontiguousarray(flags), narrow, findpos)

    @classmethod
    def empty(cls, narrow, findpos) -> "IndexReader":
        e = (_EMPTY_I64, _EMPTY_I64, _EMPTY_I64)
        return cls(e, e, e, _EMPTY_U8, narrow, findpos)

    def _plan(self, s, p, o):
        """Pick the ordering whose prefix covers the bound positions."""
        if s is not None:
            if p is not None:
                if o is not None:
                    return self.spo, (s, p, o), 3, _PERM_SPO
                return self.spo, (s, p, 0), 2, _PERM_SPO
            if o is not None:
                return self.osp, (o, s, 0), 2, _PERM_OSP
            return self.spo, (s, 0, 0), 1, _PERM_SPO
        if p is not None:
            if o is not None:
                return self.pos, (p, o, 0), 2, _PERM_POS
            return self.pos, (p, 0, 0), 1, _PERM_POS
        if o is not None:
            return self.osp, (o, 0, 0), 1, _PERM_OSP
        return self.spo, (0, 0, 0), 0, _PERM_SPO

    def count(self, s=None, p=None, o=None) -> int:
        cols, keys, nbound, _ = self._plan(s, p, o)
        lo, hi = self._narrow(cols[0], cols[1], cols[2], keys[0], keys[1], keys[2], nbound)
        return hi - lo

    def scan(self, s=None, p=None, o=None):
        """Matching rows as (s, p, o) id arrays, in the chosen index order."""
        cols, keys, nbound, perm = self._plan(s, p, o)
        lo, hi = self._narrow(cols[0], cols[1], cols[2], keys[0], keys[1], keys[2], nbound)
        return cols[perm[0]][lo:hi], cols[perm[1]][lo:hi], cols[perm[2]][lo:hi]

    def scan_flags(self, s=None, p=None, o=None):
        """Like scan() but with the per-row inferred flags as a fourth array."""
        cols, keys, nbound, perm = self._plan(s, p, o)
        lo, hi = self._narrow(cols[0], cols[1], cols[2], keys[0], keys[1], keys[2], nbound)
        if cols is self.spo:
            flags = self.flags[lo:hi]
            return cols[0][lo:hi], cols[1][lo:hi], cols[2][lo:hi], flags
        rs = cols[perm[0]][lo:hi]
        rp = cols[perm[1]][lo:hi]
        ro = cols[perm[2]][lo:hi]
        idx = self._findpos(
            self.spo[0], self.spo[1], self.spo[2],
            np.ascontiguousarray(rs), np.ascontiguousarray(rp), np.ascontiguousarray(ro),
        )
        return rs, rp, ro, self.flags[idx]

    def find_one(self, s: int, p: int, o: int) -> int:
        """SPO row index of an exact triple, or -1."""
        lo, hi = self._narrow(self.spo[0], self.spo[1], self.spo[2], s, p, o, 3)
        return lo if lo < hi else -1

    def full_columns(self):
        """All rows in SPO order: (s, p, o, flags)."""
        return self.spo[0], self.spo[1], self.spo[2], self.flags


class IndexKernel:
    """Mutable triple index; hands out immutable IndexReader snapshots."""

    def __init__(self, backend: str | None = None, flush_threshold: int = FLUSH_THRESHOLD):
        self.backend = backend or BACKEND
        self._narrow, self._findpos = get_primitives(self.backend)
        self._reader = IndexReader.empty(self._narrow, self._findpos)
        self._pending: dict[tuple[int, int, int], int] = {}
        self._flush_threshold = flush_threshold

    # -- writes -----------------------------------------------------------

    def insert(self, s: int, p: int, o: int, inferred: bool = False) -> bool:
        """Insert one row. Returns False when already present (asserted wins)."""
        flag = 1 if inferred else 0
        key = (s, p, o)
        pending = self._pending
        if key in pending:
            if flag < pending[key]:
                pending[key] = flag
            return False
        row = self._reader.find_one(s, p, o)
        if row >= 0:
            if flag == 0 and self._reader.flags[row] == 1:
                self._clear_flag(row)
            return False
        pending[key] = flag
        if len(pending) >= self._flush_threshold:
            self.flush()
        return True

    def insert_bulk(self, s, p, o, inferred: bool = False) -> int:
        """Merge int64 id arrays in one pass; returns the number of new rows."""
        self.flush()
        if len(s) == 0:
            return 0
        flags = np.full(len(s), 1 if inferred else 0, dtype=np.uint8)
        return self._merge(
            np.asarray(s, dtype=np.int64),
            np.asarray(p, dtype=np.int64),
            np.asarray(o, dtype=np.int64),
            flags,
        )

    def remove_inferred(self) -> int:
        """Drop every row flagged inferred; returns how many were removed."""
        self.flush()
        r = self._reader
        keep = r.flags == 0
        removed = int(r.n - np.count_nonzero(keep))
        if removed:
            s, p, o, flags = r.full_columns()
            self._reader = IndexReader.build(
                s[keep], p[keep], o[keep], flags[keep], self._narrow, self._findpos
            )
        return removed

    def _clear_flag(self, row: int):
        r = self._reader
        if r.shared:
            # copy-on-write so published snapshots keep their flag view
            clone = IndexReader(r.spo, r.pos, r.osp, r.flags.copy(), self._narrow, self._findpos)
            self._reader = r = clone
        r.flags[row] = 0

    def _merge(self, qs, qp, qo, qflags) -> int:
        r = self._reader
        base_s, base_p, base_o, base_f = r.full_columns()
        nb = len(base_s)
        all_s = np.concatenate([base_s, qs])
        all_p = np.concatenate([base_p, qp])
        all_o = np.concatenate([base_o, qo])
        all_f = np.concatenate([base_f, qflags])
        src = np.zeros(len(all_s), dtype=np.uint8)
        src[nb:] = 1
        order = np.lexsort((all_o, all_p, all_s))
        ss, pp, oo = all_s[order], all_p[order], all_o[order]
        ff, sf = all_f[order], src[order]
        run_start = np.empty(len(ss), dtype=bool)
        run_start[0] = True
        run_start[1:] = (ss[1:] != ss[:-1]) | (pp[1:] != pp[:-1]) | (oo[1:] != oo[:-1])
        firsts = np.flatnonzero(run_start)
        # asserted (0) wins within a duplicate run; a run with no base row is new
        run_flags = np.minimum.reduceat(ff, firsts)
        run_src = np.minimum.reduceat(sf, firsts)
        added = int(np.count_nonzero(run_src))
        self._reader = IndexReader.build(
            ss[firsts], pp[firsts], oo[firsts], run_flags, self._narrow, self._findpos
        )
        return added

    def flush(self):
        if not self._pending:
            return
        items = sorted(self._pending.items())
        self._pending = {}
        keys = np.array([k for k, _ in items], dtype=np.int64).reshape(len(items), 3)
        flags = np.fromiter((f for _, f in items), dtype=np.uint8, count=len(items))
        self._merge(keys[:, 0].copy(), keys[:, 1].copy(), keys[:, 2].copy(), flags)

    # -- reads ------------------------------------------------------------

    def reader(self) -> IndexReader:
        self.flush()
        return self._reader

    def freeze(self) -> IndexReader:
        """Publish the current state as an immutable snapshot."""
        self.flush()
        self._reader.shared = True
        return self._reader

    def size(self) -> int:
        return self._reader.n + len(self._pending)

    def contains(self, s: int, p: int, o: int) -> bool:
        return (s, p, o) in self._pending or self._reader.find_one(s, p, o) >= 0

    def flag_of(self, s: int, p: int, o: int) -> int:
        """0 asserted, 1 inferred, -1 absent."""
        f = self._pending.get((s, p, o))
        if f is not None:
            return f
        row = self._reader.find_one(s, p, o)
        return int(self._reader.flags[row]) if row >= 0 else -1

    def count(self, s=None, p=None, o=None) -> int:
        return self.reader().count(s, p, o)

    def scan(self, s=None, p=None, o=None):
        return self.reader().scan(s, p, o)

    def scan_flags(self, s=None, p=None, o=None):
        return self.reader().scan_flags(s, p, o)
