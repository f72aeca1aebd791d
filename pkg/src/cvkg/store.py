"""Indexed triple store over dictionary-encoded terms.

A TripleStore owns a term dictionary (text <-> dense int id, stable for the
process lifetime) and an IndexKernel holding the id rows. Reads can also go
through a StoreSnapshot, an immutable view safe to share across threads while
the store keeps ingesting; writers always act on the TripleStore itself.
"""

from __future__ import annotations

from typing import Iterable, Iterator

import numpy as np

from ._kernel import BACKEND, IndexKernel, IndexReader
from .terms import Term, Triple


class TermDict:
    """Bidirectional Term <-> id map; ids are dense and never reused."""

    __slots__ = ("_ids", "_terms")

    def __init__(self):
        self._ids: dict[Term, int] = {}
        self._terms: list[Term] = []

    def intern(self, term: Term) -> int:
        tid = self._ids.get(term)
        if tid is None:
            tid = len(self._terms)
            self._ids[term] = tid
            self._terms.append(term)
        return tid

    def lookup(self, term: Term) -> int | None:
        return self._ids.get(term)

    def term(self, tid: int) -> Term:
        return self._terms[tid]

    def __len__(self) -> int:
        return len(self._terms)


class _ReadOps:
    """Match/count operations shared by the store and its snapshots."""

    _dict: TermDict

    def _ids_for(self, s: Term | None, p: Term | None, o: Term | None):
        """Map a pattern to ids; returns None when a bound term is unknown."""
        out = []
        for t in (s, p, o):
            if t is None:
                out.append(None)
            else:
                tid = self._dict.lookup(t)
                if tid is None:
                    return None
                out.append(tid)
        return out

    def _read(self) -> IndexReader:
        raise NotImplementedError

    def match(self, s: Term | None = None, p: Term | None = None, o: Term | None = None) -> Iterator[Triple]:
        """Stream triples matching the bound positions, in index order."""
        ids = self._ids_for(s, p, o)
        if ids is None:
            return
        term = self._dict.term
        rs, rp, ro, rf = self._read().scan_flags(*ids)
        for i in range(len(rs)):
            yield Triple(term(rs[i]), term(rp[i]), term(ro[i]), inferred=bool(rf[i]))

    def count_match(self, s: Term | None = None, p: Term | None = None, o: Term | None = None) -> int:
        ids = self._ids_for(s, p, o)
        if ids is None:
            return 0
        return self._read().count(*ids)

    def contains(self, triple: Triple) -> bool:
        ids = self._ids_for(triple.subject, triple.predicate, triple.object)
        return ids is not None and self._read().find_one(*ids) >= 0

    # id-level access for the query engine
    def term_id(self, term: Term) -> int | None:
        return self._dict.lookup(term)

    def term(self, tid: int) -> Term:
        return self._dict.term(tid)

    def count_ids(self, s=None, p=None, o=None) -> int:
        return self._read().count(s, p, o)

    def scan_ids(self, s=None, p=None, o=None):
        return self._read().scan(s, p, o)

    def iter_all(self) -> Iterator[Triple]:
        yield from self.match()


class StoreSnapshot(_ReadOps):
    """Immutable published view; never sees writes that happen after it."""

    __slots__ = ("_dict", "_reader")

    def __init__(self, dictionary: TermDict, reader: IndexReader):
        self._dict = dictionary
        self._reader = reader

    def _read(self) -> IndexReader:
        return self._reader

    def size(self) -> int:
        return self._reader.n


class TripleStore(_ReadOps):
    def __init__(self, backend: str | None = None):
        self._dict = TermDict()
        self._kernel = IndexKernel(backend)

    @property
    def backend(self) -> str:
        return self._kernel.backend

    def _read(self) -> IndexReader:
        return self._kernel.reader()

    def size(self) -> int:
        return self._kernel.size()

    def insert(self, triple: Triple) -> bool:
        """Idempotent insert; an asserted copy clears an existing inferred flag."""
        d = self._dict
        return self._kernel.insert(
            d.intern(triple.subject),
            d.intern(triple.predicate),
            d.intern(triple.object),
            triple.inferred,
        )

    def insert_many(self, triples: Iterable[Triple]) -> int:
        """Bulk insert; returns how many triples were actually new."""
        asserted: list[tuple[int, int, int]] = []
        inferred: list[tuple[int, int, int]] = []
        intern = self._dict.intern
        for t in triples:
            row = (intern(t.subject), intern(t.predicate), intern(t.object))
            (inferred if t.inferred else asserted).append(row)
        added = 0
        # asserted first so a duplicate inside the inferred batch stays asserted
        for rows, flag in ((asserted, False), (inferred, True)):
            if rows:
                arr = np.array(rows, dtype=np.int64)
                added += self._kernel.insert_bulk(arr[:, 0], arr[:, 1], arr[:, 2], flag)
        return added

    def insert_ids(self, s, p, o, inferred: bool = False) -> int:
        """Bulk insert of pre-interned id arrays (hot ingestion path)."""
        return self._kernel.insert_bulk(s, p, o, inferred)

    def intern(self, term: Term) -> int:
        return self._dict.intern(term)

    def flag_of(self, triple: Triple) -> int:
        """0 asserted, 1 inferred, -1 absent."""
        ids = self._ids_for(triple.subject, triple.predicate, triple.object)
        if ids is None:
            return -1
        return self._kernel.flag_of(*ids)

    def retract_inferred(self) -> int:
        return self._kernel.remove_inferred()

    def snapshot(self) -> StoreSnapshot:
        return StoreSnapshot(self._dict, self._kernel.freeze())


def as_snapshot(store) -> StoreSnapshot:
    return store.snapshot() if isinstance(store, TripleStore) else store


__all__ = ["BACKEND", "StoreSnapshot", "TermDict", "TripleStore", "as_snapshot"]
