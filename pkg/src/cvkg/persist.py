"""Store directory layout used between CLI steps and by the server.

A store directory holds the canonical N-Triples dumps (asserted and inferred
kept apart so enrichment provenance survives a reload) plus a small JSON meta
file with the base IRI, dataset descriptors and the applied taxonomy.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from . import ntriples
from .mapping import default_base_iri
from .store import TripleStore
from .taxonomy import TaxonomyTable
from .vocab import bootstrap_schema

ASSERTED_FILE = "asserted.nt"
INFERRED_FILE = "inferred.nt"
META_FILE = "meta.json"


@dataclass
class StoreMeta:
    base_iri: str = ""
    descriptors: dict[str, dict] = field(default_factory=dict)
    taxonomy: TaxonomyTable | None = None

    def to_json_dict(self) -> dict:
        return {
            "baseIri": self.base_iri,
            "descriptors": self.descriptors,
            "taxonomy": self.taxonomy.to_json_dict() if self.taxonomy else None,
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "StoreMeta":
        taxonomy = None
        if doc.get("taxonomy"):
            t = doc["taxonomy"]
            taxonomy = TaxonomyTable(
                alignments={(a["dataset"], a["rawLabel"]): a["concept"] for a in t.get("alignments", [])},
                axioms=[(x["sub"], x["super"]) for x in t.get("axioms", [])],
                concept_names=dict(t.get("concepts", {})),
            )
        return cls(
            base_iri=doc.get("baseIri") or default_base_iri(),
            descriptors=dict(doc.get("descriptors", {})),
            taxonomy=taxonomy,
        )


def store_exists(path: Path) -> bool:
    return (Path(path) / META_FILE).is_file()


def load_store(path: Path) -> tuple[TripleStore, StoreMeta]:
    """Load (or initialize) a store directory; the schema is always present."""
    path = Path(path)
    store = TripleStore()
    meta = StoreMeta(base_iri=default_base_iri())
    meta_file = path / META_FILE
    if meta_file.is_file():
        meta = StoreMeta.from_json_dict(json.loads(meta_file.read_text(encoding="utf-8")))
        asserted = path / ASSERTED_FILE
        if asserted.is_file():
            ntriples.load(asserted.read_text(encoding="utf-8"), mark_inferred=False, store=store)
        inferred = path / INFERRED_FILE
        if inferred.is_file():
            ntriples.load(inferred.read_text(encoding="utf-8"), mark_inferred=True, store=store)
    bootstrap_schema(store)
    return store, meta


def save_store(path: Path, store: TripleStore, meta: StoreMeta) -> None:
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    asserted_lines = []
    inferred_lines = []
    for t in store.iter_all():
        line = f"{ntriples.term_text(t.subject)} {ntriples.term_text(t.predicate)} {ntriples.term_text(t.object)} .\n"
        (inferred_lines if t.inferred else asserted_lines).append(line)
    (path / ASSERTED_FILE).write_text("".join(sorted(asserted_lines)), encoding="utf-8")
    (path / INFERRED_FILE).write_text("".join(sorted(inferred_lines)), encoding="utf-8")
    (path / META_FILE).write_text(
        json.dumps(meta.to_json_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
