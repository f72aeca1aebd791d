"""Label alignment and RDFS enrichment.

A taxonomy table maps dataset-local raw labels to shared concept IRIs and
declares subclass axioms between concepts. materialize() runs a semi-naive
fixpoint of three monotone rules over the store, flagging every derived
triple as inferred so enrichment can be retracted and re-run:

    R1  (A subClassOf B), (B subClassOf C)  =>  (A subClassOf C)
    R2  (x rdf:type A),   (A subClassOf B)  =>  (x rdf:type B)
    R3  (a cv:hasLabel A), (A subClassOf B) =>  (a cv:hasLabel B)

Reflexive subClassOf facts are never derived; the axiom graph is required to
be a DAG at load time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import vocab
from .errors import TaxonomyError
from .store import TripleStore
from .terms import Triple, iri, literal


@dataclass
class TaxonomyTable:
    alignments: dict[tuple[str, str], str] = field(default_factory=dict)  # (slug, rawLabel) -> concept
    axioms: list[tuple[str, str]] = field(default_factory=list)  # (subConcept, superConcept)
    concept_names: dict[str, str] = field(default_factory=dict)

    def lookup(self, dataset_slug: str, raw_label: str) -> str | None:
        return self.alignments.get((dataset_slug, raw_label))

    def to_json_dict(self) -> dict:
        return {
            "alignments": [
                {"dataset": d, "rawLabel": r, "concept": c} for (d, r), c in sorted(self.alignments.items())
            ],
            "axioms": [{"sub": a, "super": b} for a, b in self.axioms],
            "concepts": dict(sorted(self.concept_names.items())),
        }


def _find_cycle(edges: list[tuple[str, str]]) -> list[str] | None:
    adj: dict[str, list[str]] = {}
    for sub, sup in edges:
        adj.setdefault(sub, []).append(sup)
    WHITE, GRAY, BLACK = 0, 1, 2
    color: dict[str, int] = {}
    stack_path: list[str] = []

    def visit(node: str) -> list[str] | None:
        color[node] = GRAY
        stack_path.append(node)
        for nxt in adj.get(node, ()):
            c = color.get(nxt, WHITE)
            if c == GRAY:
                return stack_path[stack_path.index(nxt) :] + [nxt]
            if c == WHITE:
                found = visit(nxt)
                if found:
                    return found
        stack_path.pop()
        color[node] = BLACK
        return None

    for start in adj:
        if color.get(start, WHITE) == WHITE:
            found = visit(start)
            if found:
                return found
    return None


def load_taxonomy(text: str) -> TaxonomyTable:
    """Parse and validate a taxonomy JSON document."""
    try:
        doc = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as exc:
        raise TaxonomyError(f"json-syntax: {exc.msg} (line {exc.lineno})") from None
    if not isinstance(doc, dict):
        raise TaxonomyError("taxonomy document must be a JSON object")

    table = TaxonomyTable()
    table.concept_names = {str(k): str(v) for k, v in (doc.get("concepts") or {}).items()}

    for i, entry in enumerate(doc.get("alignments") or []):
        try:
            key = (str(entry["dataset"]), str(entry["rawLabel"]))
            concept = str(entry["concept"])
        except (KeyError, TypeError):
            raise TaxonomyError(f"alignments[{i}] needs dataset, rawLabel, concept") from None
        if key in table.alignments:
            raise TaxonomyError(f"duplicate-alignment: {key[0]}/{key[1]}")
        if concept not in table.concept_names:
            raise TaxonomyError(f"dangling concept {concept} in alignments[{i}]")
        table.alignments[key] = concept

    for i, entry in enumerate(doc.get("axioms") or []):
        try:
            sub, sup = str(entry["sub"]), str(entry["super"])
        except (KeyError, TypeError):
            raise TaxonomyError(f"axioms[{i}] needs sub and super") from None
        table.axioms.append((sub, sup))

    cycle = _find_cycle(table.axioms)
    if cycle:
        raise TaxonomyError("cycle-detected: " + " -> ".join(cycle))
    return table


def apply_taxonomy(table: TaxonomyTable, store: TripleStore) -> int:
    """Assert subclass axioms and concept names; idempotent, returns new count."""
    triples = [Triple(iri(sub), vocab.SUB_CLASS_OF, iri(sup)) for sub, sup in table.axioms]
    triples += [
        Triple(iri(concept), vocab.NAME, literal(name)) for concept, name in table.concept_names.items()
    ]
    return store.insert_many(triples)


def align_existing_annotations(table: TaxonomyTable, store: TripleStore) -> int:
    """Assert concept labels on already-ingested annotations whose
    (dataset slug, sourceLabelText) matches an alignment entry.

    Makes the CLI pipeline order-independent: running `taxonomy` after
    `ingest` converges to the same query results as aligning at map time.
    """
    by_slug: dict[str, dict[str, str]] = {}
    for (slug, raw), concept in table.alignments.items():
        by_slug.setdefault(slug, {})[raw] = concept

    triples = []
    for dataset in {t.subject for t in store.match(None, vocab.RDF_TYPE, vocab.DATASET)}:
        slugs = [t.object.value for t in store.match(dataset, vocab.SLUG, None)]
        if not slugs or slugs[0] not in by_slug:
            continue
        raw_map = by_slug[slugs[0]]
        for part in store.match(dataset, vocab.HAS_PART, None):
            for has_ann in store.match(part.object, vocab.HAS_ANNOTATION, None):
                ann = has_ann.object
                for src in store.match(ann, vocab.SOURCE_LABEL_TEXT, None):
                    concept = raw_map.get(src.object.value)
                    if concept:
                        triples.append(Triple(ann, vocab.HAS_LABEL, iri(concept)))
    return store.insert_many(triples)


def _subclass_closure(pairs: set[tuple[int, int]]) -> set[tuple[int, int]]:
    """Semi-naive transitive closure, reflexive pairs excluded."""
    all_pairs = set(pairs)
    fwd: dict[int, set[int]] = {}
    rev: dict[int, set[int]] = {}
    for a, b in all_pairs:
        fwd.setdefault(a, set()).add(b)
        rev.setdefault(b, set()).add(a)
    delta = set(all_pairs)
    while delta:
        derived = set()
        for a, b in delta:
            for c in fwd.get(b, ()):
                if a != c and (a, c) not in all_pairs:
                    derived.add((a, c))
            for z in rev.get(a, ()):
                if z != b and (z, b) not in all_pairs:
                    derived.add((z, b))
        for a, b in derived:
            fwd.setdefault(a, set()).add(b)
            rev.setdefault(b, set()).add(a)
        all_pairs |= derived
        delta = derived
    return all_pairs


def materialize(store: TripleStore) -> int:
    """Fixpoint of R1-R3; derived triples are flagged inferred. Returns the
    number of new triples (order of rule application cannot change it)."""
    sub_id = store.intern(vocab.SUB_CLASS_OF)
    type_id = store.intern(vocab.RDF_TYPE)
    label_id = store.intern(vocab.HAS_LABEL)

    s, _, o = store.scan_ids(None, sub_id, None)
    asserted_pairs = set(zip(s.tolist(), o.tolist()))
    closure = _subclass_closure(asserted_pairs)

    supers: dict[int, list[int]] = {}
    for a, b in closure:
        supers.setdefault(a, []).append(b)

    rows: list[tuple[int, int, int]] = []
    for a, b in closure - asserted_pairs:
        rows.append((a, sub_id, b))
    for prop_id in (type_id, label_id):
        for cls, ups in supers.items():
            subjects = store.scan_ids(None, prop_id, cls)[0]
            for x in subjects.tolist():
                for b in ups:
                    rows.append((x, prop_id, b))

    if not rows:
        return 0
    arr = np.array(rows, dtype=np.int64)
    return store.insert_ids(arr[:, 0], arr[:, 1], arr[:, 2], inferred=True)


def retract_inferred(store: TripleStore) -> int:
    """Remove exactly the triples flagged inferred."""
    return store.retract_inferred()
