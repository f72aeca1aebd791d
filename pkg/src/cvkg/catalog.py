"""Dataset, category and statistics views over a store snapshot (the data
behind /datasets, /categories and /statistics)."""

from __future__ import annotations

from bisect import bisect_right

from . import vocab
from .store import as_snapshot
from .terms import Term


def _literal(snap, subject: Term, prop: Term) -> str | None:
    for t in snap.match(subject, prop, None):
        return t.object.value
    return None


def _datasets(snap) -> list[Term]:
    return sorted(
        {t.subject for t in snap.match(None, vocab.RDF_TYPE, vocab.DATASET)}, key=lambda t: t.value
    )


def list_datasets(store) -> list[dict]:
    snap = as_snapshot(store)
    out = []
    for dataset in _datasets(snap):
        tasks = sorted(
            vocab.TASK_SLUG[t.object.value]
            for t in snap.match(dataset, vocab.SUPPORTS_TASK, None)
            if t.object.value in vocab.TASK_SLUG
        )
        entry = {
            "slug": _literal(snap, dataset, vocab.SLUG) or dataset.value,
            "name": _literal(snap, dataset, vocab.NAME) or "",
            "license": _literal(snap, dataset, vocab.LICENSE) or vocab.UNSPECIFIED_LICENSE.value,
            "tasks": tasks,
            "imageCount": snap.count_match(dataset, vocab.HAS_PART, None),
        }
        source_url = _literal(snap, dataset, vocab.SOURCE_URL)
        if source_url:
            entry["sourceUrl"] = source_url
        out.append(entry)
    return out


def dataset_by_slug(store, slug: str) -> Term | None:
    snap = as_snapshot(store)
    for dataset in _datasets(snap):
        if _literal(snap, dataset, vocab.SLUG) == slug:
            return dataset
    return None


def list_categories(store, dataset: str | None = None, task: str | None = None, q: str | None = None):
    """Concepts or raw labels in use, with annotation counts per dataset.

    Raises KeyError for an unknown dataset slug (the server maps it to 404).
    """
    snap = as_snapshot(store)
    if dataset is not None and dataset_by_slug(snap, dataset) is None:
        raise KeyError(dataset)

    entries: dict[tuple[str, str], dict] = {}
    for ds in _datasets(snap):
        slug = _literal(snap, ds, vocab.SLUG) or ds.value
        if dataset is not None and slug != dataset:
            continue
        for part in snap.match(ds, vocab.HAS_PART, None):
            for link in snap.match(part.object, vocab.HAS_ANNOTATION, None):
                ann = link.object
                kind = None
                for t in snap.match(ann, vocab.RDF_TYPE, None):
                    if not t.inferred and t.object.value in vocab.ANNOTATION_KIND:
                        kind = vocab.ANNOTATION_KIND[t.object.value]
                        break
                target = next(
                    (t.object for t in snap.match(ann, vocab.HAS_LABEL, None) if not t.inferred), None
                )
                if target is None:
                    continue
                key = (slug, target.value)
                entry = entries.get(key)
                if entry is None:
                    name = _literal(snap, target, vocab.NAME)
                    raw = _literal(snap, ann, vocab.SOURCE_LABEL_TEXT) or target.value
                    entry = entries[key] = {
                        "iri": target.value,
                        "name": name or raw,
                        "kind": "concept" if name else "raw",
                        "dataset": slug,
                        "annotationCount": 0,
                        "tasks": set(),
                    }
                entry["annotationCount"] += 1
                if kind:
                    entry["tasks"].add(kind)

    out = []
    for entry in entries.values():
        if task is not None and task not in entry["tasks"]:
            continue
        if q is not None and q.lower() not in entry["name"].lower():
            continue
        entry = dict(entry)
        entry["tasks"] = sorted(entry["tasks"])
        out.append(entry)
    out.sort(key=lambda e: (e["dataset"], e["name"], e["iri"]))
    return out


def statistics(store) -> dict:
    """Per-task and per-dataset counts of images, annotations and triples."""
    snap = as_snapshot(store)
    datasets = _datasets(snap)

    prefixes = []  # (dataset IRI, slug); sorted for prefix attribution
    per_dataset: dict[str, dict] = {}
    for ds in datasets:
        slug = _literal(snap, ds, vocab.SLUG) or ds.value
        tasks = sorted(
            vocab.TASK_SLUG[t.object.value]
            for t in snap.match(ds, vocab.SUPPORTS_TASK, None)
            if t.object.value in vocab.TASK_SLUG
        )
        images = snap.count_match(ds, vocab.HAS_PART, None)
        annotations = sum(
            snap.count_match(t.object, vocab.HAS_ANNOTATION, None)
            for t in snap.match(ds, vocab.HAS_PART, None)
        )
        per_dataset[slug] = {
            "name": _literal(snap, ds, vocab.NAME) or "",
            "tasks": tasks,
            "images": images,
            "annotations": annotations,
            "triples": 0,
        }
        prefixes.append((ds.value, slug))
    prefixes.sort()
    prefix_iris = [p for p, _ in prefixes]

    # attribute triples to datasets by entity IRI prefix (one pass over subjects)
    subjects = snap.scan_ids(None, None, None)[0]
    if len(subjects):
        import numpy as np

        uniq, counts = np.unique(subjects, return_counts=True)
        for tid, n in zip(uniq.tolist(), counts.tolist()):
            term = snap.term(tid)
            if term.kind != "iri":
                continue
            idx = bisect_right(prefix_iris, term.value) - 1
            if idx < 0:
                continue
            prefix, slug = prefixes[idx]
            if term.value == prefix or term.value.startswith(prefix + "/"):
                per_dataset[slug]["triples"] += int(n)

    per_task: dict[str, dict] = {
        kind: {"datasets": 0, "images": 0, "annotations": 0, "triples": 0} for kind in vocab.TASK_KINDS
    }
    for slug, info in per_dataset.items():
        for kind in info["tasks"]:
            bucket = per_task[kind]
            bucket["datasets"] += 1
            bucket["images"] += info["images"]
            bucket["annotations"] += info["annotations"]
            bucket["triples"] += info["triples"]

    return {
        "totals": {
            "datasets": len(datasets),
            "images": snap.count_match(None, vocab.RDF_TYPE, vocab.IMAGE),
            "annotations": snap.count_match(None, vocab.HAS_ANNOTATION, None),
            "triples": snap.size(),
        },
        "perTask": per_task,
        "perDataset": per_dataset,
    }
