"""Fixed rules turning a DatasetBundle into triples.

IRI templates:
    dataset     {base}/dataset/{slug}
    image       {base}/dataset/{slug}/image/{localId}
    annotation  {base}/dataset/{slug}/ann/{localId}
    box         {base}/dataset/{slug}/ann/{localId}/box
    local label {base}/dataset/{slug}/label/{labelSlug}

Emission is a pure function of bundle shape, so the produced triple count has
a closed form (expected_triple_count): per dataset 4 + |tasks| + (1 if
sourceUrl), per image 6 + |attributes|, per classification/relationship
annotation 4, per detection/segmentation annotation 10.

cv:hasLabel points at the taxonomy-aligned concept IRI when the alignment
table knows (datasetSlug, rawLabel), otherwise at a dataset-local label IRI;
cv:sourceLabelText always carries the raw text.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterator
from urllib.parse import quote

from . import vocab
from .bundle import AnnotationRecord, DatasetBundle, ImageRecord
from .errors import DataError
from .store import TripleStore
from .terms import Triple, decimal_literal, integer_literal, iri, literal

if TYPE_CHECKING:
    from .taxonomy import TaxonomyTable

DEFAULT_BASE_IRI = "http://vision.semkg.org/data"
BASE_IRI_ENV = "VKG_BASE_IRI"


def default_base_iri() -> str:
    return os.environ.get(BASE_IRI_ENV, "").strip() or DEFAULT_BASE_IRI


def label_slug(raw_label: str) -> str:
    slug = re.sub(r"[^a-z0-9]+", "-", raw_label.lower()).strip("-")
    return slug or "label"


@dataclass(frozen=True)
class MappingRules:
    base_iri: str = DEFAULT_BASE_IRI

    def dataset_iri(self, slug: str) -> str:
        return f"{self.base_iri}/dataset/{slug}"

    def image_iri(self, slug: str, local_id: str) -> str:
        return f"{self.dataset_iri(slug)}/image/{quote(local_id, safe='')}"

    def annotation_iri(self, slug: str, local_id: str) -> str:
        return f"{self.dataset_iri(slug)}/ann/{quote(local_id, safe='')}"

    def box_iri(self, slug: str, local_id: str) -> str:
        return f"{self.annotation_iri(slug, local_id)}/box"

    def label_iri(self, slug: str, raw_label: str) -> str:
        return f"{self.dataset_iri(slug)}/label/{label_slug(raw_label)}"


def emit_triples(
    bundle: DatasetBundle,
    taxonomy: "TaxonomyTable | None" = None,
    rules: MappingRules | None = None,
) -> Iterator[Triple]:
    rules = rules or MappingRules()
    desc = bundle.descriptor
    dataset = iri(rules.dataset_iri(desc.slug))

    yield Triple(dataset, vocab.RDF_TYPE, vocab.DATASET)
    yield Triple(dataset, vocab.SLUG, literal(desc.slug))
    yield Triple(dataset, vocab.NAME, literal(desc.name))
    yield Triple(dataset, vocab.LICENSE, iri(desc.license))
    if desc.source_url:
        yield Triple(dataset, vocab.SOURCE_URL, iri(desc.source_url))
    for task in sorted(desc.tasks):
        yield Triple(dataset, vocab.SUPPORTS_TASK, vocab.TASK_IRI[task])

    for img in bundle.images:
        yield from _emit_image(dataset, img, desc.slug, rules)
    for ann in bundle.annotations:
        yield from _emit_annotation(ann, desc.slug, taxonomy, rules)


def _emit_image(dataset, img: ImageRecord, slug: str, rules: MappingRules) -> Iterator[Triple]:
    node = iri(rules.image_iri(slug, img.local_id))
    yield Triple(node, vocab.RDF_TYPE, vocab.IMAGE)
    yield Triple(node, vocab.IS_PART_OF, dataset)
    yield Triple(dataset, vocab.HAS_PART, node)
    yield Triple(node, vocab.FILE_NAME, literal(img.file_name))
    yield Triple(node, vocab.WIDTH, integer_literal(img.width))
    yield Triple(node, vocab.HEIGHT, integer_literal(img.height))
    for key in sorted(img.attributes):
        yield Triple(node, vocab.ATTRIBUTE_PROPS[key], literal(img.attributes[key]))


def _emit_annotation(
    ann: AnnotationRecord, slug: str, taxonomy: "TaxonomyTable | None", rules: MappingRules
) -> Iterator[Triple]:
    node = iri(rules.annotation_iri(slug, ann.local_id))
    image = iri(rules.image_iri(slug, ann.image_local_id))
    concept = taxonomy.lookup(slug, ann.raw_label) if taxonomy is not None else None
    target = iri(concept) if concept else iri(rules.label_iri(slug, ann.raw_label))

    yield Triple(node, vocab.RDF_TYPE, vocab.ANNOTATION_CLASS[ann.kind])
    yield Triple(image, vocab.HAS_ANNOTATION, node)
    yield Triple(node, vocab.HAS_LABEL, target)
    yield Triple(node, vocab.SOURCE_LABEL_TEXT, literal(ann.raw_label))

    if ann.box is not None:
        box = iri(rules.box_iri(slug, ann.local_id))
        x_min, y_min, x_max, y_max = ann.box
        yield Triple(node, vocab.HAS_BOX, box)
        yield Triple(box, vocab.RDF_TYPE, vocab.BOUNDING_BOX)
        yield Triple(box, vocab.X_MIN, decimal_literal(x_min))
        yield Triple(box, vocab.Y_MIN, decimal_literal(y_min))
        yield Triple(box, vocab.X_MAX, decimal_literal(x_max))
        yield Triple(box, vocab.Y_MAX, decimal_literal(y_max))


def expected_triple_count(bundle: DatasetBundle) -> int:
    """Closed-form emission count, a pure function of bundle shape."""
    desc = bundle.descriptor
    total = 4 + len(desc.tasks) + (1 if desc.source_url else 0)
    for img in bundle.images:
        total += 6 + len(img.attributes)
    for ann in bundle.annotations:
        total += 10 if ann.kind in ("detection", "segmentation") else 4
    return total


def map_to_triples(
    bundle: DatasetBundle,
    taxonomy: "TaxonomyTable | None",
    store: TripleStore,
    rules: MappingRules | None = None,
) -> int:
    """Validate the bundle and insert its triples; returns how many were new."""
    if not vocab.is_bootstrapped(store):
        raise DataError("store is not bootstrapped: call bootstrap_schema first")
    bundle.validate()
    return store.insert_many(emit_triples(bundle, taxonomy, rules))
