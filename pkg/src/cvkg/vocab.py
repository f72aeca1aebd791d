"""Fixed vocabulary: namespaces, class/property IRIs, the built-in annotation
taxonomy, and a store-level conformance check.

The annotation classes form a subsumption chain (segmentation <: detection <:
classification <: annotation) so queries for a broader task also see the
finer annotations once the store is enriched.
"""

from __future__ import annotations

from dataclasses import dataclass

from .store import TripleStore
from .terms import Term, Triple, iri

CV = "http://vision.semkg.org/onto#"
SCHEMA = "http://schema.org/"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"

# classes
DATASET = iri(CV + "Dataset")
IMAGE = iri(CV + "Image")
ANNOTATION = iri(CV + "Annotation")
CLASSIFICATION_ANNOTATION = iri(CV + "ClassificationAnnotation")
OBJECT_DETECTION_ANNOTATION = iri(CV + "ObjectDetectionAnnotation")
INSTANCE_SEGMENTATION_ANNOTATION = iri(CV + "InstanceSegmentationAnnotation")
VISUAL_RELATIONSHIP_ANNOTATION = iri(CV + "VisualRelationshipAnnotation")
BOUNDING_BOX = iri(CV + "BoundingBox")
LABEL = iri(CV + "Label")
TASK = iri(CV + "Task")
RDFS_CLASS = iri(RDFS + "Class")

# properties
HAS_PART = iri(SCHEMA + "hasPart")
IS_PART_OF = iri(SCHEMA + "isPartOf")
NAME = iri(SCHEMA + "name")
LICENSE = iri(CV + "license")
SOURCE_URL = iri(CV + "sourceUrl")
SUPPORTS_TASK = iri(CV + "supportsTask")
SLUG = iri(CV + "slug")
FILE_NAME = iri(CV + "fileName")
WIDTH = iri(CV + "width")
HEIGHT = iri(CV + "height")
WEATHER = iri(CV + "weather")
TIME_OF_DAY = iri(CV + "timeOfDay")
ILLUMINATION = iri(CV + "illumination")
HAS_ANNOTATION = iri(CV + "hasAnnotation")
HAS_LABEL = iri(CV + "hasLabel")
SOURCE_LABEL_TEXT = iri(CV + "sourceLabelText")
HAS_BOX = iri(CV + "hasBox")
X_MIN = iri(CV + "xMin")
Y_MIN = iri(CV + "yMin")
X_MAX = iri(CV + "xMax")
Y_MAX = iri(CV + "yMax")
SUB_CLASS_OF = iri(RDFS + "subClassOf")
RDF_TYPE = iri(RDF + "type")

UNSPECIFIED_LICENSE = iri(CV + "UnspecifiedLicense")

TASK_KINDS = ("classification", "detection", "segmentation", "relationship")

TASK_IRI = {
    "classification": iri(CV + "ClassificationTask"),
    "detection": iri(CV + "ObjectDetectionTask"),
    "segmentation": iri(CV + "InstanceSegmentationTask"),
    "relationship": iri(CV + "VisualRelationshipTask"),
}
TASK_SLUG = {t.value: k for k, t in TASK_IRI.items()}

ANNOTATION_CLASS = {
    "classification": CLASSIFICATION_ANNOTATION,
    "detection": OBJECT_DETECTION_ANNOTATION,
    "segmentation": INSTANCE_SEGMENTATION_ANNOTATION,
    "relationship": VISUAL_RELATIONSHIP_ANNOTATION,
}
ANNOTATION_KIND = {c.value: k for k, c in ANNOTATION_CLASS.items()}

ATTRIBUTE_PROPS = {"weather": WEATHER, "timeOfDay": TIME_OF_DAY, "illumination": ILLUMINATION}

_CLASSES = (
    DATASET,
    IMAGE,
    ANNOTATION,
    CLASSIFICATION_ANNOTATION,
    OBJECT_DETECTION_ANNOTATION,
    INSTANCE_SEGMENTATION_ANNOTATION,
    VISUAL_RELATIONSHIP_ANNOTATION,
    BOUNDING_BOX,
    LABEL,
    TASK,
)

SCHEMA_AXIOMS = (
    (OBJECT_DETECTION_ANNOTATION, CLASSIFICATION_ANNOTATION),
    (INSTANCE_SEGMENTATION_ANNOTATION, OBJECT_DETECTION_ANNOTATION),
    (CLASSIFICATION_ANNOTATION, ANNOTATION),
    (OBJECT_DETECTION_ANNOTATION, ANNOTATION),
    (INSTANCE_SEGMENTATION_ANNOTATION, ANNOTATION),
    (VISUAL_RELATIONSHIP_ANNOTATION, ANNOTATION),
)


def bootstrap_triples() -> list[Triple]:
    triples = [Triple(sub, SUB_CLASS_OF, sup) for sub, sup in SCHEMA_AXIOMS]
    triples += [Triple(c, RDF_TYPE, RDFS_CLASS) for c in _CLASSES]
    triples += [Triple(t, RDF_TYPE, TASK) for t in TASK_IRI.values()]
    return triples


BOOTSTRAP_TRIPLE_COUNT = len(bootstrap_triples())  # 6 axioms + 10 classes + 4 tasks


def bootstrap_schema(store: TripleStore) -> int:
    """Insert the built-in axioms; idempotent, returns how many were new."""
    return store.insert_many(bootstrap_triples())


def is_bootstrapped(store) -> bool:
    return store.count_match(OBJECT_DETECTION_ANNOTATION, SUB_CLASS_OF, CLASSIFICATION_ANNOTATION) > 0


@dataclass(frozen=True)
class Violation:
    code: str
    subject: str  # IRI of the offending entity
    detail: str

    def __str__(self):
        return f"{self.code}: {self.subject}: {self.detail}"


def _subjects_of_type(store, cls: Term) -> list[Term]:
    return sorted({t.subject for t in store.match(None, RDF_TYPE, cls)}, key=lambda t: t.value)


def validate(store) -> list[Violation]:
    """Schema conformance pass; violations are data, not exceptions."""
    out: list[Violation] = []

    for img in _subjects_of_type(store, IMAGE):
        for prop, name in ((WIDTH, "width"), (HEIGHT, "height")):
            if store.count_match(img, prop, None) == 0:
                out.append(Violation("missing-dimension", img.value, f"image lacks cv:{name}"))

    annotations: set[Term] = set()
    box_required: set[Term] = set()
    for kind, cls in ANNOTATION_CLASS.items():
        subs = _subjects_of_type(store, cls)
        annotations.update(subs)
        if kind in ("detection", "segmentation"):
            box_required.update(subs)

    for ann in sorted(annotations, key=lambda t: t.value):
        if store.count_match(ann, HAS_LABEL, None) == 0:
            out.append(Violation("missing-label", ann.value, "annotation lacks cv:hasLabel"))

    coords = ((X_MIN, "xMin"), (Y_MIN, "yMin"), (X_MAX, "xMax"), (Y_MAX, "yMax"))
    for ann in sorted(box_required, key=lambda t: t.value):
        boxes = [t.object for t in store.match(ann, HAS_BOX, None)]
        if not boxes:
            out.append(Violation("missing-box", ann.value, "detection annotation lacks cv:hasBox"))

    def _coord(box: Term, prop: Term) -> float | None:
        for t in store.match(box, prop, None):
            try:
                return float(t.object.value)
            except ValueError:
                return None
        return None

    for box in _subjects_of_type(store, BOUNDING_BOX):
        values = {}
        complete = True
        for prop, name in coords:
            v = _coord(box, prop)
            if v is None:
                out.append(Violation("incomplete-box", box.value, f"box lacks cv:{name}"))
                complete = False
            else:
                values[name] = v
        if complete:
            if values["xMin"] >= values["xMax"]:
                out.append(Violation("degenerate-box", box.value, "xMin >= xMax"))
            if values["yMin"] >= values["yMax"]:
                out.append(Violation("degenerate-box", box.value, "yMin >= yMax"))

    for t in store.match(None, HAS_PART, None):
        if store.count_match(t.object, IS_PART_OF, t.subject) == 0:
            out.append(
                Violation("asymmetric-part", t.subject.value, f"no isPartOf back-link from {t.object.value}")
            )
        if store.count_match(t.object, RDF_TYPE, None) == 0:
            out.append(Violation("dangling-part", t.subject.value, f"hasPart target {t.object.value} is untyped"))
    for t in store.match(None, IS_PART_OF, None):
        if store.count_match(t.object, HAS_PART, t.subject) == 0:
            out.append(
                Violation("asymmetric-part", t.subject.value, f"no hasPart back-link from {t.object.value}")
            )

    return out
