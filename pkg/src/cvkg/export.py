"""Query results to training-ready composite datasets.

buildManifest resolves the images bound by a query into a manifest with
per-image provenance (dataset slug + license), applies license filtering,
and attaches annotations: when the query mentions label IRIs (objects of
cv:hasLabel patterns) only annotations carrying one of those labels --
asserted or inferred -- are kept; a query naming no labels keeps everything.

Split assignment is deterministic: image IRIs are sorted, shuffled with a
Fisher-Yates permutation driven by a SplitMix64 generator seeded from the
request, and the first ceil(f*n) go to train.

Writers are byte-deterministic (fixed key order, box floats always printed
with 6 decimal places).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, replace
from typing import Iterable

from . import vocab
from .errors import ExportError
from .sparql.ast import GroupPattern, TriplePattern, UnionPattern, Var
from .sparql.eval import evaluate
from .sparql.parser import parse_query
from .store import StoreSnapshot, as_snapshot
from .terms import Term

MASK64 = (1 << 64) - 1


class SplitMix64:
    """Pinned split generator: splitmix64(state += 0x9E3779B97F4A7C15)."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return (z ^ (z >> 31)) & MASK64

    def below(self, n: int) -> int:
        return self.next() % n


def seeded_permutation(items: list, seed: int) -> list:
    """Fisher-Yates with SplitMix64; same (items, seed) -> same order."""
    out = list(items)
    rng = SplitMix64(seed)
    for i in range(len(out) - 1, 0, -1):
        j = rng.below(i + 1)
        out[i], out[j] = out[j], out[i]
    return out


VALID_FORMATS = ("coco", "kitti", "cls")


@dataclass(frozen=True)
class ExportRequest:
    query: str
    format: str
    allowed_licenses: frozenset[str] | None = None
    train_fraction: float | None = None
    seed: int = 0
    label_mode: str = "canonical"
    image_var: str = "img"

    def __post_init__(self):
        if self.format not in VALID_FORMATS:
            raise ExportError(f"format must be one of {VALID_FORMATS}", "invalid-request")
        if self.label_mode not in ("canonical", "raw"):
            raise ExportError("labelMode must be canonical or raw", "invalid-request")
        if self.train_fraction is not None and not (0.0 < self.train_fraction < 1.0):
            raise ExportError("trainFraction must be strictly inside (0, 1)", "invalid-request")

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ExportRequest":
        if not isinstance(doc, dict) or "query" not in doc or "format" not in doc:
            raise ExportError("request needs query and format", "invalid-request")
        split = doc.get("split") or {}
        if split and "trainFraction" not in split:
            raise ExportError("split needs trainFraction", "invalid-request")
        licenses = doc.get("allowedLicenses")
        return cls(
            query=str(doc["query"]),
            format=str(doc["format"]),
            allowed_licenses=frozenset(str(x) for x in licenses) if licenses is not None else None,
            train_fraction=float(split["trainFraction"]) if split else None,
            seed=int(split.get("seed", 0)) if split else 0,
            label_mode=str(doc.get("labelMode", "canonical")),
            image_var=str(doc.get("imageVar", "img")),
        )


@dataclass(frozen=True)
class ManifestImage:
    iri: str
    source_dataset: str  # slug
    file_name: str
    width: int
    height: int
    license: str
    split: str | None = None


@dataclass(frozen=True)
class ManifestAnnotation:
    image_iri: str
    label_text: str
    box: tuple[float, float, float, float] | None = None


@dataclass
class CompositeManifest:
    images: list[ManifestImage] = field(default_factory=list)
    annotations: list[ManifestAnnotation] = field(default_factory=list)
    categories: list[str] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "images": [
                {
                    "iri": im.iri,
                    "sourceDataset": im.source_dataset,
                    "fileName": im.file_name,
                    "width": im.width,
                    "height": im.height,
                    "license": im.license,
                    **({"split": im.split} if im.split else {}),
                }
                for im in self.images
            ],
            "annotations": [
                {
                    "imageIri": a.image_iri,
                    "labelText": a.label_text,
                    **({"box": [round(v, 6) for v in a.box]} if a.box else {}),
                }
                for a in self.annotations
            ],
            "categories": list(self.categories),
        }


def _first_literal(snap: StoreSnapshot, subject: Term, prop: Term) -> str | None:
    for t in snap.match(subject, prop, None):
        return t.object.value
    return None


def _query_label_iris(group: GroupPattern) -> set[str]:
    """Constant IRIs used as objects of cv:hasLabel patterns, unions included."""
    out: set[str] = set()
    for element in group.elements:
        if isinstance(element, TriplePattern):
            if (
                isinstance(element.p, Term)
                and element.p == vocab.HAS_LABEL
                and isinstance(element.o, Term)
                and element.o.kind == "iri"
            ):
                out.add(element.o.value)
        elif isinstance(element, UnionPattern):
            out |= _query_label_iris(element.left)
            out |= _query_label_iris(element.right)
    return out


def build_manifest(request: ExportRequest, store) -> CompositeManifest:
    snap = as_snapshot(store)
    query = parse_query(request.query)

    if query.projection == "star":
        projected = set(query.pattern.variables_in_order())
    elif isinstance(query.projection, list):
        projected = {v.name for v in query.projection}
    else:
        projected = {query.projection.alias.name}
    if request.image_var not in projected:
        raise ExportError(
            f"query must project the image variable ?{request.image_var}", "query-missing-image-var"
        )

    solutions = evaluate(query, snap)
    image_terms: dict[str, Term] = {}
    for row in solutions.rows:
        term = row.get(request.image_var)
        if term is None or term.kind != "iri":
            continue
        if snap.count_match(term, vocab.RDF_TYPE, vocab.IMAGE) == 0:
            continue
        image_terms.setdefault(term.value, term)

    label_filter = _query_label_iris(query.pattern)
    manifest = CompositeManifest()
    categories: list[str] = []
    seen_categories = set()

    for iri_text in sorted(image_terms):
        image = image_terms[iri_text]
        dataset = next((t.object for t in snap.match(image, vocab.IS_PART_OF, None)), None)
        if dataset is None:
            continue
        slug = _first_literal(snap, dataset, vocab.SLUG) or dataset.value
        license_iri = next(
            (t.object.value for t in snap.match(dataset, vocab.LICENSE, None)),
            vocab.UNSPECIFIED_LICENSE.value,
        )
        if request.allowed_licenses is not None and license_iri not in request.allowed_licenses:
            continue
        file_name = _first_literal(snap, image, vocab.FILE_NAME) or ""
        width = int(_first_literal(snap, image, vocab.WIDTH) or 0)
        height = int(_first_literal(snap, image, vocab.HEIGHT) or 0)
        manifest.images.append(
            ManifestImage(iri_text, slug, file_name, width, height, license_iri)
        )

        annotations = sorted(
            (t.object for t in snap.match(image, vocab.HAS_ANNOTATION, None)), key=lambda t: t.value
        )
        for ann in annotations:
            label_values = {t.object.value for t in snap.match(ann, vocab.HAS_LABEL, None)}
            matched = sorted(label_values & label_filter) if label_filter else []
            if label_filter and not matched:
                continue
            label_text = _label_text(snap, ann, matched, request.label_mode)
            box = _box_of(snap, ann)
            manifest.annotations.append(ManifestAnnotation(iri_text, label_text, box))
            if label_text not in seen_categories:
                seen_categories.add(label_text)
                categories.append(label_text)

    manifest.categories = categories
    if not manifest.images:
        raise ExportError("query produced no in-license images", "empty-result")
    if request.train_fraction is not None:
        return assign_split(manifest, request.train_fraction, request.seed)
    return manifest


def _label_text(snap: StoreSnapshot, ann: Term, matched_labels: list[str], mode: str) -> str:
    raw = _first_literal(snap, ann, vocab.SOURCE_LABEL_TEXT) or ""
    if mode == "raw":
        return raw
    # canonical: the display name of the queried concept this annotation
    # matched, else of its asserted label target, else the raw text
    candidates = list(matched_labels)
    asserted = [
        t.object.value for t in snap.match(ann, vocab.HAS_LABEL, None) if not t.inferred
    ]
    candidates.extend(sorted(asserted))
    for label_iri in candidates:
        name = _first_literal(snap, Term("iri", label_iri), vocab.NAME)
        if name:
            return name
    return raw


def _box_of(snap: StoreSnapshot, ann: Term):
    box = next((t.object for t in snap.match(ann, vocab.HAS_BOX, None)), None)
    if box is None:
        return None
    coords = []
    for prop in (vocab.X_MIN, vocab.Y_MIN, vocab.X_MAX, vocab.Y_MAX):
        raw = _first_literal(snap, box, prop)
        if raw is None:
            return None
        coords.append(float(raw))
    return tuple(coords)


def assign_split(manifest: CompositeManifest, train_fraction: float, seed: int) -> CompositeManifest:
    """Deterministic train/test assignment; same inputs, same assignment."""
    if not (0.0 < train_fraction < 1.0):
        raise ExportError("trainFraction must be strictly inside (0, 1)", "invalid-request")
    iris = sorted(im.iri for im in manifest.images)
    permuted = seeded_permutation(iris, seed)
    n_train = math.ceil(train_fraction * len(permuted))
    train = set(permuted[:n_train])
    images = [replace(im, split="train" if im.iri in train else "test") for im in manifest.images]
    return CompositeManifest(images, list(manifest.annotations), list(manifest.categories))


# -- writers --------------------------------------------------------------------


def _fmt6(value: float) -> str:
    return f"{value:.6f}"


def write_coco(manifest: CompositeManifest) -> str:
    """COCO JSON with dense integer ids in manifest order; bbox back-converted
    to [x, y, w, h] with fixed 6-decimal formatting."""
    image_ids = {im.iri: i + 1 for i, im in enumerate(manifest.images)}
    category_ids = {name: i + 1 for i, name in enumerate(manifest.categories)}

    out = io.StringIO()
    out.write('{"images": [')
    for i, im in enumerate(manifest.images):
        if i:
            out.write(", ")
        out.write(
            '{"id": %d, "file_name": %s, "width": %d, "height": %d}'
            % (image_ids[im.iri], json.dumps(im.file_name), im.width, im.height)
        )
    out.write('], "annotations": [')
    boxed = [a for a in manifest.annotations if a.box is not None]  # box-less can't round-trip
    for i, ann in enumerate(boxed):
        if i:
            out.write(", ")
        x_min, y_min, x_max, y_max = ann.box
        bbox = ", ".join(_fmt6(v) for v in (x_min, y_min, x_max - x_min, y_max - y_min))
        out.write(
            '{"id": %d, "image_id": %d, "category_id": %d, "bbox": [%s]}'
            % (i + 1, image_ids[ann.image_iri], category_ids[ann.label_text], bbox)
        )
    out.write('], "categories": [')
    for i, name in enumerate(manifest.categories):
        if i:
            out.write(", ")
        out.write('{"id": %d, "name": %s}' % (category_ids[name], json.dumps(name)))
    out.write("]}")
    return out.getvalue()


def _file_stem(file_name: str) -> str:
    base = file_name.rsplit("/", 1)[-1]
    return base.rsplit(".", 1)[0] if "." in base else base


def write_kitti(manifest: CompositeManifest) -> dict[str, str]:
    """Map of file stem -> KITTI label text; 15 fields, 3D fields zero-filled."""
    by_image: dict[str, list[ManifestAnnotation]] = {im.iri: [] for im in manifest.images}
    for ann in manifest.annotations:
        if ann.box is None:
            raise ExportError("KITTI output needs boxes on all annotations", "format-incompatible")
        by_image[ann.image_iri].append(ann)

    out: dict[str, str] = {}
    for im in manifest.images:
        base = _file_stem(im.file_name)
        stem = base
        if stem in out:
            stem = f"{im.source_dataset}-{base}"
        suffix = 1
        while stem in out:
            suffix += 1
            stem = f"{im.source_dataset}-{base}-{suffix}"
        lines = []
        for ann in by_image[im.iri]:
            label = "_".join(ann.label_text.split()) or "object"
            x_min, y_min, x_max, y_max = ann.box
            lines.append(
                f"{label} 0.000000 0 0.000000 "
                f"{_fmt6(x_min)} {_fmt6(y_min)} {_fmt6(x_max)} {_fmt6(y_max)} "
                f"0.000000 0.000000 0.000000 0.000000 0.000000 0.000000 0.000000"
            )
        out[stem] = "".join(line + "\n" for line in lines)
    return out


def write_cls(manifest: CompositeManifest) -> str:
    """Classification CSV (file_path,label,width,height); boxes are ignored."""
    sizes = {im.iri: (im.file_name, im.width, im.height) for im in manifest.images}
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["file_path", "label", "width", "height"])
    for ann in manifest.annotations:
        file_name, width, height = sizes[ann.image_iri]
        writer.writerow([file_name, ann.label_text, width, height])
    return buf.getvalue()


def write_payload(request: ExportRequest, manifest: CompositeManifest):
    if request.format == "coco":
        return write_coco(manifest)
    if request.format == "kitti":
        return write_kitti(manifest)
    return write_cls(manifest)


def export(request: ExportRequest, store):
    """Build the manifest and materialize the requested format."""
    manifest = build_manifest(request, store)
    return manifest, write_payload(request, manifest)


def manifest_images(manifest: CompositeManifest) -> Iterable[ManifestImage]:
    return list(manifest.images)
