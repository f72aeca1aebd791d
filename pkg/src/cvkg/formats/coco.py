"""COCO-style JSON: images / annotations / categories with [x, y, w, h] boxes,
converted to corner boxes on the way in."""

from __future__ import annotations

import json

from ..bundle import AnnotationRecord, DatasetBundle, DatasetDescriptor, ImageRecord
from ..errors import IngestError


def _require(entry: dict, key: str, path: str):
    if not isinstance(entry, dict) or key not in entry:
        raise IngestError("missing-field", f"{path}.{key}")
    return entry[key]


def parse_coco(json_text: str, descriptor: DatasetDescriptor) -> DatasetBundle:
    try:
        doc = json.loads(json_text)
    except json.JSONDecodeError as exc:
        raise IngestError(f"json-syntax: {exc.msg}", f"line {exc.lineno}, column {exc.colno}") from None
    if not isinstance(doc, dict):
        raise IngestError("json-syntax: top level must be an object")

    for key in ("images", "annotations", "categories"):
        if not isinstance(doc.get(key), list):
            raise IngestError("missing-field", key)

    categories: dict[object, str] = {}
    for i, cat in enumerate(doc["categories"]):
        path = f"categories[{i}]"
        cid = _require(cat, "id", path)
        name = _require(cat, "name", path)
        if cid in categories:
            raise IngestError(f"duplicate category id {cid!r}", path)
        categories[cid] = str(name)

    images = []
    known_images = set()
    for i, img in enumerate(doc["images"]):
        path = f"images[{i}]"
        iid = _require(img, "id", path)
        if iid in known_images:
            raise IngestError(f"duplicate image id {iid!r}", path)
        known_images.add(iid)
        images.append(
            ImageRecord(
                local_id=str(iid),
                file_name=str(_require(img, "file_name", path)),
                width=int(_require(img, "width", path)),
                height=int(_require(img, "height", path)),
            )
        )

    annotations = []
    for i, ann in enumerate(doc["annotations"]):
        path = f"annotations[{i}]"
        aid = _require(ann, "id", path)
        image_id = _require(ann, "image_id", path)
        if image_id not in known_images:
            raise IngestError(f"unknown-image-id {image_id!r}", path)
        cat_id = _require(ann, "category_id", path)
        if cat_id not in categories:
            raise IngestError(f"unknown-category-id {cat_id!r}", path)
        bbox = _require(ann, "bbox", path)
        if not isinstance(bbox, list) or len(bbox) != 4:
            raise IngestError("bbox must be [x, y, w, h]", f"{path}.bbox")
        try:
            x, y, w, h = (float(v) for v in bbox)
        except (TypeError, ValueError):
            raise IngestError("bbox values must be numeric", f"{path}.bbox") from None
        if w <= 0 or h <= 0:
            raise IngestError("non-positive bbox width/height", f"{path}.bbox")
        annotations.append(
            AnnotationRecord(
                local_id=str(aid),
                image_local_id=str(image_id),
                kind="detection",
                raw_label=categories[cat_id],
                box=(x, y, x + w, y + h),
            )
        )

    bundle = DatasetBundle(descriptor, images, annotations)
    bundle.validate()
    return bundle
