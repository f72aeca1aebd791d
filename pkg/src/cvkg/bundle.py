"""Format-independent ingestion intermediate: dataset descriptor plus image
and annotation records, validated before any triples are emitted."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import BundleError
from .vocab import TASK_KINDS, UNSPECIFIED_LICENSE

_SLUG_RE = re.compile(r"^[a-z0-9-]+$")

Box = tuple[float, float, float, float]  # xMin, yMin, xMax, yMax in pixels

ATTRIBUTE_KEYS = ("weather", "timeOfDay", "illumination")


@dataclass
class DatasetDescriptor:
    slug: str
    name: str
    license: str = ""
    source_url: str | None = None
    tasks: frozenset[str] = frozenset()

    def __post_init__(self):
        if not _SLUG_RE.match(self.slug):
            raise BundleError("slug must match [a-z0-9-]+", self.slug or "<empty>", "slug")
        self.tasks = frozenset(self.tasks)
        unknown = self.tasks - set(TASK_KINDS)
        if unknown:
            raise BundleError(f"unknown tasks {sorted(unknown)}", self.slug, "tasks")
        if not self.tasks:
            raise BundleError("tasks must be non-empty", self.slug, "tasks")
        if not self.license:
            self.license = UNSPECIFIED_LICENSE.value


@dataclass
class ImageRecord:
    local_id: str
    file_name: str
    width: int
    height: int
    attributes: dict[str, str] = field(default_factory=dict)


@dataclass
class AnnotationRecord:
    local_id: str
    image_local_id: str
    kind: str  # one of TASK_KINDS
    raw_label: str
    box: Box | None = None


@dataclass
class DatasetBundle:
    descriptor: DatasetDescriptor
    images: list[ImageRecord] = field(default_factory=list)
    annotations: list[AnnotationRecord] = field(default_factory=list)

    def image_by_id(self) -> dict[str, ImageRecord]:
        return {img.local_id: img for img in self.images}

    def validate(self) -> None:
        """Enforce record invariants; raises BundleError naming record and field."""
        by_id: dict[str, ImageRecord] = {}
        for img in self.images:
            if not img.local_id:
                raise BundleError("empty image localId", img.file_name, "localId")
            if img.local_id in by_id:
                raise BundleError("duplicate image localId", img.local_id, "localId")
            by_id[img.local_id] = img
            if img.width <= 0:
                raise BundleError("width must be positive", img.local_id, "width")
            if img.height <= 0:
                raise BundleError("height must be positive", img.local_id, "height")
            for key in img.attributes:
                if key not in ATTRIBUTE_KEYS:
                    raise BundleError(f"unknown attribute {key!r}", img.local_id, "attributes")

        ann_ids = set()
        for ann in self.annotations:
            if not ann.local_id:
                raise BundleError("empty annotation localId", ann.image_local_id, "localId")
            if ann.local_id in ann_ids:
                raise BundleError("duplicate annotation localId", ann.local_id, "localId")
            ann_ids.add(ann.local_id)
            if ann.kind not in TASK_KINDS:
                raise BundleError(f"unknown annotation kind {ann.kind!r}", ann.local_id, "kind")
            img = by_id.get(ann.image_local_id)
            if img is None:
                raise BundleError(
                    f"annotation references unknown image {ann.image_local_id!r}", ann.local_id, "imageLocalId"
                )
            needs_box = ann.kind in ("detection", "segmentation")
            if needs_box and ann.box is None:
                raise BundleError("detection/segmentation annotation lacks a box", ann.local_id, "box")
            if not needs_box and ann.box is not None:
                raise BundleError(f"{ann.kind} annotation must not carry a box", ann.local_id, "box")
            if ann.box is not None:
                x_min, y_min, x_max, y_max = ann.box
                if not (x_min < x_max):
                    raise BundleError("xMin must be < xMax", ann.local_id, "box")
                if not (y_min < y_max):
                    raise BundleError("yMin must be < yMax", ann.local_id, "box")
                if x_min < 0 or y_min < 0 or x_max > img.width or y_max > img.height:
                    raise BundleError(
                        f"box {ann.box} outside image bounds {img.width}x{img.height}", ann.local_id, "box"
                    )
