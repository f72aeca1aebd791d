"""KITTI label text: >= 15 whitespace-separated fields per object line.

Label files carry no image dimensions, so the caller supplies them per file
stem. `DontCare` lines are skipped; everything else passes through untouched.
"""

from __future__ import annotations

from typing import Mapping

from ..bundle import AnnotationRecord, DatasetBundle, DatasetDescriptor, ImageRecord
from ..errors import IngestError

MIN_FIELDS = 15


def parse_kitti(
    label_files: Mapping[str, str],
    image_sizes: Mapping[str, tuple[int, int]],
    descriptor: DatasetDescriptor,
) -> DatasetBundle:
    images = []
    annotations = []
    for stem in sorted(label_files):
        if stem not in image_sizes:
            raise IngestError("no image size entry for label file", stem)
        width, height = image_sizes[stem]
        images.append(ImageRecord(local_id=stem, file_name=f"{stem}.png", width=int(width), height=int(height)))

        index = 0
        for lineno, line in enumerate(label_files[stem].splitlines(), start=1):
            if not line.strip():
                continue
            fields = line.split()
            if len(fields) < MIN_FIELDS:
                raise IngestError(
                    f"short-line: {len(fields)} fields, expected >= {MIN_FIELDS}", f"{stem}:{lineno}"
                )
            label = fields[0]
            if label == "DontCare":
                continue
            try:
                box = tuple(float(fields[k]) for k in (4, 5, 6, 7))
            except ValueError:
                raise IngestError("non-numeric bbox field", f"{stem}:{lineno}") from None
            annotations.append(
                AnnotationRecord(
                    local_id=f"{stem}-{index}",
                    image_local_id=stem,
                    kind="detection",
                    raw_label=label,
                    box=box,
                )
            )
            index += 1

    bundle = DatasetBundle(descriptor, images, annotations)
    bundle.validate()
    return bundle
