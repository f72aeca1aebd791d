"""Classification manifests: CSV with header file_path,label,width,height."""

from __future__ import annotations

import csv
import io

from ..bundle import AnnotationRecord, DatasetBundle, DatasetDescriptor, ImageRecord
from ..errors import IngestError

HEADER = ["file_path", "label", "width", "height"]


def parse_classification(csv_text: str, descriptor: DatasetDescriptor) -> DatasetBundle:
    reader = csv.reader(io.StringIO(csv_text))
    try:
        header = next(reader)
    except StopIteration:
        raise IngestError("csv-syntax: empty file") from None
    if [h.strip() for h in header] != HEADER:
        raise IngestError(f"csv-syntax: header must be {','.join(HEADER)}", "line 1")

    images = []
    annotations = []
    seen_paths = set()
    for rownum, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(HEADER):
            raise IngestError(f"csv-syntax: expected {len(HEADER)} fields, got {len(row)}", f"row {rownum}")
        file_path, label, width_s, height_s = (v.strip() for v in row)
        if file_path in seen_paths:
            raise IngestError(f"duplicate file_path {file_path!r}", f"row {rownum}")
        seen_paths.add(file_path)
        try:
            width, height = int(width_s), int(height_s)
        except ValueError:
            raise IngestError("non-numeric dimensions", f"row {rownum}") from None
        if width <= 0 or height <= 0:
            raise IngestError("non-positive dimensions", f"row {rownum}")
        images.append(ImageRecord(local_id=file_path, file_name=file_path, width=width, height=height))
        annotations.append(
            AnnotationRecord(
                local_id=str(rownum - 1),
                image_local_id=file_path,
                kind="classification",
                raw_label=label,
            )
        )

    bundle = DatasetBundle(descriptor, images, annotations)
    bundle.validate()
    return bundle
