"""Pascal-VOC-style per-image XML with <object><bndbox> corner boxes."""

from __future__ import annotations

import xml.etree.ElementTree as ET
from pathlib import PurePosixPath
from typing import Sequence

from ..bundle import AnnotationRecord, DatasetBundle, DatasetDescriptor, ImageRecord
from ..errors import IngestError


def _find_text(root: ET.Element, path: str, doc: str) -> str:
    node = root.find(path)
    if node is None or node.text is None:
        raise IngestError("missing element", f"{doc}: {path}")
    return node.text.strip()


def parse_voc(xml_texts: Sequence[str], descriptor: DatasetDescriptor) -> DatasetBundle:
    images = []
    annotations = []
    for i, text in enumerate(xml_texts):
        doc = f"doc[{i}]"
        try:
            root = ET.fromstring(text)
        except ET.ParseError as exc:
            raise IngestError(f"xml-syntax: {exc}", doc) from None
        file_name = _find_text(root, "filename", doc)
        stem = PurePosixPath(file_name).stem
        width = int(float(_find_text(root, "size/width", doc)))
        height = int(float(_find_text(root, "size/height", doc)))
        images.append(ImageRecord(local_id=stem, file_name=file_name, width=width, height=height))

        for j, obj in enumerate(root.findall("object")):
            opath = f"{doc}: object[{j}]"
            name = _find_text(obj, "name", opath)
            corners = []
            for tag in ("xmin", "ymin", "xmax", "ymax"):
                raw = _find_text(obj, f"bndbox/{tag}", opath)
                try:
                    corners.append(float(raw))
                except ValueError:
                    raise IngestError(f"non-numeric bndbox/{tag}: {raw!r}", opath) from None
            x_min, y_min, x_max, y_max = corners
            if x_min >= x_max:
                raise IngestError("corner inversion: xmin >= xmax", f"{opath}/bndbox")
            if y_min >= y_max:
                raise IngestError("corner inversion: ymin >= ymax", f"{opath}/bndbox")
            annotations.append(
                AnnotationRecord(
                    local_id=f"{stem}-{j}",
                    image_local_id=stem,
                    kind="detection",
                    raw_label=name,
                    box=(x_min, y_min, x_max, y_max),
                )
            )

    bundle = DatasetBundle(descriptor, images, annotations)
    bundle.validate()
    return bundle
