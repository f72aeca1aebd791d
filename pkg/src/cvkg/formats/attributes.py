"""Attribute sidecar: JSON map of image localId -> {weather?, timeOfDay?,
illumination?}. Values are lowercased so FILTER string equality stays
predictable; unknown ids or keys are reported as warnings, never fatal."""

from __future__ import annotations

import json

from ..bundle import ATTRIBUTE_KEYS, DatasetBundle
from ..errors import IngestError


def load_attributes(json_text: str, bundle: DatasetBundle) -> list[str]:
    """Merge sidecar attributes into the bundle in place; returns warnings."""
    try:
        doc = json.loads(json_text)
    except json.JSONDecodeError as exc:
        raise IngestError(f"json-syntax: {exc.msg}", f"line {exc.lineno}, column {exc.colno}") from None
    if not isinstance(doc, dict):
        raise IngestError("json-syntax: top level must be an object")

    by_id = bundle.image_by_id()
    warnings = []
    for local_id, attrs in doc.items():
        img = by_id.get(local_id)
        if img is None:
            warnings.append(f"unknown image localId {local_id!r}")
            continue
        if not isinstance(attrs, dict):
            warnings.append(f"attributes for {local_id!r} must be an object")
            continue
        for key, value in attrs.items():
            if key not in ATTRIBUTE_KEYS:
                warnings.append(f"unknown attribute {key!r} on {local_id!r}")
                continue
            if not isinstance(value, str):
                warnings.append(f"non-text value for {key!r} on {local_id!r}")
                continue
            img.attributes[key] = value.lower()
    return warnings
