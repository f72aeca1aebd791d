import json

import pytest

from cvkg.bundle import DatasetDescriptor
from cvkg.errors import BundleError, IngestError
from cvkg.formats import load_attributes, parse_classification, parse_coco, parse_kitti, parse_voc

CC = "https://creativecommons.org/licenses/by/4.0/"


def _desc(slug="d1", tasks=("detection",)):
    return DatasetDescriptor(slug=slug, name="D", license=CC, tasks=set(tasks))


# -- coco ---------------------------------------------------------------------

def test_coco_bbox_conversion():
    doc = {
        "images": [{"id": 1, "file_name": "a.jpg", "width": 100, "height": 100}],
        "annotations": [{"id": 1, "image_id": 1, "category_id": 1, "bbox": [10, 20, 30, 40]}],
        "categories": [{"id": 1, "name": "person"}],
    }
    bundle = parse_coco(json.dumps(doc), _desc())
    assert bundle.annotations[0].box == (10, 20, 40, 60)
    assert bundle.annotations[0].raw_label == "person"


def test_coco_fixture_counts(coco_bundle):
    assert len(coco_bundle.images) == 3
    assert len(coco_bundle.annotations) == 5
    assert {a.raw_label for a in coco_bundle.annotations} == {"person", "car"}


def test_coco_unknown_image_id():
    doc = {
        "images": [{"id": 1, "file_name": "a.jpg", "width": 10, "height": 10}],
        "annotations": [{"id": 1, "image_id": 99, "category_id": 1, "bbox": [1, 1, 2, 2]}],
        "categories": [{"id": 1, "name": "x"}],
    }
    with pytest.raises(IngestError, match="unknown-image-id"):
        parse_coco(json.dumps(doc), _desc())


def test_coco_unknown_category_id():
    doc = {
        "images": [{"id": 1, "file_name": "a.jpg", "width": 10, "height": 10}],
        "annotations": [{"id": 1, "image_id": 1, "category_id": 5, "bbox": [1, 1, 2, 2]}],
        "categories": [{"id": 1, "name": "x"}],
    }
    with pytest.raises(IngestError, match="unknown-category-id"):
        parse_coco(json.dumps(doc), _desc())


def test_coco_missing_field_reports_path():
    doc = {
        "images": [{"id": 1, "file_name": "a.jpg", "width": 10}],
        "annotations": [],
        "categories": [],
    }
    with pytest.raises(IngestError, match=r"images\[0\]\.height"):
        parse_coco(json.dumps(doc), _desc())


def test_coco_non_positive_bbox():
    doc = {
        "images": [{"id": 1, "file_name": "a.jpg", "width": 10, "height": 10}],
        "annotations": [{"id": 1, "image_id": 1, "category_id": 1, "bbox": [1, 1, 0, 2]}],
        "categories": [{"id": 1, "name": "x"}],
    }
    with pytest.raises(IngestError, match="non-positive"):
        parse_coco(json.dumps(doc), _desc())


def test_coco_json_syntax_error():
    with pytest.raises(IngestError, match="json-syntax"):
        parse_coco("{not json", _desc())


# -- voc ----------------------------------------------------------------------

def test_voc_single_object_pass_through():
    xml = """<annotation><filename>im.jpg</filename>
      <size><width>500</width><height>375</height></size>
      <object><name>person</name>
        <bndbox><xmin>48</xmin><ymin>240</ymin><xmax>195</xmax><ymax>371</ymax></bndbox>
      </object></annotation>"""
    bundle = parse_voc([xml], _desc())
    assert len(bundle.annotations) == 1
    assert bundle.annotations[0].box == (48, 240, 195, 371)
    assert bundle.annotations[0].local_id == "im-0"


def test_voc_fixture_counts(data_dir):
    texts = [p.read_text() for p in sorted((data_dir / "voc").glob("*.xml"))]
    bundle = parse_voc(texts, _desc())
    assert len(bundle.images) == 2
    assert len(bundle.annotations) == 3


def test_voc_missing_height():
    xml = "<annotation><filename>a.jpg</filename><size><width>10</width></size></annotation>"
    with pytest.raises(IngestError, match="size/height"):
        parse_voc([xml], _desc())


def test_voc_corner_inversion():
    xml = """<annotation><filename>a.jpg</filename>
      <size><width>100</width><height>100</height></size>
      <object><name>x</name>
        <bndbox><xmin>50</xmin><ymin>10</ymin><xmax>50</xmax><ymax>20</ymax></bndbox>
      </object></annotation>"""
    with pytest.raises(IngestError, match="corner inversion"):
        parse_voc([xml], _desc())


def test_voc_xml_syntax():
    with pytest.raises(IngestError, match="xml-syntax"):
        parse_voc(["<annotation>"], _desc())


# -- kitti --------------------------------------------------------------------

def test_kitti_field_extraction():
    line = "Pedestrian 0.00 0 -0.20 712.40 143.00 810.73 307.92 1.89 0.48 1.20 1.84 1.47 8.41 0.01"
    bundle = parse_kitti({"000001": line}, {"000001": (1242, 375)}, _desc())
    (ann,) = bundle.annotations
    assert ann.raw_label == "Pedestrian"
    assert ann.box == (712.40, 143.00, 810.73, 307.92)


def test_kitti_dontcare_skipped():
    text = (
        "Car 0.00 0 0.0 10.0 10.0 20.0 20.0 0 0 0 0 0 0 0\n"
        "Car 0.00 0 0.0 30.0 30.0 40.0 40.0 0 0 0 0 0 0 0\n"
        "DontCare -1 -1 -10 1.0 1.0 2.0 2.0 -1 -1 -1 -1000 -1000 -1000 -10\n"
    )
    bundle = parse_kitti({"f": text}, {"f": (100, 100)}, _desc())
    assert len(bundle.annotations) == 2


def test_kitti_fixture_counts(kitti_bundle):
    assert len(kitti_bundle.images) == 4
    assert len(kitti_bundle.annotations) == 9


def test_kitti_short_line():
    with pytest.raises(IngestError, match="short-line"):
        parse_kitti({"f": "Car 1 2 3\n"}, {"f": (10, 10)}, _desc())


def test_kitti_non_numeric_bbox():
    line = "Car 0.00 0 0.0 ten 10.0 20.0 20.0 0 0 0 0 0 0 0"
    with pytest.raises(IngestError, match="non-numeric"):
        parse_kitti({"f": line}, {"f": (100, 100)}, _desc())


def test_kitti_missing_size_entry():
    with pytest.raises(IngestError, match="no image size"):
        parse_kitti({"f": ""}, {}, _desc())


# -- classification -------------------------------------------------------------

def test_cls_two_rows():
    text = "file_path,label,width,height\na.jpg,cat,10,10\nb.jpg,dog,10,10\n"
    bundle = parse_classification(text, _desc(tasks=("classification",)))
    assert len(bundle.images) == 2
    assert len(bundle.annotations) == 2
    assert bundle.annotations[0].box is None


def test_cls_duplicate_path_names_row():
    text = "file_path,label,width,height\na.jpg,cat,10,10\na.jpg,dog,10,10\n"
    with pytest.raises(IngestError, match="row 3"):
        parse_classification(text, _desc(tasks=("classification",)))


def test_cls_fixture_counts(vg_bundle):
    assert len(vg_bundle.images) == 6
    assert len(vg_bundle.annotations) == 6
    assert len({a.raw_label for a in vg_bundle.annotations}) == 3


def test_cls_bad_header():
    with pytest.raises(IngestError, match="header"):
        parse_classification("path,label\n", _desc(tasks=("classification",)))


def test_cls_non_positive_dimensions():
    text = "file_path,label,width,height\na.jpg,cat,0,10\n"
    with pytest.raises(IngestError, match="non-positive"):
        parse_classification(text, _desc(tasks=("classification",)))


# -- attributes ------------------------------------------------------------------

def test_attributes_merge_and_lowercase(kitti_bundle):
    by_id = kitti_bundle.image_by_id()
    assert by_id["000002"].attributes == {"weather": "rainy", "timeOfDay": "night"}
    assert by_id["000004"].attributes == {"weather": "sunny"}
    assert by_id["000001"].attributes == {}


def test_attributes_empty_map_unchanged(coco_bundle):
    before = [dict(img.attributes) for img in coco_bundle.images]
    warnings = load_attributes("{}", coco_bundle)
    assert warnings == []
    assert [dict(img.attributes) for img in coco_bundle.images] == before


def test_attributes_unknown_id_is_warning(coco_bundle):
    warnings = load_attributes('{"nope": {"weather": "rainy"}}', coco_bundle)
    assert len(warnings) == 1
    assert all(img.attributes == {} for img in coco_bundle.images)


def test_attributes_bad_json(coco_bundle):
    with pytest.raises(IngestError, match="json-syntax"):
        load_attributes("{oops", coco_bundle)


# -- bundle invariants ------------------------------------------------------------

def test_bundle_box_outside_image_rejected():
    doc = {
        "images": [{"id": 1, "file_name": "a.jpg", "width": 10, "height": 10}],
        "annotations": [{"id": 1, "image_id": 1, "category_id": 1, "bbox": [5, 5, 10, 10]}],
        "categories": [{"id": 1, "name": "x"}],
    }
    with pytest.raises(BundleError, match="outside image bounds"):
        parse_coco(json.dumps(doc), _desc())


def test_descriptor_slug_and_tasks():
    with pytest.raises(BundleError):
        DatasetDescriptor(slug="Bad Slug", name="x", license=CC, tasks={"detection"})
    with pytest.raises(BundleError):
        DatasetDescriptor(slug="ok", name="x", license=CC, tasks=set())
    d = DatasetDescriptor(slug="ok", name="x", license="", tasks={"detection"})
    assert d.license.endswith("UnspecifiedLicense")
