import json
from pathlib import Path

import pytest

from cvkg import TripleStore, bootstrap_schema, map_to_triples, materialize
from cvkg.bundle import DatasetDescriptor
from cvkg.formats import load_attributes, parse_classification, parse_coco, parse_kitti
from cvkg.taxonomy import apply_taxonomy, load_taxonomy

DATA = Path(__file__).parent / "data"

CC_BY = "https://creativecommons.org/licenses/by/4.0/"
NC_SA = "https://creativecommons.org/licenses/by-nc-sa/3.0/"

CONCEPT = "http://vision.semkg.org/concept#"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture()
def coco_descriptor():
    return DatasetDescriptor(
        slug="coco-mini",
        name="Mini COCO",
        license=CC_BY,
        source_url="https://example.org/coco-mini",
        tasks={"detection"},
    )


@pytest.fixture()
def kitti_descriptor():
    return DatasetDescriptor(slug="kitti-mini", name="Mini KITTI", license=NC_SA, tasks={"detection"})


@pytest.fixture()
def vg_descriptor():
    return DatasetDescriptor(slug="vg-mini", name="Mini VG", license=CC_BY, tasks={"classification"})


@pytest.fixture()
def coco_bundle(coco_descriptor):
    return parse_coco((DATA / "mini_coco.json").read_text(), coco_descriptor)


@pytest.fixture()
def kitti_bundle(kitti_descriptor):
    label_files = {p.stem: p.read_text() for p in sorted((DATA / "kitti").glob("*.txt"))}
    sizes = {k: tuple(v) for k, v in json.loads((DATA / "kitti_sizes.json").read_text()).items()}
    bundle = parse_kitti(label_files, sizes, kitti_descriptor)
    load_attributes((DATA / "kitti_attrs.json").read_text(), bundle)
    return bundle


@pytest.fixture()
def vg_bundle(vg_descriptor):
    return parse_classification((DATA / "mini_cls.csv").read_text(), vg_descriptor)


@pytest.fixture()
def person_taxonomy():
    return load_taxonomy((DATA / "taxonomy_person.json").read_text())


@pytest.fixture()
def full_taxonomy():
    return load_taxonomy((DATA / "taxonomy_full.json").read_text())


@pytest.fixture()
def fixture_store(coco_bundle, kitti_bundle, vg_bundle, full_taxonomy):
    """The three mini datasets, taxonomy applied, entailments materialized."""
    store = TripleStore()
    bootstrap_schema(store)
    apply_taxonomy(full_taxonomy, store)
    for bundle in (coco_bundle, kitti_bundle, vg_bundle):
        map_to_triples(bundle, full_taxonomy, store)
    materialize(store)
    return store


@pytest.fixture()
def raw_fixture_store(coco_bundle, kitti_bundle, vg_bundle, full_taxonomy):
    """Same data but without materialization."""
    store = TripleStore()
    bootstrap_schema(store)
    apply_taxonomy(full_taxonomy, store)
    for bundle in (coco_bundle, kitti_bundle, vg_bundle):
        map_to_triples(bundle, full_taxonomy, store)
    return store


@pytest.fixture()
def twelve_image_store():
    """Synthetic 12-image classification dataset."""
    rows = ["file_path,label,width,height"]
    labels = ["cat", "dog", "bird"]
    for i in range(12):
        rows.append(f"zoo/{i:04d}.jpg,{labels[i % 3]},64,64")
    descriptor = DatasetDescriptor(slug="zoo-mini", name="Zoo", license=CC_BY, tasks={"classification"})
    bundle = parse_classification("\n".join(rows) + "\n", descriptor)
    store = TripleStore()
    bootstrap_schema(store)
    map_to_triples(bundle, None, store)
    return store


PREFIX_HEADER = (
    "PREFIX cv: <http://vision.semkg.org/onto#>\n"
    f"PREFIX : <{CONCEPT}>\n"
)


def query_text(body: str) -> str:
    return PREFIX_HEADER + body
