import pytest

from cvkg import catalog, vocab


def test_datasets_list(fixture_store):
    datasets = catalog.list_datasets(fixture_store)
    assert [d["slug"] for d in datasets] == ["coco-mini", "kitti-mini", "vg-mini"]
    coco = datasets[0]
    assert coco["name"] == "Mini COCO"
    assert coco["imageCount"] == 3
    assert coco["tasks"] == ["detection"]
    assert coco["sourceUrl"] == "https://example.org/coco-mini"
    vg = datasets[2]
    assert vg["imageCount"] == 6
    assert "sourceUrl" not in vg


def test_categories_keyword_filter(fixture_store):
    entries = catalog.list_categories(fixture_store, dataset="kitti-mini", q="ped")
    assert len(entries) == 1
    assert entries[0]["name"] == "pedestrian"
    assert entries[0]["annotationCount"] == 2
    assert entries[0]["kind"] == "concept"


def test_categories_raw_label(fixture_store):
    entries = catalog.list_categories(fixture_store, dataset="kitti-mini", q="cyc")
    assert len(entries) == 1
    assert entries[0]["kind"] == "raw"
    assert entries[0]["name"] == "Cyclist"
    assert entries[0]["annotationCount"] == 1


def test_categories_task_filter(fixture_store):
    detection = catalog.list_categories(fixture_store, task="detection")
    assert all("detection" in e["tasks"] for e in detection)
    classification = catalog.list_categories(fixture_store, task="classification")
    assert {e["dataset"] for e in classification} == {"vg-mini"}


def test_categories_unknown_dataset(fixture_store):
    with pytest.raises(KeyError):
        catalog.list_categories(fixture_store, dataset="nope")


def test_statistics_totals_equal_countmatch(fixture_store):
    stats = catalog.statistics(fixture_store)
    totals = stats["totals"]
    assert totals["datasets"] == 3
    assert totals["images"] == fixture_store.count_match(None, vocab.RDF_TYPE, vocab.IMAGE) == 13
    assert totals["annotations"] == fixture_store.count_match(None, vocab.HAS_ANNOTATION, None) == 20
    assert totals["triples"] == fixture_store.size()


def test_statistics_per_dataset(raw_fixture_store):
    # pre-materialization: the per-dataset triple attribution equals the
    # closed-form emission counts exactly
    stats = catalog.statistics(raw_fixture_store)
    per = stats["perDataset"]
    assert per["coco-mini"]["images"] == 3
    assert per["coco-mini"]["annotations"] == 5
    assert per["kitti-mini"]["images"] == 4
    assert per["kitti-mini"]["annotations"] == 9
    assert per["vg-mini"]["images"] == 6
    assert per["vg-mini"]["annotations"] == 6
    # coco: ds(4+1task+1src=6) + imgs 3*6 + anns 5*10 = 74
    assert per["coco-mini"]["triples"] == 74
    # kitti: ds(4+1) + imgs(6+8+6+7=27) + anns 9*10 = 122
    assert per["kitti-mini"]["triples"] == 122
    # vg: ds(4+1) + imgs 6*6 + anns 6*4 = 65
    assert per["vg-mini"]["triples"] == 65


def test_statistics_per_task(fixture_store):
    stats = catalog.statistics(fixture_store)
    detection = stats["perTask"]["detection"]
    assert detection["datasets"] == 2
    assert detection["images"] == 7
    assert detection["annotations"] == 14
    classification = stats["perTask"]["classification"]
    assert classification["datasets"] == 1
    assert classification["images"] == 6
