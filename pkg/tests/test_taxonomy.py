"""Taxonomy loading, enrichment fixpoint, and the BFS closure oracle."""

import json
import random

import pytest

from cvkg import Triple, TripleStore, bootstrap_schema, iri, materialize, retract_inferred
from cvkg import vocab
from cvkg.errors import TaxonomyError
from cvkg.taxonomy import apply_taxonomy, load_taxonomy

SUB = vocab.SUB_CLASS_OF
TYPE = vocab.RDF_TYPE
LABEL = vocab.HAS_LABEL


def test_load_person_fixture(person_taxonomy):
    assert len(person_taxonomy.alignments) == 3
    assert len(person_taxonomy.axioms) == 2
    assert person_taxonomy.lookup("kitti-mini", "Pedestrian").endswith("#Pedestrian")
    assert person_taxonomy.lookup("kitti-mini", "nope") is None


def test_self_loop_is_cycle():
    doc = {"alignments": [], "axioms": [{"sub": "http://c/A", "super": "http://c/A"}], "concepts": {}}
    with pytest.raises(TaxonomyError, match="cycle-detected"):
        load_taxonomy(json.dumps(doc))


def test_cycle_reports_members():
    doc = {
        "axioms": [
            {"sub": "http://c/A", "super": "http://c/B"},
            {"sub": "http://c/B", "super": "http://c/C"},
            {"sub": "http://c/C", "super": "http://c/A"},
        ]
    }
    with pytest.raises(TaxonomyError) as exc:
        load_taxonomy(json.dumps(doc))
    message = str(exc.value)
    assert all(n in message for n in ("http://c/A", "http://c/B", "http://c/C"))


def test_empty_file_is_valid():
    table = load_taxonomy("")
    assert table.alignments == {} and table.axioms == []


def test_duplicate_alignment_rejected():
    doc = {
        "alignments": [
            {"dataset": "d", "rawLabel": "x", "concept": "http://c/X"},
            {"dataset": "d", "rawLabel": "x", "concept": "http://c/Y"},
        ],
        "concepts": {"http://c/X": "x", "http://c/Y": "y"},
    }
    with pytest.raises(TaxonomyError, match="duplicate-alignment"):
        load_taxonomy(json.dumps(doc))


def test_dangling_concept_rejected():
    doc = {"alignments": [{"dataset": "d", "rawLabel": "x", "concept": "http://c/X"}], "concepts": {}}
    with pytest.raises(TaxonomyError, match="dangling concept"):
        load_taxonomy(json.dumps(doc))


def test_apply_counts_and_idempotence(person_taxonomy):
    store = TripleStore()
    bootstrap_schema(store)
    assert apply_taxonomy(person_taxonomy, store) == 5  # 2 subClassOf + 3 names
    assert apply_taxonomy(person_taxonomy, store) == 0


def test_apply_on_partially_asserted_store(person_taxonomy):
    store = TripleStore()
    bootstrap_schema(store)
    sub, sup = person_taxonomy.axioms[0]
    store.insert(Triple(iri(sub), SUB, iri(sup)))
    assert apply_taxonomy(person_taxonomy, store) == 4


def test_chain_materialization_exact():
    """A<:B<:C with x rdf:type A derives exactly A<:C, x:B, x:C."""
    store = TripleStore()  # intentionally unbootstrapped: just the chain
    a, b, c, x = (iri(f"http://t/{n}") for n in "ABCx")
    store.insert(Triple(a, SUB, b))
    store.insert(Triple(b, SUB, c))
    store.insert(Triple(x, TYPE, a))
    assert materialize(store) == 3
    assert store.contains(Triple(a, SUB, c))
    assert store.contains(Triple(x, TYPE, b))
    assert store.contains(Triple(x, TYPE, c))
    (derived,) = [t for t in store.match(a, SUB, c)]
    assert derived.inferred is True


def test_label_lifting(person_taxonomy):
    store = TripleStore()
    bootstrap_schema(store)
    apply_taxonomy(person_taxonomy, store)
    ann = iri("http://e/ann")
    ped = iri("http://vision.semkg.org/concept#Pedestrian")
    person = iri("http://vision.semkg.org/concept#Person")
    store.insert(Triple(ann, LABEL, ped))
    materialize(store)
    assert store.contains(Triple(ann, LABEL, person))
    assert store.count_match(None, LABEL, person) == 1


def test_schema_only_store_infers_segmentation_transitivity():
    store = TripleStore()
    bootstrap_schema(store)
    added = materialize(store)
    assert added == 1  # InstanceSegmentation <: Classification is the only new fact
    assert store.contains(
        Triple(vocab.INSTANCE_SEGMENTATION_ANNOTATION, SUB, vocab.CLASSIFICATION_ANNOTATION)
    )


def test_retract_inferred_roundtrip():
    store = TripleStore()
    a, b, c, x = (iri(f"http://t/{n}") for n in "ABCx")
    store.insert(Triple(a, SUB, b))
    store.insert(Triple(b, SUB, c))
    store.insert(Triple(x, TYPE, a))
    n = materialize(store)
    assert retract_inferred(store) == n
    assert retract_inferred(store) == 0
    before = set(store.iter_all())
    assert materialize(store) == n
    after_retract_again = materialize(store)
    assert after_retract_again == 0
    assert {t for t in store.iter_all() if not t.inferred} == before


def test_materialize_never_touches_asserted():
    store = TripleStore()
    bootstrap_schema(store)
    a, b = iri("http://t/A"), iri("http://t/B")
    store.insert(Triple(a, SUB, b))
    asserted_before = {t for t in store.iter_all() if not t.inferred}
    materialize(store)
    asserted_after = {t for t in store.iter_all() if not t.inferred}
    assert asserted_before == asserted_after


def _bfs_closure(edges):
    """Per-node BFS reachability, reflexive pairs excluded (the oracle)."""
    adj = {}
    nodes = set()
    for s, t in edges:
        adj.setdefault(s, set()).add(t)
        nodes.update((s, t))
    closure = set()
    for start in nodes:
        seen = set()
        queue = list(adj.get(start, ()))
        while queue:
            node = queue.pop()
            if node in seen:
                continue
            seen.add(node)
            queue.extend(adj.get(node, ()))
        closure.update((start, node) for node in seen if node != start)
    return closure


def _random_dag(rng, max_nodes=30):
    n = rng.randrange(2, max_nodes + 1)
    order = list(range(n))
    rng.shuffle(order)
    edges = set()
    for _ in range(rng.randrange(1, 2 * n)):
        i, j = sorted(rng.sample(range(n), 2))
        edges.add((order[i], order[j]))  # respects a topological order: acyclic
    return edges


def test_closure_matches_bfs_oracle_on_random_dags():
    rng = random.Random(2024)
    for _ in range(50):
        edges = _random_dag(rng)
        store = TripleStore()
        name = lambda k: iri(f"http://n/{k}")
        for s, t in edges:
            store.insert(Triple(name(s), SUB, name(t)))
        materialize(store)
        got = {
            (t.subject.value, t.object.value)
            for t in store.match(None, SUB, None)
            if t.inferred
        }
        expected_pairs = _bfs_closure(edges) - edges
        expected = {(f"http://n/{s}", f"http://n/{t}") for s, t in expected_pairs}
        assert got == expected


def test_rule_order_independence_via_shuffled_insertion():
    """Shuffling the asserted triples (hence delta orders) cannot change the
    materialized store."""
    rng = random.Random(7)
    edges = _random_dag(rng, max_nodes=15)
    entities = [(rng.randrange(15), rng.randrange(15)) for _ in range(10)]

    def build(seed):
        order_rng = random.Random(seed)
        store = TripleStore()
        triples = [Triple(iri(f"http://n/{s}"), SUB, iri(f"http://n/{t}")) for s, t in edges]
        triples += [Triple(iri(f"http://e/{e}"), TYPE, iri(f"http://n/{c}")) for e, c in entities]
        triples += [Triple(iri(f"http://a/{e}"), LABEL, iri(f"http://n/{c}")) for e, c in entities]
        order_rng.shuffle(triples)
        for t in triples:
            store.insert(t)
        materialize(store)
        return {(t.subject, t.predicate, t.object, t.inferred) for t in store.iter_all()}

    assert build(1) == build(2) == build(3)


def test_query_unification_property(fixture_store):
    """e matches (?a cv:hasLabel C) after materialization iff e has an
    asserted label C' with C' <=* C (brute force over the fixture store)."""
    asserted = {}
    sub_edges = set()
    for t in fixture_store.iter_all():
        if t.predicate == LABEL and not t.inferred:
            asserted.setdefault(t.subject, set()).add(t.object)
        if t.predicate == SUB and not t.inferred:
            sub_edges.add((t.subject.value, t.object.value))
    closure = _bfs_closure(sub_edges)

    def reaches(c_from, c_to):
        return c_from == c_to or (c_from.value, c_to.value) in closure

    labels = {t.object for t in fixture_store.match(None, LABEL, None)}
    for concept in labels:
        via_query = {t.subject for t in fixture_store.match(None, LABEL, concept)}
        via_brute = {
            e for e, asserted_cs in asserted.items() if any(reaches(c, concept) for c in asserted_cs)
        }
        assert via_query == via_brute, concept
