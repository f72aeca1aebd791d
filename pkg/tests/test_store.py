"""Store-level invariants: idempotent insert, index coherence, match oracle,
countMatch equality, snapshot behavior."""

import random


from cvkg import Triple, TripleStore, iri, literal
from cvkg.terms import Term


def _random_term(rng) -> Term:
    kind = rng.randrange(3)
    if kind == 0:
        return iri(f"http://t/{rng.randrange(25)}")
    if kind == 1:
        return Term("blank", f"_:b{rng.randrange(8)}")
    return literal(str(rng.randrange(12)))


def _random_triple(rng) -> Triple:
    while True:
        s = _random_term(rng)
        p = iri(f"http://p/{rng.randrange(8)}")
        o = _random_term(rng)
        if s.kind != "literal":
            return Triple(s, p, o)


def _fill(store, triples):
    for t in triples:
        store.insert(t)


def test_insert_idempotent():
    store = TripleStore()
    t = Triple(iri("http://e/s"), iri("http://e/p"), literal("x"))
    assert store.insert(t) is True
    assert store.insert(t) is False
    assert store.size() == 1


def test_insert_asserted_over_inferred_clears_flag():
    store = TripleStore()
    t_inf = Triple(iri("http://e/s"), iri("http://e/p"), literal("x"), inferred=True)
    t_ass = Triple(iri("http://e/s"), iri("http://e/p"), literal("x"))
    assert store.insert(t_inf) is True
    assert store.flag_of(t_ass) == 1
    assert store.insert(t_ass) is False
    assert store.size() == 1
    (found,) = list(store.match(t_ass.subject, None, None))
    assert found.inferred is False

    # and in the other insert order the asserted flag survives
    other = TripleStore()
    assert other.insert(t_ass) is True
    assert other.insert(t_inf) is False
    (found,) = list(other.match(t_ass.subject, None, None))
    assert found.inferred is False


def test_shuffled_duplicate_extended_insert_yields_identical_store():
    rng = random.Random(42)
    triples = [_random_triple(rng) for _ in range(300)]
    extended = triples + rng.sample(triples, 150)
    rng.shuffle(extended)

    a, b = TripleStore(), TripleStore()
    _fill(a, triples)
    _fill(b, extended)
    assert a.size() == b.size()
    assert {t for t in a.iter_all()} == {t for t in b.iter_all()}


def test_match_equals_linear_scan_oracle():
    rng = random.Random(1)
    triples = list({_random_triple(rng) for _ in range(400)})
    store = TripleStore()
    _fill(store, triples)

    for _ in range(200):
        s = rng.choice(triples).subject if rng.random() < 0.5 else None
        p = rng.choice(triples).predicate if rng.random() < 0.5 else None
        o = rng.choice(triples).object if rng.random() < 0.5 else None
        expected = {
            t for t in triples
            if (s is None or t.subject == s) and (p is None or t.predicate == p) and (o is None or t.object == o)
        }
        got = set(store.match(s, p, o))
        assert got == expected
        assert store.count_match(s, p, o) == len(expected)


def test_index_coherence_across_orderings():
    """All three orderings hold the same triples: every pattern shape agrees
    with the full enumeration regardless of which index serves it."""
    rng = random.Random(3)
    triples = [_random_triple(rng) for _ in range(1000)]
    store = TripleStore()
    _fill(store, triples)
    everything = set(store.match())
    assert len(everything) == store.size()

    for t in rng.sample(triples, 60):
        by_s = set(store.match(t.subject, None, None))
        by_p = set(store.match(None, t.predicate, None))
        by_o = set(store.match(None, None, t.object))
        assert t in by_s and t in by_p and t in by_o
        assert by_s == {x for x in everything if x.subject == t.subject}
        assert by_p == {x for x in everything if x.predicate == t.predicate}
        assert by_o == {x for x in everything if x.object == t.object}


def test_match_unknown_term_is_empty():
    store = TripleStore()
    store.insert(Triple(iri("http://e/s"), iri("http://e/p"), literal("x")))
    assert list(store.match(iri("http://nowhere/x"), None, None)) == []
    assert store.count_match(None, None, literal("unseen")) == 0


def test_empty_store_match():
    store = TripleStore()
    assert list(store.match()) == []
    assert store.count_match() == 0
    assert store.size() == 0


def test_snapshot_does_not_see_later_writes():
    store = TripleStore()
    store.insert(Triple(iri("http://e/s"), iri("http://e/p"), literal("1")))
    snap = store.snapshot()
    store.insert(Triple(iri("http://e/s2"), iri("http://e/p"), literal("2")))
    assert snap.size() == 1
    assert store.size() == 2
    assert len(list(snap.match())) == 1


def test_backend_override():
    store = TripleStore(backend="python")
    assert store.backend == "python"
    t = Triple(iri("http://e/s"), iri("http://e/p"), literal("x"))
    store.insert(t)
    assert store.contains(t)


def test_term_dictionary_ids_dense_and_stable():
    store = TripleStore()
    a = store.intern(iri("http://e/a"))
    b = store.intern(iri("http://e/b"))
    assert (a, b) == (0, 1)
    assert store.intern(iri("http://e/a")) == 0
    assert store.term(1).value == "http://e/b"
