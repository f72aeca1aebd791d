import random

import pytest

from cvkg import TripleStore, dump_ntriples, load_ntriples
from cvkg.errors import NTriplesError
from cvkg.ntriples import parse
from cvkg.terms import Term, Triple, iri, literal


def test_empty_store_dumps_empty_text():
    assert dump_ntriples(TripleStore()) == ""


def test_dump_is_sorted_with_trailing_newline():
    store = TripleStore()
    store.insert(Triple(iri("http://b/s"), iri("http://b/p"), literal("2")))
    store.insert(Triple(iri("http://a/s"), iri("http://a/p"), literal("1")))
    text = dump_ntriples(store)
    lines = text.splitlines()
    assert lines == sorted(lines)
    assert text.endswith("\n")
    assert len(lines) == 2


def test_typed_literal_line_parses():
    line = '<a:s> <a:p> "5"^^<http://www.w3.org/2001/XMLSchema#integer> .\n'
    (t,) = list(parse(line))
    assert t.object.kind == "literal"
    assert t.object.value == "5"
    assert t.object.datatype == "http://www.w3.org/2001/XMLSchema#integer"


def test_plain_literal_gets_string_datatype():
    (t,) = list(parse('<a:s> <a:p> "hi" .\n'))
    assert t.object.datatype == "http://www.w3.org/2001/XMLSchema#string"


def test_malformed_line_reports_line_number():
    text = '<a:s> <a:p> "ok" .\n<a:s2> <a:p2> "ok" .\n<a:s3> <a:p3> broken .\n'
    with pytest.raises(NTriplesError) as exc:
        list(parse(text))
    assert exc.value.line == 3
    assert exc.value.column > 0


def test_bad_iri_reports_position():
    with pytest.raises(NTriplesError) as exc:
        list(parse("<not-absolute> <a:p> <a:o> .\n"))
    assert exc.value.line == 1


def test_escapes_round_trip():
    tricky = 'tab\t"quote"\\backslash\nnewline'
    store = TripleStore()
    store.insert(Triple(iri("http://e/s"), iri("http://e/p"), literal(tricky)))
    text = dump_ntriples(store)
    loaded = load_ntriples(text)
    (t,) = list(loaded.match())
    assert t.object.value == tricky


def test_dump_load_dump_fixpoint():
    rng = random.Random(5)
    store = TripleStore()
    for i in range(120):
        subj = iri(f"http://e/s{rng.randrange(20)}")
        pred = iri(f"http://e/p{rng.randrange(6)}")
        if rng.random() < 0.4:
            obj = literal(f"value {rng.randrange(30)}")
        elif rng.random() < 0.5:
            obj = Term("literal", str(rng.randrange(100)), "http://www.w3.org/2001/XMLSchema#integer")
        else:
            obj = iri(f"http://e/o{rng.randrange(20)}")
        store.insert(Triple(subj, pred, obj))
    first = dump_ntriples(store)
    again = dump_ntriples(load_ntriples(first))
    assert first == again


def test_load_preserves_membership_and_size():
    store = TripleStore()
    store.insert(Triple(iri("http://e/s"), iri("http://e/p"), iri("http://e/o")))
    store.insert(Triple(Term("blank", "_:b1"), iri("http://e/p"), literal("v")))
    text = dump_ntriples(store)
    loaded = load_ntriples(text)
    assert loaded.size() == store.size()
    assert set(loaded.iter_all()) == set(store.iter_all())


def test_duplicates_collapse_on_load():
    text = '<a:s> <a:p> "x" .\n<a:s> <a:p> "x" .\n'
    assert load_ntriples(text).size() == 1


def test_mark_inferred_flag():
    text = '<a:s> <a:p> "x" .\n'
    loaded = load_ntriples(text, mark_inferred=True)
    (t,) = list(loaded.match())
    assert t.inferred is True
    assert dump_ntriples(loaded, include_inferred=False) == ""
    assert dump_ntriples(loaded, include_inferred=True) == text


def test_comments_and_blank_lines_skipped():
    text = '# header comment\n\n<a:s> <a:p> "x" .\n'
    assert load_ntriples(text).size() == 1
