"""Index kernel: backend primitives, bulk merge semantics, snapshot isolation."""

import random

import numpy as np
import pytest

from cvkg._kernel import BACKEND, IndexKernel, get_primitives
from cvkg._kernel.pyindex import find_positions as py_findpos
from cvkg._kernel.pyindex import narrow_range as py_narrow

BACKENDS = ["python"] + (["compiled"] if BACKEND == "compiled" else [])


def random_rows(rng, n, pool=20):
    return [(rng.randrange(pool), rng.randrange(pool), rng.randrange(pool)) for _ in range(n)]


@pytest.mark.parametrize("backend", BACKENDS)
def test_insert_and_contains(backend):
    k = IndexKernel(backend)
    assert k.insert(1, 2, 3) is True
    assert k.insert(1, 2, 3) is False
    assert k.size() == 1
    assert k.contains(1, 2, 3)
    assert not k.contains(3, 2, 1)
    assert k.count(1, None, None) == 1
    assert k.count(None, None, None) == 1


@pytest.mark.parametrize("backend", BACKENDS)
def test_asserted_wins_over_inferred(backend):
    k = IndexKernel(backend)
    assert k.insert(1, 2, 3, inferred=True) is True
    assert k.flag_of(1, 2, 3) == 1
    # flush so the upgrade exercises the base-array path as well
    k.flush()
    assert k.insert(1, 2, 3, inferred=False) is False
    assert k.size() == 1
    assert k.flag_of(1, 2, 3) == 0
    # inferred insert over asserted stays asserted
    assert k.insert(1, 2, 3, inferred=True) is False
    assert k.flag_of(1, 2, 3) == 0


@pytest.mark.parametrize("backend", BACKENDS)
def test_bulk_matches_single_inserts(backend):
    rng = random.Random(7)
    rows = random_rows(rng, 500)
    singles = IndexKernel(backend)
    added_single = sum(singles.insert(*r) for r in rows)

    arr = np.array(rows, dtype=np.int64)
    bulk = IndexKernel(backend)
    added_bulk = bulk.insert_bulk(arr[:, 0], arr[:, 1], arr[:, 2])

    assert added_single == added_bulk == len(set(rows))
    a = singles.reader().full_columns()
    b = bulk.reader().full_columns()
    for x, y in zip(a, b):
        assert np.array_equal(x, y)


@pytest.mark.parametrize("backend", BACKENDS)
def test_scan_order_and_patterns(backend):
    rng = random.Random(13)
    rows = sorted(set(random_rows(rng, 300, pool=10)))
    k = IndexKernel(backend)
    arr = np.array(rows, dtype=np.int64)
    k.insert_bulk(arr[:, 0], arr[:, 1], arr[:, 2])

    for pattern in [(None, None, None), (3, None, None), (None, 4, None), (None, None, 5),
                    (3, 4, None), (None, 4, 5), (3, None, 5), (3, 4, 5)]:
        expected = [r for r in rows
                    if all(p is None or r[i] == p for i, p in enumerate(pattern))]
        rs, rp, ro = k.scan(*pattern)
        got = list(zip(rs.tolist(), rp.tolist(), ro.tolist()))
        assert sorted(got) == sorted(expected), pattern
        assert k.count(*pattern) == len(expected)
        # deterministic: repeated scans identical
        again = k.scan(*pattern)
        assert got == list(zip(*(c.tolist() for c in again)))


@pytest.mark.parametrize("backend", BACKENDS)
def test_remove_inferred(backend):
    k = IndexKernel(backend)
    k.insert(1, 1, 1, inferred=False)
    k.insert(2, 2, 2, inferred=True)
    k.insert(3, 3, 3, inferred=True)
    assert k.remove_inferred() == 2
    assert k.size() == 1
    assert k.contains(1, 1, 1)
    assert k.remove_inferred() == 0


@pytest.mark.parametrize("backend", BACKENDS)
def test_snapshot_isolation(backend):
    k = IndexKernel(backend)
    k.insert(1, 2, 3)
    reader = k.freeze()
    assert reader.count(None, None, None) == 1
    k.insert(4, 5, 6)
    k.flush()
    assert reader.count(None, None, None) == 1
    assert k.count(None, None, None) == 2


@pytest.mark.parametrize("backend", BACKENDS)
def test_snapshot_flag_copy_on_write(backend):
    k = IndexKernel(backend)
    k.insert(1, 2, 3, inferred=True)
    reader = k.freeze()
    assert k.insert(1, 2, 3, inferred=False) is False  # upgrade under a snapshot
    assert k.flag_of(1, 2, 3) == 0
    _, _, _, flags = reader.full_columns()
    assert flags[0] == 1  # the published snapshot kept its view


def test_primitive_backends_agree():
    rng = random.Random(99)
    rows = sorted(set(random_rows(rng, 400, pool=15)))
    arr = np.array(rows, dtype=np.int64)
    c0 = np.ascontiguousarray(arr[:, 0])
    c1 = np.ascontiguousarray(arr[:, 1])
    c2 = np.ascontiguousarray(arr[:, 2])

    impls = [(py_narrow, py_findpos)]
    if BACKEND == "compiled":
        impls.append(get_primitives("compiled"))

    queries = np.array(random_rows(rng, 200, pool=15), dtype=np.int64)
    for narrow, findpos in impls:
        for k0 in range(15):
            assert narrow(c0, c1, c2, k0, 0, 0, 1) == py_narrow(c0, c1, c2, k0, 0, 0, 1)
        got = findpos(c0, c1, c2,
                      np.ascontiguousarray(queries[:, 0]),
                      np.ascontiguousarray(queries[:, 1]),
                      np.ascontiguousarray(queries[:, 2]))
        ref = py_findpos(c0, c1, c2,
                         np.ascontiguousarray(queries[:, 0]),
                         np.ascontiguousarray(queries[:, 1]),
                         np.ascontiguousarray(queries[:, 2]))
        assert np.array_equal(got, ref)
