"""Compare the compiled search kernel against the pure-numpy fallback.

Usage: python3 benchmarks/bench_kernel.py [--triples N]

Measures bulk ingest throughput, point/count lookups, selective BGP
evaluation, and forced full-scan evaluation for both backends.
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from cvkg import TripleStore, evaluate, iri, parse_query
from cvkg._kernel import BACKEND


def build_store(backend: str, n_triples: int) -> tuple[TripleStore, float]:
    store = TripleStore(backend=backend)
    type_p = store.intern(iri("http://b/type"))
    label_p = store.intern(iri("http://b/label"))
    link_p = store.intern(iri("http://b/link"))
    cls = store.intern(iri("http://b/Thing"))
    labels = [store.intern(iri(f"http://b/l{k}")) for k in range(500)]
    rare = store.intern(iri("http://b/l-rare"))

    rng = random.Random(1)
    n_entities = n_triples // 3
    rows_s, rows_p, rows_o = [], [], []
    rare_left = 50
    for i in range(n_entities):
        e = store.intern(iri(f"http://b/e{i}"))
        rows_s.append(e); rows_p.append(type_p); rows_o.append(cls)
        if rare_left and rng.random() < 0.0005:
            rare_left -= 1
            rows_s.append(e); rows_p.append(label_p); rows_o.append(rare)
        else:
            rows_s.append(e); rows_p.append(label_p); rows_o.append(labels[rng.randrange(500)])
        rows_s.append(e); rows_p.append(link_p); rows_o.append(store.intern(iri(f"http://b/e{rng.randrange(n_entities)}")))

    start = time.perf_counter()
    store.insert_ids(np.array(rows_s, np.int64), np.array(rows_p, np.int64), np.array(rows_o, np.int64))
    store._kernel.flush()
    return store, time.perf_counter() - start


def best_of(fn, repeat=5) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(backend: str, n_triples: int) -> dict:
    store, merge_seconds = build_store(backend, n_triples)
    snap = store.snapshot()
    label_p = snap.term_id(iri("http://b/label"))
    rare = snap.term_id(iri("http://b/l-rare"))

    count_t = best_of(lambda: [snap.count_ids(None, label_p, o) for o in range(rare - 20, rare + 20)])
    scan_t = best_of(lambda: snap.scan_ids(None, label_p, rare))

    query = parse_query(
        "SELECT ?e ?x WHERE { ?e <http://b/label> <http://b/l-rare> . ?e <http://b/link> ?x }"
    )
    join_t = best_of(lambda: evaluate(query, snap))
    full_t = best_of(lambda: evaluate(query, snap, force_scan=True), repeat=2)

    return {
        "backend": backend,
        "merge_s": merge_seconds,
        "count40_us": count_t * 1e6,
        "scan_us": scan_t * 1e6,
        "join_ms": join_t * 1e3,
        "fullscan_ms": full_t * 1e3,
        "size": snap.size(),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--triples", type=int, default=1_000_000)
    args = parser.parse_args()

    backends = ["python"]
    if BACKEND == "compiled":
        backends.append("compiled")
    else:
        print("note: compiled kernel not built; benchmarking the fallback only")

    results = [bench(b, args.triples) for b in backends]
    header = f"{'backend':<10} {'triples':>9} {'merge s':>8} {'40 counts us':>13} {'scan us':>9} {'join ms':>9} {'full-scan ms':>13}"
    print(header)
    print("-" * len(header))
    for r in results:
        print(
            f"{r['backend']:<10} {r['size']:>9} {r['merge_s']:>8.2f} {r['count40_us']:>13.1f} "
            f"{r['scan_us']:>9.1f} {r['join_ms']:>9.2f} {r['fullscan_ms']:>13.1f}"
        )
    if len(results) == 2:
        py, cy = results
        print(
            f"\ncompiled speedup: counts {py['count40_us'] / cy['count40_us']:.1f}x, "
            f"scan {py['scan_us'] / cy['scan_us']:.1f}x, join {py['join_ms'] / cy['join_ms']:.1f}x"
        )


if __name__ == "__main__":
    main()
