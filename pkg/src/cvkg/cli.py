"""Operator CLI driving the batch pipeline: ingest -> taxonomy -> enrich ->
query/export/stats/serve, with N-Triples dump/load for portability.

Exit codes: 0 success, 1 usage error, 2 data error (parse/validation),
3 I/O error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import catalog, ntriples, persist, taxonomy as taxonomy_mod
from .errors import DataError, ExportError
from .export import ExportRequest, build_manifest, write_payload
from .formats import load_attributes, parse_classification, parse_coco, parse_kitti, parse_voc
from .mapping import MappingRules, default_base_iri, map_to_triples
from .bundle import DatasetDescriptor
from .server import ServiceConfig, serve
from .sparql import evaluate, parse_query, solutions_to_json
from .sparql.results import term_to_json
from .terms import TermError


@click.group(name="cvkg")
def cli():
    """Knowledge-graph toolkit for computer-vision dataset annotations."""


_store_option = click.option(
    "--store", "store_path", required=True, type=click.Path(path_type=Path), help="Store directory."
)


def _require_store(store_path: Path):
    if not persist.store_exists(store_path):
        raise OSError(f"store directory {store_path} does not exist (run ingest or load first)")
    return persist.load_store(store_path)


@cli.command()
@_store_option
@click.option("--format", "fmt", required=True, type=click.Choice(["coco", "voc", "kitti", "cls"]))
@click.option("--name", required=True, help="Human-readable dataset name.")
@click.option("--slug", required=True, help="IRI-safe dataset slug ([a-z0-9-]+).")
@click.option("--license", "license_iri", required=True, help="License IRI.")
@click.option("--source-url", default=None, help="Optional source URL.")
@click.option("--attrs", "attrs_path", type=click.Path(path_type=Path), default=None,
              help="Attribute sidecar JSON (localId -> weather/timeOfDay/illumination).")
@click.option("--sizes", "sizes_path", type=click.Path(path_type=Path), default=None,
              help="KITTI only: JSON map of file stem -> [width, height].")
@click.option("--taxonomy", "taxonomy_path", type=click.Path(path_type=Path), default=None,
              help="Taxonomy file to use for label alignment during this ingest.")
@click.option("--base-iri", default=None, help="Entity IRI base (default from VKG_BASE_IRI).")
@click.argument("paths", nargs=-1, required=True, type=click.Path(path_type=Path))
def ingest(store_path, fmt, name, slug, license_iri, source_url, attrs_path, sizes_path,
           taxonomy_path, base_iri, paths):
    """Parse annotation files and map them into the store."""
    tasks = {"coco": "detection", "voc": "detection", "kitti": "detection", "cls": "classification"}
    descriptor = DatasetDescriptor(
        slug=slug, name=name, license=license_iri, source_url=source_url, tasks={tasks[fmt]}
    )

    if fmt == "coco":
        if len(paths) != 1:
            raise click.UsageError("coco ingest takes exactly one JSON file")
        bundle = parse_coco(_read(paths[0]), descriptor)
    elif fmt == "voc":
        bundle = parse_voc([_read(p) for p in paths], descriptor)
    elif fmt == "kitti":
        if sizes_path is None:
            raise click.UsageError("kitti ingest needs --sizes")
        sizes_doc = json.loads(_read(sizes_path))
        sizes = {stem: (int(wh[0]), int(wh[1])) for stem, wh in sizes_doc.items()}
        label_files = {p.stem: _read(p) for p in paths}
        bundle = parse_kitti(label_files, sizes, descriptor)
    else:
        if len(paths) != 1:
            raise click.UsageError("cls ingest takes exactly one CSV file")
        bundle = parse_classification(_read(paths[0]), descriptor)

    if attrs_path is not None:
        for warning in load_attributes(_read(attrs_path), bundle):
            click.echo(f"warning: {warning}", err=True)

    store, meta = persist.load_store(store_path)
    if base_iri:
        meta.base_iri = base_iri
    elif not meta.base_iri:
        meta.base_iri = default_base_iri()
    table = meta.taxonomy
    if taxonomy_path is not None:
        table = taxonomy_mod.load_taxonomy(_read(taxonomy_path))
        meta.taxonomy = table

    inserted = map_to_triples(bundle, table, store, MappingRules(meta.base_iri))
    meta.descriptors[slug] = {
        "name": name,
        "license": descriptor.license,
        "sourceUrl": source_url,
        "tasks": sorted(descriptor.tasks),
    }
    persist.save_store(store_path, store, meta)
    click.echo(f"ingested {len(bundle.images)} images, {len(bundle.annotations)} annotations, "
               f"{inserted} new triples")


@cli.command("taxonomy")
@_store_option
@click.option("--file", "file_path", required=True, type=click.Path(path_type=Path))
def taxonomy_cmd(store_path, file_path):
    """Load a taxonomy file and apply its axioms and concept names."""
    table = taxonomy_mod.load_taxonomy(_read(file_path))
    store, meta = _require_store(store_path)
    inserted = taxonomy_mod.apply_taxonomy(table, store)
    aligned = taxonomy_mod.align_existing_annotations(table, store)
    meta.taxonomy = table
    persist.save_store(store_path, store, meta)
    click.echo(f"applied taxonomy: {inserted} axiom/name triples, {aligned} label alignments")


@cli.command()
@_store_option
def enrich(store_path):
    """Re-run materialization (retract inferred, then derive again)."""
    store, meta = _require_store(store_path)
    taxonomy_mod.retract_inferred(store)
    inferred = taxonomy_mod.materialize(store)
    persist.save_store(store_path, store, meta)
    click.echo(f"inferred {inferred} triples")


@cli.command()
@_store_option
@click.option("-e", "--execute", "query_text", default=None, help="Query text.")
@click.option("-f", "--file", "query_file", type=click.Path(path_type=Path), default=None)
@click.option("--json", "as_json", is_flag=True, help="SPARQL JSON results.")
@click.option("--table", "as_table", is_flag=True, help="Aligned text table (default).")
def query(store_path, query_text, query_file, as_json, as_table):
    """Evaluate a query against the store."""
    if (query_text is None) == (query_file is None):
        raise click.UsageError("provide exactly one of -e TEXT or -f FILE")
    text = query_text if query_text is not None else _read(query_file)
    store, _meta = _require_store(store_path)
    solutions = evaluate(parse_query(text), store)
    if as_json:
        click.echo(json.dumps(solutions_to_json(solutions), indent=2))
        return
    _print_table(solutions)


def _print_table(solutions):
    vars_ = solutions.variables
    rows = [[_cell(row.get(v)) for v in vars_] for row in solutions.rows]
    widths = [max([len(v)] + [len(r[i]) for r in rows]) for i, v in enumerate(vars_)]
    if vars_:
        click.echo("  ".join(v.ljust(widths[i]) for i, v in enumerate(vars_)))
        click.echo("  ".join("-" * w for w in widths))
    for r in rows:
        click.echo("  ".join(c.ljust(widths[i]) for i, c in enumerate(r)))
    click.echo(f"({len(rows)} row{'s' if len(rows) != 1 else ''})")


def _cell(term):
    if term is None:
        return ""
    encoded = term_to_json(term)
    return encoded["value"] if encoded["type"] == "uri" else repr(term)


@cli.command()
@_store_option
@click.option("--request", "request_path", required=True, type=click.Path(path_type=Path))
@click.option("--out", "out_dir", required=True, type=click.Path(path_type=Path))
def export(store_path, request_path, out_dir):
    """Build a composite dataset from an export request file."""
    request = ExportRequest.from_json_dict(json.loads(_read(request_path)))
    store, _meta = _require_store(store_path)
    manifest = build_manifest(request, store)
    payload = write_payload(request, manifest)

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest.to_json_dict(), indent=2) + "\n", encoding="utf-8"
    )
    if request.format == "coco":
        (out_dir / "annotations.json").write_text(payload, encoding="utf-8")
    elif request.format == "cls":
        (out_dir / "labels.csv").write_text(payload, encoding="utf-8")
    else:
        labels_dir = out_dir / "labels"
        labels_dir.mkdir(exist_ok=True)
        for stem, text in payload.items():
            (labels_dir / f"{stem}.txt").write_text(text, encoding="utf-8")
    click.echo(f"exported {len(manifest.images)} images, {len(manifest.annotations)} annotations "
               f"to {out_dir}")


@cli.command()
@_store_option
def stats(store_path):
    """Print the /statistics JSON."""
    store, _meta = _require_store(store_path)
    click.echo(json.dumps(catalog.statistics(store), indent=2))


@cli.command()
@_store_option
@click.option("--no-inferred", "no_inferred", is_flag=True, help="Drop inferred triples.")
@click.option("-o", "--output", "output", type=click.Path(path_type=Path), default=None)
def dump(store_path, no_inferred, output):
    """Write the store as canonical N-Triples (stdout by default)."""
    store, _meta = _require_store(store_path)
    text = ntriples.dump(store, include_inferred=not no_inferred)
    if output is None:
        click.echo(text, nl=False)
    else:
        Path(output).write_text(text, encoding="utf-8")
        click.echo(f"wrote {text.count(chr(10))} triples to {output}")


@cli.command("load")
@_store_option
@click.option("--mark-inferred", is_flag=True, help="Flag every loaded triple as inferred.")
@click.argument("nt_file", type=click.Path(path_type=Path))
def load_cmd(store_path, mark_inferred, nt_file):
    """Load an N-Triples file into the store (creates the store if missing)."""
    store, meta = persist.load_store(store_path)
    before = store.size()
    ntriples.load(_read(nt_file), mark_inferred=mark_inferred, store=store)
    persist.save_store(store_path, store, meta)
    click.echo(f"loaded {store.size() - before} new triples")


@cli.command("serve")
@_store_option
@click.option("--port", default=8080, type=int)
@click.option("--image-root", "image_roots", multiple=True,
              help="slug=directory mapping for /images (repeatable).")
@click.option("--max-rows", default=10_000, type=int)
@click.option("--cors/--no-cors", default=True)
def serve_cmd(store_path, port, image_roots, max_rows, cors):
    """Serve the SPARQL endpoint and explorer APIs over HTTP."""
    roots = {}
    for spec_item in image_roots:
        slug, _, directory = spec_item.partition("=")
        if not directory:
            raise click.UsageError("--image-root takes slug=directory")
        roots[slug] = Path(directory)
    store, meta = _require_store(store_path)
    config = ServiceConfig(
        port=port, base_iri=meta.base_iri, image_roots=roots, max_rows=max_rows, cors_allowed=cors
    )
    serve(store.snapshot(), config)


def _read(path: Path) -> str:
    return Path(path).read_text(encoding="utf-8")


def main(argv: list[str] | None = None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.Abort:
        return 1
    except (DataError, TermError) as exc:
        click.echo(f"data error: {exc}", err=True)
        return 2
    except ExportError as exc:  # pragma: no cover - ExportError is a DataError
        click.echo(f"data error: {exc}", err=True)
        return 2
    except json.JSONDecodeError as exc:
        click.echo(f"data error: invalid JSON: {exc}", err=True)
        return 2
    except OSError as exc:
        click.echo(f"i/o error: {exc}", err=True)
        return 3


if __name__ == "__main__":
    sys.exit(main())
