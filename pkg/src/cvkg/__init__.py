"""cvkg: unified RDF knowledge graph toolkit for computer-vision datasets.

Ingest COCO/VOC/KITTI/classification annotations into an indexed triple
store, align labels through a concept taxonomy, materialize RDFS entailments,
query with a SPARQL subset, and export license-filtered composite datasets.
"""

from ._kernel import BACKEND as KERNEL_BACKEND
from .bundle import AnnotationRecord, DatasetBundle, DatasetDescriptor, ImageRecord
from .export import CompositeManifest, ExportRequest, assign_split, build_manifest
from .mapping import MappingRules, expected_triple_count, map_to_triples
from .ntriples import dump as dump_ntriples
from .ntriples import load as load_ntriples
from .sparql import evaluate, explain_join_order, parse_query
from .store import StoreSnapshot, TripleStore
from .taxonomy import apply_taxonomy, load_taxonomy, materialize, retract_inferred
from .terms import Term, Triple, blank, iri, literal
from .vocab import bootstrap_schema, validate

__version__ = "0.1.0"

__all__ = [
    "AnnotationRecord",
    "CompositeManifest",
    "DatasetBundle",
    "DatasetDescriptor",
    "ExportRequest",
    "ImageRecord",
    "KERNEL_BACKEND",
    "MappingRules",
    "StoreSnapshot",
    "Term",
    "Triple",
    "TripleStore",
    "apply_taxonomy",
    "assign_split",
    "blank",
    "bootstrap_schema",
    "build_manifest",
    "dump_ntriples",
    "evaluate",
    "expected_triple_count",
    "explain_join_order",
    "iri",
    "literal",
    "load_ntriples",
    "load_taxonomy",
    "map_to_triples",
    "materialize",
    "parse_query",
    "retract_inferred",
    "validate",
]
