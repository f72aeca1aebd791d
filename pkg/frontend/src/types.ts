/** Wire types for the backend HTTP contract. */

export interface SparqlTerm {
  type: "uri" | "literal" | "bnode";
  value: string;
  datatype?: string;
}

export type SparqlBinding = Record<string, SparqlTerm>;

export interface SparqlResults {
  head: { vars: string[] };
  results: { bindings: SparqlBinding[] };
}

export interface SparqlErrorBody {
  error: { message: string; line?: number; column?: number; expected?: string[] };
}

export interface DatasetInfo {
  slug: string;
  name: string;
  license: string;
  tasks: string[];
  imageCount: number;
  sourceUrl?: string;
}

export interface CategoryEntry {
  iri: string;
  name: string;
  kind: "concept" | "raw";
  dataset: string;
  annotationCount: number;
  tasks: string[];
}

export interface Statistics {
  totals: { datasets: number; images: number; annotations: number; triples: number };
  perTask: Record<string, { datasets: number; images: number; annotations: number; triples: number }>;
  perDataset: Record<
    string,
    { name: string; tasks: string[]; images: number; annotations: number; triples: number }
  >;
}
