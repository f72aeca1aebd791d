/** Deterministic SPARQL generation from a query draft, plus the plain-text
 * explanation shown beside the query. Output is golden-string stable: the
 * same draft always yields byte-identical text in the server's grammar. */

import { AttributeConstraint, QueryDraft } from "./draft.js";

export const CV_NAMESPACE = "http://vision.semkg.org/onto#";

function escapeLiteral(value: string): string {
  return value
    .replace(/\\/g, "\\\\")
    .replace(/"/g, '\\"')
    .replace(/\n/g, "\\n")
    .replace(/\r/g, "\\r")
    .replace(/\t/g, "\\t");
}

function attributeLine(constraint: AttributeConstraint): string {
  return `  ?img cv:${constraint.attribute} "${escapeLiteral(constraint.value)}" .`;
}

export function generateSparql(draft: QueryDraft): string {
  const lines: string[] = [`PREFIX cv: <${CV_NAMESPACE}>`, "SELECT ?img WHERE {"];

  if (draft.mode === "separate" && draft.categories.length >= 2) {
    const branches = draft.categories.map(
      (chip, i) => `  { ?img cv:hasAnnotation ?a${i} . ?a${i} cv:hasLabel <${chip.iri}> . }`
    );
    lines.push(branches.join("\n  UNION\n"));
  } else {
    draft.categories.forEach((chip, i) => {
      lines.push(`  ?img cv:hasAnnotation ?a${i} .`);
      lines.push(`  ?a${i} cv:hasLabel <${chip.iri}> .`);
    });
  }

  for (const constraint of draft.attributes) {
    lines.push(attributeLine(constraint));
  }
  lines.push(`} LIMIT ${draft.limit}`);
  return lines.join("\n");
}

/** One deterministic sentence describing the draft; the category names it
 * mentions correspond one-to-one with the label IRIs in the query. */
export function explanationText(draft: QueryDraft): string {
  const parts: string[] = [`Select up to ${draft.limit} images`];
  if (draft.categories.length > 0) {
    const joiner = draft.mode === "separate" && draft.categories.length >= 2 ? " OR " : " AND ";
    parts.push("containing " + draft.categories.map((c) => c.name).join(joiner));
    const datasets = [...new Set(draft.categories.map((c) => c.dataset))].sort();
    parts.push("from " + datasets.join(", "));
  }
  if (draft.attributes.length > 0) {
    parts.push(
      "where " + draft.attributes.map((a) => `${a.attribute} is "${a.value}"`).join(" and ")
    );
  }
  return parts.join(" ");
}

/** Label IRIs referenced by the generated query (for the coherence check). */
export function queryLabelIris(query: string): string[] {
  const out: string[] = [];
  const re = /cv:hasLabel <([^>]*)>/g;
  for (const match of query.matchAll(re)) {
    out.push(match[1]);
  }
  return out;
}
