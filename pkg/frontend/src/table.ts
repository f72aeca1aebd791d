/** Results table rendering. */

import { SparqlResults, SparqlTerm } from "./types.js";

function cellText(term: SparqlTerm | undefined): string {
  if (!term) return "";
  if (term.type === "literal" && term.datatype) {
    return term.value;
  }
  return term.value;
}

export function renderResultsTable(results: SparqlResults): HTMLTableElement {
  const table = document.createElement("table");
  table.className = "results";
  const head = table.createTHead().insertRow();
  for (const variable of results.head.vars) {
    const th = document.createElement("th");
    th.textContent = `?${variable}`;
    head.appendChild(th);
  }
  const body = table.createTBody();
  for (const binding of results.results.bindings) {
    const row = body.insertRow();
    for (const variable of results.head.vars) {
      row.insertCell().textContent = cellText(binding[variable]);
    }
  }
  return table;
}
