/** Statistics view: per-task and per-dataset counts mirroring /statistics. */

import { Statistics } from "./types.js";

export interface StatRow {
  label: string;
  datasets: number;
  images: number;
  annotations: number;
  triples: number;
}

/** Flatten the payload into display rows; the last row is the total. */
export function statisticsRows(stats: Statistics): StatRow[] {
  const rows: StatRow[] = [];
  for (const [task, counts] of Object.entries(stats.perTask)) {
    if (counts.datasets === 0) continue;
    rows.push({ label: task, ...counts });
  }
  rows.push({
    label: "total",
    datasets: stats.totals.datasets,
    images: stats.totals.images,
    annotations: stats.totals.annotations,
    triples: stats.totals.triples,
  });
  return rows;
}

export function renderStatistics(stats: Statistics): HTMLTableElement {
  const table = document.createElement("table");
  table.className = "results";
  const head = table.createTHead().insertRow();
  for (const title of ["visual task", "datasets", "images", "annotations", "triples"]) {
    const th = document.createElement("th");
    th.textContent = title;
    head.appendChild(th);
  }
  const body = table.createTBody();
  for (const row of statisticsRows(stats)) {
    const tr = body.insertRow();
    tr.insertCell().textContent = row.label;
    tr.insertCell().textContent = String(row.datasets);
    tr.insertCell().textContent = String(row.images);
    tr.insertCell().textContent = String(row.annotations);
    tr.insertCell().textContent = String(row.triples);
  }
  return table;
}
