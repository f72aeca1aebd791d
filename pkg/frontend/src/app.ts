/** Explorer single-page app: task -> dataset -> category drill-down, drag &
 * drop query building with auto-generated SPARQL plus an explanation, result
 * table, image/box visualization, and a statistics view. */

import { ApiClient, SparqlParseError, StaleGuard } from "./api.js";
import {
  AttributeName,
  CategoryChip,
  QueryDraft,
  TaskKind,
  addCategory,
  draftValid,
  emptyDraft,
  removeCategory,
} from "./draft.js";
import { drawOverlay, LabeledBox } from "./overlay.js";
import { explanationText, generateSparql } from "./sparqlgen.js";
import { renderStatistics } from "./stats.js";
import { renderResultsTable } from "./table.js";
import { CategoryEntry, SparqlBinding, SparqlResults } from "./types.js";

const api = new ApiClient(new URLSearchParams(location.search).get("api") ?? "");
const queryGuard = new StaleGuard();

let draft: QueryDraft = emptyDraft();
let queryEdited = false;
let lastResults: SparqlResults | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const taskSelect = el<HTMLSelectElement>("task-select");
const datasetList = el<HTMLUListElement>("dataset-list");
const categoryList = el<HTMLUListElement>("category-list");
const categoryFilter = el<HTMLInputElement>("category-filter");
const chipsBox = el<HTMLDivElement>("chips");
const modeSelect = el<HTMLSelectElement>("mode-select");
const limitInput = el<HTMLInputElement>("limit-input");
const attrName = el<HTMLSelectElement>("attr-name");
const attrValue = el<HTMLInputElement>("attr-value");
const queryBox = el<HTMLTextAreaElement>("query-box");
const explanation = el<HTMLParagraphElement>("explanation");
const runButton = el<HTMLButtonElement>("run-button");
const errorBanner = el<HTMLDivElement>("error-banner");
const resultsPane = el<HTMLDivElement>("results-pane");
const vizPane = el<HTMLDivElement>("viz-pane");
const statsPane = el<HTMLDivElement>("stats-pane");

let selectedDataset: string | null = null;

function refreshDraftViews(): void {
  chipsBox.replaceChildren();
  draft.categories.forEach((chip, index) => {
    const span = document.createElement("span");
    span.className = "chip";
    span.textContent = `${chip.name} (${chip.dataset})`;
    const remove = document.createElement("button");
    remove.textContent = "x";
    remove.addEventListener("click", () => {
      draft = removeCategory(draft, index);
      refreshDraftViews();
    });
    span.appendChild(remove);
    chipsBox.appendChild(span);
  });
  draft.attributes.forEach((constraint, index) => {
    const span = document.createElement("span");
    span.className = "chip attr";
    span.textContent = `${constraint.attribute}="${constraint.value}"`;
    const remove = document.createElement("button");
    remove.textContent = "x";
    remove.addEventListener("click", () => {
      draft = { ...draft, attributes: draft.attributes.filter((_, i) => i !== index) };
      refreshDraftViews();
    });
    span.appendChild(remove);
    chipsBox.appendChild(span);
  });

  if (!queryEdited) {
    queryBox.value = generateSparql(draft);
  }
  explanation.textContent = explanationText(draft);
  runButton.disabled = !draftValid(draft) && !queryEdited;
}

async function loadDatasets(): Promise<void> {
  const task = taskSelect.value as TaskKind;
  draft = { ...draft, task };
  const datasets = await api.datasets();
  datasetList.replaceChildren();
  for (const ds of datasets.filter((d) => d.tasks.includes(task))) {
    const li = document.createElement("li");
    li.textContent = `${ds.name} (${ds.imageCount} images)`;
    li.dataset.slug = ds.slug;
    li.addEventListener("click", () => {
      selectedDataset = ds.slug;
      for (const sibling of datasetList.children) sibling.classList.remove("selected");
      li.classList.add("selected");
      void loadCategories();
    });
    datasetList.appendChild(li);
  }
  categoryList.replaceChildren();
}

async function loadCategories(): Promise<void> {
  if (!selectedDataset) return;
  const entries = await api.categories({
    dataset: selectedDataset,
    task: taskSelect.value,
    q: categoryFilter.value || undefined,
  });
  categoryList.replaceChildren();
  for (const entry of entries) {
    categoryList.appendChild(categoryItem(entry));
  }
}

function categoryItem(entry: CategoryEntry): HTMLLIElement {
  const li = document.createElement("li");
  li.textContent = `${entry.name} (${entry.annotationCount})`;
  li.draggable = true;
  li.title = entry.iri;
  const chip: CategoryChip = { iri: entry.iri, name: entry.name, dataset: entry.dataset };
  li.addEventListener("dragstart", (event) => {
    event.dataTransfer?.setData("application/json", JSON.stringify(chip));
  });
  li.addEventListener("dblclick", () => {
    draft = addCategory(draft, chip);
    queryEdited = false;
    refreshDraftViews();
  });
  return li;
}

function wireDropZone(): void {
  const zone = el<HTMLDivElement>("query-panel");
  zone.addEventListener("dragover", (event) => event.preventDefault());
  zone.addEventListener("drop", (event) => {
    event.preventDefault();
    const payload = event.dataTransfer?.getData("application/json");
    if (!payload) return;
    draft = addCategory(draft, JSON.parse(payload) as CategoryChip);
    queryEdited = false;
    refreshDraftViews();
  });
}

async function runQuery(): Promise<void> {
  const token = queryGuard.next();
  errorBanner.hidden = true;
  try {
    const results = await api.sparql(queryBox.value);
    if (!queryGuard.isCurrent(token)) return; // superseded by a newer run
    lastResults = results;
    renderResults(results);
  } catch (error) {
    if (!queryGuard.isCurrent(token)) return;
    errorBanner.hidden = false;
    if (error instanceof SparqlParseError) {
      errorBanner.textContent =
        `query error at line ${error.line}, column ${error.column}: ${error.message}`;
    } else {
      errorBanner.textContent = `network failure: ${String(error)} — retry`;
    }
  }
}

function renderResults(results: SparqlResults): void {
  resultsPane.replaceChildren();
  if (results.results.bindings.length === 0) {
    const empty = document.createElement("p");
    empty.textContent = "no images matched — adjust the query and run again";
    resultsPane.appendChild(empty);
  } else {
    resultsPane.appendChild(renderResultsTable(results));
  }
  void renderVisualization(results);
}

interface ImageMeta {
  fileName: string;
  width: number;
  height: number;
  slug: string;
}

async function imageMeta(iri: string): Promise<ImageMeta | null> {
  const query =
    `PREFIX cv: <http://vision.semkg.org/onto#>\n` +
    `SELECT ?f ?w ?h ?slug WHERE {\n` +
    `  <${iri}> cv:fileName ?f .\n  <${iri}> cv:width ?w .\n  <${iri}> cv:height ?h .\n` +
    `  <${iri}> <http://schema.org/isPartOf> ?d .\n  ?d cv:slug ?slug .\n}`;
  const results = await api.sparql(query);
  const row = results.results.bindings[0];
  if (!row) return null;
  return {
    fileName: row.f.value,
    width: Number(row.w.value),
    height: Number(row.h.value),
    slug: row.slug.value,
  };
}

async function imageBoxes(iri: string): Promise<LabeledBox[]> {
  const query =
    `PREFIX cv: <http://vision.semkg.org/onto#>\n` +
    `SELECT ?x1 ?y1 ?x2 ?y2 ?t WHERE {\n` +
    `  <${iri}> cv:hasAnnotation ?ann .\n  ?ann cv:hasBox ?b .\n` +
    `  ?b cv:xMin ?x1 .\n  ?b cv:yMin ?y1 .\n  ?b cv:xMax ?x2 .\n  ?b cv:yMax ?y2 .\n` +
    `  ?ann cv:sourceLabelText ?t .\n}`;
  const results = await api.sparql(query);
  return results.results.bindings.map((row: SparqlBinding) => ({
    box: {
      xMin: Number(row.x1.value),
      yMin: Number(row.y1.value),
      xMax: Number(row.x2.value),
      yMax: Number(row.y2.value),
    },
    label: row.t.value,
  }));
}

const MAX_RENDERED_IMAGES = 12;

async function renderVisualization(results: SparqlResults): Promise<void> {
  vizPane.replaceChildren();
  const imageVar = results.head.vars.find((v) => v === "img") ?? results.head.vars[0];
  if (!imageVar) return;
  const iris = [
    ...new Set(
      results.results.bindings
        .map((b) => b[imageVar])
        .filter((t) => t && t.type === "uri")
        .map((t) => t!.value)
    ),
  ].slice(0, MAX_RENDERED_IMAGES);

  for (const iri of iris) {
    const meta = await imageMeta(iri);
    if (!meta) continue;
    const boxes = await imageBoxes(iri);
    vizPane.appendChild(await imageCard(iri, meta, boxes));
  }
}

async function imageCard(iri: string, meta: ImageMeta, boxes: LabeledBox[]): Promise<HTMLElement> {
  const card = document.createElement("figure");
  card.className = "image-card";
  const displayWidth = 320;
  const displayHeight = Math.round((meta.height / meta.width) * displayWidth);
  const canvas = document.createElement("canvas");
  canvas.width = displayWidth;
  canvas.height = displayHeight;
  const ctx = canvas.getContext("2d");
  if (ctx) {
    const scale = {
      naturalWidth: meta.width,
      naturalHeight: meta.height,
      displayWidth,
      displayHeight,
    };
    const paint = () =>
      drawOverlay(ctx, boxes, scale);
    const bitmap = new Image();
    bitmap.onload = () => {
      ctx.drawImage(bitmap, 0, 0, displayWidth, displayHeight);
      paint();
    };
    bitmap.onerror = () => {
      // no pixels on disk: placeholder canvas of the right shape
      ctx.fillStyle = "#dddddd";
      ctx.fillRect(0, 0, displayWidth, displayHeight);
      paint();
    };
    bitmap.src = api.imageUrl(meta.slug, meta.fileName);
  }
  card.appendChild(canvas);
  const caption = document.createElement("figcaption");
  caption.textContent = `${meta.fileName} — ${boxes.length} boxes`;
  caption.title = iri;
  card.appendChild(caption);
  return card;
}

async function showStatistics(): Promise<void> {
  const stats = await api.statistics();
  statsPane.replaceChildren(renderStatistics(stats));
}

function wireTabs(): void {
  const tabs = document.querySelectorAll<HTMLButtonElement>("nav button[data-pane]");
  tabs.forEach((button) => {
    button.addEventListener("click", () => {
      tabs.forEach((b) => b.classList.remove("active"));
      button.classList.add("active");
      for (const pane of [resultsPane, vizPane, statsPane]) pane.hidden = true;
      el<HTMLDivElement>(button.dataset.pane!).hidden = false;
      if (button.dataset.pane === "stats-pane") void showStatistics();
    });
  });
}

export function start(): void {
  taskSelect.addEventListener("change", () => void loadDatasets());
  categoryFilter.addEventListener("input", () => void loadCategories());
  modeSelect.addEventListener("change", () => {
    draft = { ...draft, mode: modeSelect.value as QueryDraft["mode"] };
    queryEdited = false;
    refreshDraftViews();
  });
  limitInput.addEventListener("change", () => {
    draft = { ...draft, limit: Math.max(1, Number(limitInput.value) || 1) };
    queryEdited = false;
    refreshDraftViews();
  });
  el<HTMLButtonElement>("attr-add").addEventListener("click", () => {
    const value = attrValue.value.trim().toLowerCase();
    if (!value) return;
    draft = {
      ...draft,
      attributes: [...draft.attributes, { attribute: attrName.value as AttributeName, value }],
    };
    attrValue.value = "";
    queryEdited = false;
    refreshDraftViews();
  });
  queryBox.addEventListener("input", () => {
    queryEdited = true; // hand-edited text is sent verbatim
    runButton.disabled = false;
  });
  el<HTMLButtonElement>("reset-query").addEventListener("click", () => {
    queryEdited = false;
    refreshDraftViews();
  });
  runButton.addEventListener("click", () => void runQuery());
  wireDropZone();
  wireTabs();
  refreshDraftViews();
  void loadDatasets();
}

if (typeof document !== "undefined" && document.getElementById("task-select")) {
  start();
}
