/** Backend client. One in-flight query per view: responses carry a sequence
 * number and stale ones are discarded by the caller. */

import {
  CategoryEntry,
  DatasetInfo,
  SparqlErrorBody,
  SparqlResults,
  Statistics,
} from "./types.js";

export class SparqlParseError extends Error {
  constructor(
    message: string,
    public line?: number,
    public column?: number,
    public expected?: string[]
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(public base: string = "") {}

  async sparql(query: string): Promise<SparqlResults> {
    const response = await fetch(`${this.base}/sparql`, {
      method: "POST",
      headers: { "content-type": "application/x-www-form-urlencoded" },
      body: new URLSearchParams({ query }).toString(),
    });
    if (response.status === 400) {
      const body = (await response.json()) as SparqlErrorBody;
      throw new SparqlParseError(
        body.error.message,
        body.error.line,
        body.error.column,
        body.error.expected
      );
    }
    if (!response.ok) {
      throw new Error(`query failed: HTTP ${response.status}`);
    }
    return (await response.json()) as SparqlResults;
  }

  async datasets(): Promise<DatasetInfo[]> {
    return this.getJson("/datasets");
  }

  async categories(params: { dataset?: string; task?: string; q?: string }): Promise<CategoryEntry[]> {
    const search = new URLSearchParams();
    if (params.dataset) search.set("dataset", params.dataset);
    if (params.task) search.set("task", params.task);
    if (params.q) search.set("q", params.q);
    const suffix = search.toString() ? `?${search}` : "";
    return this.getJson(`/categories${suffix}`);
  }

  async statistics(): Promise<Statistics> {
    return this.getJson("/statistics");
  }

  imageUrl(slug: string, fileName: string): string {
    const encoded = fileName.split("/").map(encodeURIComponent).join("/");
    return `${this.base}/images/${encodeURIComponent(slug)}/${encoded}`;
  }

  private async getJson<T>(path: string): Promise<T> {
    const response = await fetch(this.base + path);
    if (!response.ok) {
      throw new Error(`GET ${path} failed: HTTP ${response.status}`);
    }
    return (await response.json()) as T;
  }
}

/** Monotonic sequence for discarding superseded responses. */
export class StaleGuard {
  private seq = 0;

  next(): number {
    return ++this.seq;
  }

  isCurrent(token: number): boolean {
    return token === this.seq;
  }
}
