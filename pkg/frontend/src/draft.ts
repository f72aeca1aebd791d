/** The query draft the explorer builds up through drill-down and drag & drop. */

export type TaskKind = "classification" | "detection" | "segmentation" | "relationship";

/** AND: every category must appear in the same image; separate: any of them. */
export type QueryMode = "and" | "separate";

export type AttributeName = "weather" | "timeOfDay" | "illumination";

export interface CategoryChip {
  iri: string;
  name: string;
  dataset: string;
}

export interface AttributeConstraint {
  attribute: AttributeName;
  value: string;
}

export interface QueryDraft {
  task: TaskKind;
  categories: CategoryChip[];
  attributes: AttributeConstraint[];
  limit: number;
  mode: QueryMode;
}

export function emptyDraft(task: TaskKind = "detection"): QueryDraft {
  return { task, categories: [], attributes: [], limit: 100, mode: "and" };
}

/** Execution is enabled only for valid drafts. */
export function draftValid(draft: QueryDraft): boolean {
  return (
    Number.isInteger(draft.limit) &&
    draft.limit >= 1 &&
    draft.categories.length + draft.attributes.length >= 1
  );
}

export function addCategory(draft: QueryDraft, chip: CategoryChip): QueryDraft {
  if (draft.categories.some((c) => c.iri === chip.iri && c.dataset === chip.dataset)) {
    return draft;
  }
  return { ...draft, categories: [...draft.categories, chip] };
}

export function removeCategory(draft: QueryDraft, index: number): QueryDraft {
  return { ...draft, categories: draft.categories.filter((_, i) => i !== index) };
}
