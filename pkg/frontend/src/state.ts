/** Exploration state and its transitions.
 *
 * Pure functions: each transition returns a new state object.  The key
 * invariant is that `modelId` (and the cached eigen table) survive only
 * while the selections they were fitted from are unchanged — any edit
 * to the active set, filters, age breaks, or missing policy clears the
 * model so no stale view can be rendered.
 */

import type { DatasetSummary, EigenRow, FilterClause } from "./types.js";

export type ViewMode = "variables" | "categories" | "individuals" | "tables";

export interface ExplorationState {
  datasetId: string | null;
  summary: DatasetSummary | null;
  active: string[];
  filters: FilterClause[];
  ageBreaks: number[] | null;
  missing: "drop-row" | "missing-level";
  modelId: string | null;
  eigenTable: EigenRow[];
  axes: [number, number];
  groupVariable: string | null;
  view: ViewMode;
}

export function initialState(): ExplorationState {
  return {
    datasetId: null,
    summary: null,
    active: [],
    filters: [],
    ageBreaks: null,
    missing: "drop-row",
    modelId: null,
    eigenTable: [],
    axes: [1, 2],
    groupVariable: null,
    view: "categories",
  };
}

function dropModel(state: ExplorationState): ExplorationState {
  return { ...state, modelId: null, eigenTable: [], axes: [1, 2] };
}

export function setDataset(
  state: ExplorationState, datasetId: string, summary: DatasetSummary,
): ExplorationState {
  return {
    ...dropModel(state),
    datasetId,
    summary,
    active: [],
    filters: [],
    groupVariable: null,
  };
}

export function toggleActive(
  state: ExplorationState, variable: string,
): ExplorationState {
  const active = state.active.includes(variable)
    ? state.active.filter((v) => v !== variable)
    : [...state.active, variable];
  return { ...dropModel(state), active };
}

export function setFilters(
  state: ExplorationState, filters: FilterClause[],
): ExplorationState {
  return { ...dropModel(state), filters };
}

export function setAgeBreaks(
  state: ExplorationState, breaks: number[] | null,
): ExplorationState {
  return { ...dropModel(state), ageBreaks: breaks };
}

export function setMissing(
  state: ExplorationState, missing: "drop-row" | "missing-level",
): ExplorationState {
  return { ...dropModel(state), missing };
}

export function setModel(
  state: ExplorationState, modelId: string, eigenTable: EigenRow[],
): ExplorationState {
  return { ...state, modelId, eigenTable, axes: [1, 2] };
}

export function retainedDims(state: ExplorationState): number {
  return state.eigenTable.length;
}

/** Axis pairs are only selectable inside the retained dimensions. */
export function canSelectAxes(
  state: ExplorationState, axes: [number, number],
): boolean {
  const dims = retainedDims(state);
  return (
    state.modelId !== null &&
    axes[0] >= 1 && axes[1] >= 1 &&
    axes[0] <= dims && axes[1] <= dims &&
    axes[0] !== axes[1]
  );
}

export function setAxes(
  state: ExplorationState, axes: [number, number],
): ExplorationState {
  if (!canSelectAxes(state, axes)) return state;
  return { ...state, axes };
}

export function setGroupVariable(
  state: ExplorationState, variable: string | null,
): ExplorationState {
  return { ...state, groupVariable: variable };
}

export function setView(state: ExplorationState, view: ViewMode): ExplorationState {
  return { ...state, view };
}

/** Shareable URL fragment for the current exploration. */
export function encodeState(state: ExplorationState): string {
  const params = new URLSearchParams();
  if (state.datasetId) params.set("dataset", state.datasetId);
  if (state.active.length) params.set("active", state.active.join(","));
  if (state.filters.length) params.set("filters", JSON.stringify(state.filters));
  if (state.ageBreaks) params.set("breaks", state.ageBreaks.join(","));
  if (state.missing !== "drop-row") params.set("missing", state.missing);
  if (state.modelId) params.set("model", state.modelId);
  params.set("axes", state.axes.join(","));
  if (state.groupVariable) params.set("group", state.groupVariable);
  params.set("view", state.view);
  return params.toString();
}

export function decodeState(encoded: string): ExplorationState {
  const params = new URLSearchParams(encoded);
  const state = initialState();
  state.datasetId = params.get("dataset");
  const active = params.get("active");
  if (active) state.active = active.split(",");
  const filters = params.get("filters");
  if (filters) state.filters = JSON.parse(filters) as FilterClause[];
  const breaks = params.get("breaks");
  if (breaks) state.ageBreaks = breaks.split(",").map(Number);
  const missing = params.get("missing");
  if (missing === "missing-level") state.missing = missing;
  const axes = params.get("axes");
  if (axes) {
    const [a, b] = axes.split(",").map(Number);
    if (Number.isInteger(a) && Number.isInteger(b)) state.axes = [a, b];
  }
  state.groupVariable = params.get("group");
  const view = params.get("view");
  if (view === "variables" || view === "categories" ||
      view === "individuals" || view === "tables") {
    state.view = view;
  }
  // model id is deliberately not restored: a fresh session must refit
  // before showing model views, otherwise the invariant "model id only
  // set when a fit succeeded for the current selections" could break.
  return state;
}
