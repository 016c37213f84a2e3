/** Application wiring: event handlers around the state transitions.
 *
 * One in-flight fit at a time; responses carrying a stale request
 * token are dropped.  The exploration state is mirrored into the URL
 * hash so a view can be shared (the model itself is refit on load).
 */

import { ApiClient, ApiError, RequestTokens } from "./api.js";
import * as state from "./state.js";
import type { ExplorationState, ViewMode } from "./state.js";
import * as views from "./views.js";

interface AppElements {
  csvInput: HTMLTextAreaElement;
  dictInput: HTMLTextAreaElement;
  uploadButton: HTMLButtonElement;
  uploadStatus: HTMLElement;
  summaryPanel: HTMLElement;
  variablePicker: HTMLElement;
  fitButton: HTMLButtonElement;
  variancePanel: HTMLElement;
  mapPanel: HTMLElement;
  tablesPanel: HTMLElement;
  viewTabs: HTMLElement;
  axisSelect: HTMLSelectElement;
  groupSelect: HTMLSelectElement;
}

export class App {
  state: ExplorationState = state.initialState();
  private tokens = new RequestTokens();
  private fitInFlight = false;

  constructor(private api: ApiClient, private ui: AppElements) {
    ui.uploadButton.addEventListener("click", () => void this.upload());
    ui.fitButton.addEventListener("click", () => void this.fit());
    ui.axisSelect.addEventListener("change", () => void this.onAxesChange());
    ui.groupSelect.addEventListener("change", () => void this.onGroupChange());
  }

  private setState(next: ExplorationState): void {
    const modelDropped = this.state.modelId !== null && next.modelId === null;
    this.state = next;
    if (modelDropped) this.clearModelViews();
    window.location.hash = state.encodeState(next);
  }

  /** Model views must never outlive the selections they were fit from. */
  clearModelViews(): void {
    this.ui.variancePanel.replaceChildren();
    this.ui.mapPanel.replaceChildren();
    this.ui.tablesPanel.replaceChildren();
    this.ui.axisSelect.disabled = true;
  }

  async upload(): Promise<void> {
    this.ui.uploadStatus.replaceChildren();
    try {
      const doc = await this.api.uploadDataset(
        this.ui.csvInput.value, this.ui.dictInput.value);
      this.setState(state.setDataset(this.state, doc.dataset_id, doc.summary));
      this.ui.summaryPanel.replaceChildren(views.summaryCard(doc));
      this.renderVariablePicker();
    } catch (err) {
      this.ui.uploadStatus.replaceChildren(
        views.errorBanner(this.describeUploadError(err)));
    }
  }

  private describeUploadError(err: unknown): string {
    if (err instanceof ApiError && err.status === 413) {
      return `File too large for the server (${err.message}). ` +
        "Try filtering the export before uploading.";
    }
    if (err instanceof ApiError) return err.message;
    return "Upload failed: the service is unreachable.";
  }

  private renderVariablePicker(): void {
    const picker = this.ui.variablePicker;
    picker.replaceChildren();
    const names = (this.state.summary?.variables ?? []).map((v) => v.name);
    for (const name of names) {
      const label = document.createElement("label");
      const box = document.createElement("input");
      box.type = "checkbox";
      box.value = name;
      box.checked = this.state.active.includes(name);
      box.addEventListener("change", () => {
        this.setState(state.toggleActive(this.state, name));
      });
      label.appendChild(box);
      label.appendChild(document.createTextNode(name));
      picker.appendChild(label);
    }
  }

  async fit(): Promise<void> {
    if (this.fitInFlight || !this.state.datasetId || !this.state.active.length) {
      return;
    }
    this.fitInFlight = true;
    const token = this.tokens.issue("fit");
    try {
      const doc = await this.api.fitModel(this.state.datasetId, {
        active: this.state.active,
        filters: this.state.filters,
        age_breaks: this.state.ageBreaks ?? undefined,
        missing: this.state.missing,
      });
      if (!this.tokens.isCurrent("fit", token)) return;
      this.setState(state.setModel(this.state, doc.model_id, doc.eigen_table));
      this.ui.variancePanel.replaceChildren(
        views.varianceTable(doc.eigen_table));
      this.populateAxisSelect();
      await this.renderMap();
    } catch (err) {
      // a 422 (empty after filters, degenerate) keeps the selections so
      // the analyst can adjust and retry
      if (this.tokens.isCurrent("fit", token)) {
        const message = err instanceof ApiError
          ? err.message : "Fit failed: the service is unreachable.";
        this.ui.variancePanel.replaceChildren(views.errorBanner(message));
      }
    } finally {
      this.fitInFlight = false;
    }
  }

  private populateAxisSelect(): void {
    const select = this.ui.axisSelect;
    select.replaceChildren();
    const dims = state.retainedDims(this.state);
    for (let a = 1; a <= dims; a++) {
      for (let b = a + 1; b <= dims; b++) {
        const option = document.createElement("option");
        option.value = `${a},${b}`;
        option.textContent = `Dim ${a} × Dim ${b}`;
        select.appendChild(option);
      }
    }
    select.disabled = dims < 2;
  }

  private async onAxesChange(): Promise<void> {
    const [a, b] = this.ui.axisSelect.value.split(",").map(Number);
    const next = state.setAxes(this.state, [a, b]);
    if (next === this.state) return;
    this.setState(next);
    await this.renderMap();
  }

  private async onGroupChange(): Promise<void> {
    const value = this.ui.groupSelect.value || null;
    this.setState(state.setGroupVariable(this.state, value));
    await this.renderMap();
  }

  async renderMap(): Promise<void> {
    if (!this.state.modelId || state.retainedDims(this.state) < 2) return;
    const token = this.tokens.issue("map");
    const target = this.state.view === "individuals" ? "individuals" : "categories";
    const dims = [this.state.axes[0], this.state.axes[1]];
    const coords = await this.api.coordinates(this.state.modelId, target, dims);
    const cos2 = await this.api.cos2(this.state.modelId, target, dims);
    let ellipses: import("./types.js").EllipseDoc[] = [];
    if (this.state.view === "individuals" && this.state.groupVariable) {
      const doc = await this.api.ellipses(
        this.state.modelId, this.state.groupVariable, this.state.axes);
      ellipses = doc.ellipses;
    }
    if (!this.tokens.isCurrent("map", token) || !this.state.modelId) return;
    this.ui.mapPanel.replaceChildren(views.factorMap(coords, cos2, ellipses, {
      xCaption: views.axisCaption(this.state.eigenTable, this.state.axes[0]),
      yCaption: views.axisCaption(this.state.eigenTable, this.state.axes[1]),
    }));
  }

  async showTables(groupVariable: string): Promise<void> {
    if (!this.state.datasetId) return;
    const token = this.tokens.issue("tables");
    const rates = await this.api.rates(this.state.datasetId, groupVariable);
    const freq = await this.api.frequencies(this.state.datasetId, groupVariable);
    if (!this.tokens.isCurrent("tables", token)) return;
    this.ui.tablesPanel.replaceChildren(
      views.rateTable(rates), views.frequencyBars(freq));
  }

  setView(view: ViewMode): void {
    this.setState(state.setView(this.state, view));
  }
}

export function mount(root: Document = document): App {
  const get = <T extends HTMLElement>(id: string): T => {
    const node = root.getElementById(id);
    if (!node) throw new Error(`missing #${id}`);
    return node as T;
  };
  const api = new ApiClient(
    (root.documentElement.dataset.apiBase ?? "").replace(/\/$/, ""));
  return new App(api, {
    csvInput: get("csv-input"),
    dictInput: get("dict-input"),
    uploadButton: get("upload-button"),
    uploadStatus: get("upload-status"),
    summaryPanel: get("summary-panel"),
    variablePicker: get("variable-picker"),
    fitButton: get("fit-button"),
    variancePanel: get("variance-panel"),
    mapPanel: get("map-panel"),
    tablesPanel: get("tables-panel"),
    viewTabs: get("view-tabs"),
    axisSelect: get("axis-select"),
    groupSelect: get("group-select"),
  });
}
