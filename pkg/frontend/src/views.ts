/** DOM builders for each view.
 *
 * Every number on screen is taken from a server response document —
 * these functions only lay values out, they never derive new ones.
 * Formatting keeps full server precision in `data-value` attributes so
 * tests (and tooltips) can compare against the raw JSON.
 */

import type {
  DatasetSummary, DimdescResponse, EigenRow, EllipseDoc, FrequencyResponse,
  LabelledMatrix, RateResponse, UploadResponse,
} from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, className?: string, text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function numberCell(value: number, digits = 4): HTMLTableCellElement {
  const cell = el("td", "num", value.toFixed(digits));
  cell.dataset.value = String(value);
  return cell;
}

function table(headers: string[]): {
  root: HTMLTableElement; body: HTMLTableSectionElement;
} {
  const root = el("table");
  const head = root.createTHead().insertRow();
  for (const h of headers) head.appendChild(el("th", undefined, h));
  return { root, body: root.createTBody() };
}

export function summaryCard(doc: UploadResponse): HTMLElement {
  const card = el("section", "summary-card");
  const s: DatasetSummary = doc.summary;
  card.appendChild(el("h2", undefined, "Dataset"));
  card.appendChild(el(
    "p", "counts",
    s.n_variables !== undefined
      ? `n = ${s.n}, Q = ${s.n_variables}, J = ${s.n_categories}`
      : `n = ${s.n}`));
  const chips = el("div", "chips");
  for (const v of s.variables ?? []) {
    for (const label of v.labels) {
      chips.appendChild(el("span", "chip", `${v.name}: ${label}`));
    }
  }
  card.appendChild(chips);
  if (doc.validation.issues.length) {
    const list = el("ul", "issues");
    for (const issue of doc.validation.issues) {
      list.appendChild(el(
        "li", undefined,
        `row ${issue.row}, ${issue.column}: ${issue.message}`));
    }
    card.appendChild(list);
  }
  return card;
}

export function varianceTable(rows: EigenRow[]): HTMLTableElement {
  const { root, body } = table(["Dim", "Eigenvalue", "% variance", "Cumulative %"]);
  root.className = "variance-table";
  for (const row of rows) {
    const tr = body.insertRow();
    tr.appendChild(el("td", undefined, String(row.dim)));
    tr.appendChild(numberCell(row.eigenvalue));
    tr.appendChild(numberCell(row.percent, 2));
    tr.appendChild(numberCell(row.cumulative, 2));
  }
  return root;
}

export function rateTable(doc: RateResponse): HTMLTableElement {
  const { root, body } = table(["Group", "Count", "Rate %"]);
  root.className = "rate-table";
  root.dataset.variable = doc.variable;
  for (const row of doc.rows) {
    const tr = body.insertRow();
    tr.appendChild(el("td", undefined, row.label));
    tr.appendChild(el("td", "num", String(row.count)));
    const pct = el("td", "num", String(row.percentage));
    pct.dataset.value = String(row.percentage);
    tr.appendChild(pct);
  }
  return root;
}

export function frequencyBars(doc: FrequencyResponse): HTMLElement {
  const root = el("div", "frequency-bars");
  root.dataset.variable = doc.variable;
  for (const row of doc.rows) {
    const item = el("div", "bar-row");
    item.appendChild(el("span", "bar-label", row.label));
    const bar = el("div", "bar");
    bar.style.width = `${(row.proportion * 100).toFixed(2)}%`;
    bar.dataset.value = String(row.proportion);
    item.appendChild(bar);
    item.appendChild(el("span", "bar-count", String(row.count)));
    root.appendChild(item);
  }
  return root;
}

export function dimdescTable(doc: DimdescResponse): HTMLElement {
  const root = el("section", "dimdesc");
  root.appendChild(el("h3", undefined, `Dimension ${doc.axis}`));
  const vars = table(["Variable", "eta2", "p"]);
  for (const row of doc.variables) {
    const tr = vars.body.insertRow();
    tr.appendChild(el("td", undefined, row.name));
    tr.appendChild(numberCell(row.eta2));
    tr.appendChild(numberCell(row.p_value, 6));
  }
  root.appendChild(vars.root);
  const cats = table(["Category", "Estimate", "p"]);
  for (const row of doc.categories) {
    const tr = cats.body.insertRow();
    tr.appendChild(el("td", undefined, row.label));
    tr.appendChild(numberCell(row.estimate));
    tr.appendChild(numberCell(row.p_value, 6));
  }
  root.appendChild(cats.root);
  return root;
}

export interface MapOptions {
  width?: number;
  height?: number;
  xCaption?: string;
  yCaption?: string;
}

/** cos2 in [0,1] → point shade; higher cos2 = darker. */
export function cos2Shade(cos2: number): string {
  const clamped = Math.max(0, Math.min(1, cos2));
  const channel = Math.round(210 - 180 * clamped);
  return `rgb(${channel}, ${channel}, 230)`;
}

const SVG_NS = "http://www.w3.org/2000/svg";

export function factorMap(
  coords: LabelledMatrix, cos2?: LabelledMatrix,
  ellipses: EllipseDoc[] = [], options: MapOptions = {},
): SVGSVGElement {
  const width = options.width ?? 640;
  const height = options.height ?? 480;
  const margin = 45;
  const xs = coords.values.map((row) => row[0]);
  const ys = coords.values.map((row) => row[1]);
  for (const e of ellipses) {
    const r = Math.max(e.semi_major, e.semi_minor);
    xs.push(e.center[0] - r, e.center[0] + r);
    ys.push(e.center[1] - r, e.center[1] + r);
  }
  const span = Math.max(
    Math.max(...xs) - Math.min(...xs),
    Math.max(...ys) - Math.min(...ys), 1e-9) * 1.1;
  const cx = (Math.max(...xs) + Math.min(...xs)) / 2;
  const cy = (Math.max(...ys) + Math.min(...ys)) / 2;
  const scale = (Math.min(width, height) - 2 * margin) / span;
  const px = (x: number) => width / 2 + (x - cx) * scale;
  const py = (y: number) => height / 2 - (y - cy) * scale;

  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("class", "factor-map");

  for (const e of ellipses) {
    const node = document.createElementNS(SVG_NS, "ellipse");
    node.setAttribute("class", "group-ellipse");
    node.setAttribute("cx", px(e.center[0]).toFixed(2));
    node.setAttribute("cy", py(e.center[1]).toFixed(2));
    node.setAttribute("rx", (e.semi_major * scale).toFixed(2));
    node.setAttribute("ry", (e.semi_minor * scale).toFixed(2));
    const degrees = (-e.angle * 180) / Math.PI;
    node.setAttribute(
      "transform",
      `rotate(${degrees.toFixed(2)} ${px(e.center[0]).toFixed(2)} ` +
      `${py(e.center[1]).toFixed(2)})`);
    svg.appendChild(node);
  }

  coords.labels.forEach((label, i) => {
    const [x, y] = coords.values[i];
    const point = document.createElementNS(SVG_NS, "circle");
    point.setAttribute("class", "point");
    point.setAttribute("cx", px(x).toFixed(2));
    point.setAttribute("cy", py(y).toFixed(2));
    point.setAttribute("r", "4");
    const quality = cos2
      ? cos2.values[i].reduce((acc, v) => acc + v, 0)
      : undefined;
    if (quality !== undefined) {
      point.setAttribute("fill", cos2Shade(quality));
      point.dataset.cos2 = String(quality);
    }
    const tooltip = document.createElementNS(SVG_NS, "title");
    tooltip.textContent =
      `${label} (${x.toFixed(4)}, ${y.toFixed(4)})` +
      (quality !== undefined ? ` cos2=${quality.toFixed(4)}` : "");
    point.appendChild(tooltip);
    svg.appendChild(point);
    const text = document.createElementNS(SVG_NS, "text");
    text.setAttribute("class", "label");
    text.setAttribute("x", (px(x) + 6).toFixed(2));
    text.setAttribute("y", (py(y) - 6).toFixed(2));
    text.textContent = label;
    svg.appendChild(text);
  });

  const xCap = document.createElementNS(SVG_NS, "text");
  xCap.setAttribute("class", "axis-caption");
  xCap.setAttribute("x", String(width / 2));
  xCap.setAttribute("y", String(height - 8));
  xCap.textContent = options.xCaption ?? "Dim 1";
  svg.appendChild(xCap);
  const yCap = document.createElementNS(SVG_NS, "text");
  yCap.setAttribute("class", "axis-caption");
  yCap.setAttribute("x", "12");
  yCap.setAttribute("y", String(height / 2));
  yCap.setAttribute("transform", `rotate(-90 12 ${height / 2})`);
  yCap.textContent = options.yCaption ?? "Dim 2";
  svg.appendChild(yCap);
  return svg;
}

/** "Dim k (p%)" captions built from the fit response's eigen table. */
export function axisCaption(rows: EigenRow[], axis: number): string {
  const row = rows[axis - 1];
  return row ? `Dim ${axis} (${row.percent.toFixed(1)}%)` : `Dim ${axis}`;
}

export function errorBanner(message: string): HTMLElement {
  return el("div", "error-banner", message);
}
