import { describe, expect, it } from "vitest";

import * as views from "../src/views.js";

const EIGEN = [
  { dim: 1, eigenvalue: 0.7236, percent: 57.89, cumulative: 57.89 },
  { dim: 2, eigenvalue: 0.5264, percent: 42.11, cumulative: 100.0 },
];

describe("varianceTable", () => {
  it("renders one row per dimension with the server values", () => {
    const table = views.varianceTable(EIGEN);
    const rows = Array.from(table.tBodies[0].rows);
    expect(rows).toHaveLength(2);
    const eig = rows.map((r) => r.cells[1].dataset.value);
    expect(eig).toEqual(["0.7236", "0.5264"]);
    expect(rows[1].cells[3].textContent).toBe("100.00");
  });
});

describe("rateTable", () => {
  it("shows server percentages verbatim, no re-rounding", () => {
    const table = views.rateTable({
      variable: "grupo_riesgo",
      n: 3915,
      rows: [
        { label: "ESTUDIANTES", count: 16, percentage: 0.41 },
        { label: "INTERNOS", count: 111, percentage: 2.84 },
        { label: "PERSONAL", count: 3788, percentage: 96.76 },
      ],
    });
    const cells = Array.from(table.tBodies[0].rows)
      .map((r) => r.cells[2].textContent);
    expect(cells).toEqual(["0.41", "2.84", "96.76"]);
  });
});

describe("factorMap", () => {
  it("places one point and label per category", () => {
    const svg = views.factorMap(
      { labels: ["A::a1", "A::a2"], values: [[1, 0.5], [-1, -0.5]] });
    expect(svg.querySelectorAll("circle.point")).toHaveLength(2);
    const labels = Array.from(svg.querySelectorAll("text.label"))
      .map((t) => t.textContent);
    expect(labels).toEqual(["A::a1", "A::a2"]);
  });

  it("shades points by summed cos2 and reports it in the tooltip", () => {
    const svg = views.factorMap(
      { labels: ["a"], values: [[1, 1]] },
      { labels: ["a"], values: [[0.6, 0.3]] });
    const point = svg.querySelector("circle.point") as SVGCircleElement;
    expect(point.dataset.cos2).toBe("0.8999999999999999");
    expect(point.querySelector("title")?.textContent).toContain("cos2=0.9000");
  });

  it("draws one ellipse element per group", () => {
    const svg = views.factorMap(
      { labels: ["a"], values: [[0, 0]] }, undefined,
      [{ label: "F", center: [0.1, -0.2], semi_major: 0.5, semi_minor: 0.2,
         angle: 0.3, level: 0.95, kind: "mean", member_count: 7,
         degenerate: false }]);
    expect(svg.querySelectorAll("ellipse.group-ellipse")).toHaveLength(1);
  });

  it("captions axes with percent variance from the eigen table", () => {
    expect(views.axisCaption(EIGEN, 1)).toBe("Dim 1 (57.9%)");
    expect(views.axisCaption(EIGEN, 3)).toBe("Dim 3");
  });
});

describe("cos2Shade", () => {
  it("is darker for better-represented points", () => {
    expect(views.cos2Shade(1)).toBe("rgb(30, 30, 230)");
    expect(views.cos2Shade(0)).toBe("rgb(210, 210, 230)");
    expect(views.cos2Shade(2)).toBe(views.cos2Shade(1));
  });
});

describe("summaryCard", () => {
  it("shows counts, category chips, and validation issues", () => {
    const card = views.summaryCard({
      dataset_id: "d1",
      summary: {
        n: 12, n_variables: 2, n_categories: 4,
        variables: [{ name: "A", labels: ["a1", "a2"] },
                    { name: "B", labels: ["b1", "b2"] }],
      },
      validation: {
        n_rows: 12,
        issues: [{ row: 3, column: "edad", message: "not an integer" }],
      },
    });
    expect(card.querySelector(".counts")?.textContent)
      .toBe("n = 12, Q = 2, J = 4");
    expect(card.querySelectorAll(".chip")).toHaveLength(4);
    expect(card.querySelector(".issues li")?.textContent)
      .toContain("row 3, edad");
  });
});
