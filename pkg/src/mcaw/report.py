"""Deterministic JSON/CSV report documents and static SVG factor maps.

Every document produced here is byte-identical across runs for identical
inputs; both the CLI and the HTTP service serialize through
:func:`canonical_json` so their outputs compare equal byte for byte.
"""

from __future__ import annotations

import io
import json
from typing import Optional, Sequence

import numpy as np

from . import mca as _mca
from .dataset import CategoricalDataset, FrequencyTable, RateTable
from .inference import DimensionDescription, EllipseSpec
from .mca import McaModel


def canonical_json(obj) -> str:
    """Compact, deterministic JSON; floats use shortest round-trip repr."""
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"),
                      allow_nan=False)


def _matrix(a: np.ndarray) -> list[list[float]]:
    return [[float(v) for v in row] for row in np.atleast_2d(a)]


def model_report(model: McaModel, correction: str = "none") -> dict:
    """Single JSON document describing a fitted model (published schema)."""
    eigen = _mca.eigenvalue_table(model)
    doc = {
        "eigenvalues": [r["eigenvalue"] for r in eigen],
        "percent": [r["percent"] for r in eigen],
        "cumulative": [r["cumulative"] for r in eigen],
        "categories": {
            "labels": list(model.category_labels),
            "coord": _matrix(model.col_coords),
            "cos2": _matrix(model.col_cos2),
            "ctr": _matrix(model.col_contributions),
        },
        "individuals": {
            "labels": [str(i) for i in range(model.n)],
            "coord": _matrix(model.row_coords),
            "cos2": _matrix(model.row_cos2),
            "ctr": _matrix(model.row_contributions),
        },
        "eta2": {
            "variables": list(model.variable_names),
            "values": _matrix(model.eta2),
        },
        "options": {
            "n": model.n,
            "n_variables": model.n_variables,
            "n_categories": model.n_categories,
            "total_inertia": float(model.total_inertia),
            "rank_tol": model.rank_tol,
            "correction": correction,
        },
    }
    if correction != "none":
        doc["adjusted"] = _mca.adjust_eigenvalues(
            list(model.eigenvalues), model.n_variables, correction)
    return doc


def frequency_report(table: FrequencyTable) -> dict:
    return {
        "variable": table.variable,
        "n": table.n,
        "rows": [
            {"label": lab, "count": c, "proportion": p}
            for lab, c, p in zip(table.labels, table.counts, table.proportions)
        ],
    }


def rate_report(table: RateTable) -> dict:
    return {
        "variable": table.variable,
        "n": table.n,
        "rows": [
            {"label": lab, "count": c, "percentage": p}
            for lab, c, p in zip(table.labels, table.counts, table.percentages)
        ],
    }


def dimdesc_report(desc: DimensionDescription) -> dict:
    return {
        "axis": desc.axis,
        "variables": [
            {"name": r.name, "eta2": r.eta2, "p_value": r.p_value}
            for r in desc.variables
        ],
        "categories": [
            {"label": r.label, "estimate": r.estimate, "p_value": r.p_value}
            for r in desc.categories
        ],
    }


def ellipse_report(ellipses: Sequence[EllipseSpec],
                   warnings: Sequence[str]) -> dict:
    return {
        "ellipses": [
            {
                "label": e.label,
                "center": [e.center[0], e.center[1]],
                "semi_major": e.semi_major,
                "semi_minor": e.semi_minor,
                "angle": e.angle,
                "level": e.level,
                "kind": e.kind,
                "member_count": e.member_count,
                "degenerate": e.degenerate,
            }
            for e in ellipses
        ],
        "warnings": list(warnings),
    }


def dataset_summary(ds: CategoricalDataset) -> dict:
    return {
        "n": ds.n,
        "n_variables": ds.n_variables,
        "n_categories": ds.n_categories,
        "variables": [
            {"name": v.name, "labels": list(v.labels)} for v in ds.variables
        ],
        "provenance": list(ds.provenance),
    }


def table_csv(doc: dict) -> str:
    """Render a rows-based report (frequency/rate) as CSV text."""
    rows = doc["rows"]
    if not rows:
        return "\n"
    keys = list(rows[0].keys())
    out = io.StringIO()
    out.write(",".join(keys) + "\n")
    for row in rows:
        out.write(",".join(str(row[k]) for k in keys) + "\n")
    return out.getvalue()


def axis_caption(model: McaModel, axis: int) -> str:
    eigen = _mca.eigenvalue_table(model)
    return f"Dim {axis} ({eigen[axis - 1]['percent']:.1f}%)"


def render_svg(points: Sequence[dict],
               ellipses: Optional[Sequence[EllipseSpec]] = None,
               x_caption: str = "Dim 1", y_caption: str = "Dim 2",
               width: int = 640, height: int = 480) -> str:
    """Static SVG factor map.

    ``points`` entries carry ``x``, ``y``, ``label`` and optionally
    ``color``.  Output is deterministic text: fixed 2-decimal pixel
    coordinates, stable element order.
    """
    if not points:
        raise ValueError("need at least one point")
    ellipses = list(ellipses or [])
    xs = [p["x"] for p in points] + [e.center[0] for e in ellipses]
    ys = [p["y"] for p in points] + [e.center[1] for e in ellipses]
    for e in ellipses:
        r = max(e.semi_major, e.semi_minor)
        xs.extend([e.center[0] - r, e.center[0] + r])
        ys.extend([e.center[1] - r, e.center[1] + r])
    margin = 50.0
    span_x = max(max(xs) - min(xs), 1e-9)
    span_y = max(max(ys) - min(ys), 1e-9)
    span = max(span_x, span_y) * 1.1 or 1.0
    cx = (max(xs) + min(xs)) / 2
    cy = (max(ys) + min(ys)) / 2
    scale = min(width, height) - 2 * margin

    def px(x: float) -> float:
        return width / 2 + (x - cx) / span * scale

    def py(y: float) -> float:
        return height / 2 - (y - cy) / span * scale

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<line x1="{margin:.2f}" y1="{py(0):.2f}" x2="{width - margin:.2f}" '
        f'y2="{py(0):.2f}" stroke="#bbbbbb" stroke-dasharray="4 4"/>',
        f'<line x1="{px(0):.2f}" y1="{margin:.2f}" x2="{px(0):.2f}" '
        f'y2="{height - margin:.2f}" stroke="#bbbbbb" stroke-dasharray="4 4"/>',
        f'<text class="caption" x="{width / 2:.2f}" y="{height - 12:.2f}" '
        f'text-anchor="middle" font-size="13">{_esc(x_caption)}</text>',
        f'<text class="caption" x="14" y="{height / 2:.2f}" text-anchor="middle" '
        f'font-size="13" transform="rotate(-90 14 {height / 2:.2f})">'
        f'{_esc(y_caption)}</text>',
    ]
    for e in ellipses:
        deg = -np.degrees(e.angle)
        parts.append(
            f'<ellipse class="group" cx="{px(e.center[0]):.2f}" '
            f'cy="{py(e.center[1]):.2f}" '
            f'rx="{e.semi_major / span * scale:.2f}" '
            f'ry="{e.semi_minor / span * scale:.2f}" '
            f'transform="rotate({deg:.2f} {px(e.center[0]):.2f} '
            f'{py(e.center[1]):.2f})" fill="none" stroke="#666666"/>'
        )
    for p in points:
        color = p.get("color", "#1f77b4")
        parts.append(
            f'<circle class="point" cx="{px(p["x"]):.2f}" cy="{py(p["y"]):.2f}" '
            f'r="3.5" fill="{color}"/>'
        )
        parts.append(
            f'<text class="label" x="{px(p["x"]) + 5:.2f}" '
            f'y="{py(p["y"]) - 5:.2f}" font-size="11">{_esc(p["label"])}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _esc(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;"))
