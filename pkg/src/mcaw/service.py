"""HTTP/JSON service exposing the pipeline to the exploration UI.

Desk-scale, in-memory session store: uploads and fitted models are
immutable once inserted, so every response for a given id is byte-stable
and cacheable.  All JSON goes through ``report.canonical_json`` — the
same serializer the CLI uses — so the two channels produce identical
bytes for identical inputs.

Environment: MCAW_PORT, MCAW_MAX_UPLOAD (bytes, default 64 MiB),
MCAW_UI_ORIGIN (CORS), MCAW_SNAPSHOT_DIR (write-through JSON snapshots).
"""

from __future__ import annotations

import json
import os
import secrets
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from . import inference, mca, report
from .dataset import (DEFAULT_AGE_BREAKS, CategoricalDataset, filter_rows,
                      frequency_table, from_raw, rate_by_group)
from .errors import DegenerateError, EmptyDatasetError, McawError
from .ingest import RawTable, load_dictionary, parse_csv_text, validate
from .mca import McaModel

DEFAULT_MAX_UPLOAD = 64 * 1024 * 1024


@dataclass
class _DatasetEntry:
    raw: RawTable
    default_ds: Optional[CategoricalDataset]
    summary: dict
    validation: dict


@dataclass
class _ModelEntry:
    model: McaModel
    ds: CategoricalDataset
    dataset_id: str
    correction: str


@dataclass
class SessionStore:
    """Maps opaque ids to immutable datasets and fitted models."""

    datasets: dict[str, _DatasetEntry] = field(default_factory=dict)
    models: dict[str, _ModelEntry] = field(default_factory=dict)
    snapshot_dir: Optional[Path] = None
    _lock: threading.Lock = field(default_factory=threading.Lock)

    def put_dataset(self, entry: _DatasetEntry) -> str:
        token = secrets.token_hex(16)
        with self._lock:
            self.datasets[token] = entry
        self._snapshot(f"dataset-{token}.json",
                       {"summary": entry.summary, "validation": entry.validation})
        return token

    def put_model(self, entry: _ModelEntry) -> str:
        token = secrets.token_hex(16)
        with self._lock:
            self.models[token] = entry
        self._snapshot(f"model-{token}.json",
                       report.model_report(entry.model, entry.correction))
        return token

    def _snapshot(self, name: str, doc: dict) -> None:
        if self.snapshot_dir is None:
            return
        self.snapshot_dir.mkdir(parents=True, exist_ok=True)
        (self.snapshot_dir / name).write_text(
            report.canonical_json(doc) + "\n", encoding="utf-8")


def _json_response(doc, status_code: int = 200) -> Response:
    return Response(content=report.canonical_json(doc),
                    media_type="application/json", status_code=status_code)


def _error(status_code: int, message: str) -> Response:
    return _json_response({"error": message}, status_code=status_code)


def create_app(store: Optional[SessionStore] = None) -> FastAPI:
    if store is None:
        snap = os.environ.get("MCAW_SNAPSHOT_DIR")
        store = SessionStore(snapshot_dir=Path(snap) if snap else None)
    max_upload = int(os.environ.get("MCAW_MAX_UPLOAD", DEFAULT_MAX_UPLOAD))
    app = FastAPI(title="mcaw", docs_url=None, redoc_url=None)
    app.state.store = store

    ui_origin = os.environ.get("MCAW_UI_ORIGIN")
    if ui_origin:
        app.add_middleware(CORSMiddleware, allow_origins=[ui_origin],
                           allow_methods=["*"], allow_headers=["*"])

    @app.get("/healthz")
    def healthz():
        return _json_response({"status": "ok"})

    @app.post("/api/datasets")
    async def upload_dataset(request: Request):
        body = await request.body()
        if len(body) > max_upload:
            return _error(413, f"upload exceeds {max_upload} bytes")
        try:
            doc = json.loads(body)
        except json.JSONDecodeError as exc:
            return _error(400, f"body is not valid JSON: {exc}")
        if not isinstance(doc, dict) or "csv" not in doc:
            return _error(400, "missing 'csv' part")
        if "dictionary" not in doc:
            return _error(400, "missing 'dictionary' part")
        try:
            dictionary = load_dictionary(doc["dictionary"])
            raw = parse_csv_text(doc["csv"], dictionary)
        except McawError as exc:
            return _error(400, str(exc))
        issues = validate(raw)
        validation = {
            "n_rows": raw.n_rows,
            "issues": [{"row": i.row, "column": i.column, "message": i.message}
                       for i in issues],
        }
        default_active = [c.name for c in dictionary.columns
                          if c.kind == "categorical"]
        default_ds = None
        try:
            if default_active:
                default_ds = from_raw(raw, default_active)
        except McawError:
            default_ds = None
        if default_ds is not None:
            summary = report.dataset_summary(default_ds)
        else:
            summary = {"n": raw.n_rows,
                       "columns": list(dictionary.names)}
        token = store.put_dataset(_DatasetEntry(
            raw=raw, default_ds=default_ds, summary=summary,
            validation=validation))
        return _json_response({"dataset_id": token, "summary": summary,
                               "validation": validation})

    @app.post("/api/datasets/{dataset_id}/mca")
    async def fit(dataset_id: str, request: Request):
        entry = store.datasets.get(dataset_id)
        if entry is None:
            return _error(404, f"unknown dataset id {dataset_id}")
        try:
            doc = json.loads(await request.body() or b"{}")
        except json.JSONDecodeError as exc:
            return _error(400, f"body is not valid JSON: {exc}")
        active = doc.get("active")
        if not active:
            return _error(400, "missing 'active' variable list")
        breaks = doc.get("age_breaks") or list(DEFAULT_AGE_BREAKS)
        missing = doc.get("missing", "drop-row")
        n_dims = doc.get("n_dims")
        correction = doc.get("correction", "none")
        raw = entry.raw
        try:
            for clause in doc.get("filters", []):
                raw = filter_rows(raw, clause["variable"], set(clause["keep"]))
            ds = from_raw(raw, active, age_breaks=breaks, missing_policy=missing)
            model = mca.fit_mca(ds, n_dims=n_dims)
        except (EmptyDatasetError, DegenerateError) as exc:
            return _error(422, str(exc))
        except McawError as exc:
            return _error(400, str(exc))
        token = store.put_model(_ModelEntry(model=model, ds=ds,
                                            dataset_id=dataset_id,
                                            correction=correction))
        return _json_response({
            "model_id": token,
            "eigen_table": mca.eigenvalue_table(model),
        })

    def _model(model_id: str) -> Optional[_ModelEntry]:
        return store.models.get(model_id)

    def _parse_dims(dims: Optional[str], model: McaModel) -> list[int]:
        if not dims:
            return list(range(1, model.n_dims + 1))
        return [int(d) for d in dims.split(",")]

    @app.get("/api/models/{model_id}/report")
    def model_report_endpoint(model_id: str):
        entry = _model(model_id)
        if entry is None:
            return _error(404, f"unknown model id {model_id}")
        return _json_response(report.model_report(entry.model, entry.correction))

    @app.get("/api/models/{model_id}/coordinates")
    def coordinates(model_id: str, target: str = "categories",
                    dims: Optional[str] = None):
        entry = _model(model_id)
        if entry is None:
            return _error(404, f"unknown model id {model_id}")
        try:
            labels, values = mca.coordinates(entry.model, target,
                                             _parse_dims(dims, entry.model))
        except (DegenerateError, ValueError) as exc:
            return _error(400, str(exc))
        return _json_response({"labels": labels,
                               "values": [[float(v) for v in row] for row in values]})

    @app.get("/api/models/{model_id}/cos2")
    def cos2(model_id: str, target: str = "categories",
             dims: Optional[str] = None):
        entry = _model(model_id)
        if entry is None:
            return _error(404, f"unknown model id {model_id}")
        try:
            labels, values = mca.cos2(entry.model, target,
                                      _parse_dims(dims, entry.model))
        except (DegenerateError, ValueError) as exc:
            return _error(400, str(exc))
        return _json_response({"labels": labels,
                               "values": [[float(v) for v in row] for row in values]})

    @app.get("/api/models/{model_id}/contributions")
    def contributions(model_id: str, target: str = "categories"):
        entry = _model(model_id)
        if entry is None:
            return _error(404, f"unknown model id {model_id}")
        try:
            labels, values = mca.contributions(entry.model, target)
        except DegenerateError as exc:
            return _error(400, str(exc))
        return _json_response({"labels": labels,
                               "values": [[float(v) for v in row] for row in values]})

    @app.get("/api/models/{model_id}/eta2")
    def eta2(model_id: str):
        entry = _model(model_id)
        if entry is None:
            return _error(404, f"unknown model id {model_id}")
        names, values = mca.variable_eta2(entry.model)
        return _json_response({"variables": names,
                               "values": [[float(v) for v in row] for row in values]})

    @app.get("/api/models/{model_id}/dimdesc")
    def dimdesc(model_id: str, axis: int = 1, p_threshold: float = 1.0):
        entry = _model(model_id)
        if entry is None:
            return _error(404, f"unknown model id {model_id}")
        try:
            desc = inference.describe_dimension(entry.model, entry.ds, axis,
                                                p_threshold)
        except DegenerateError as exc:
            return _error(400, str(exc))
        return _json_response(report.dimdesc_report(desc))

    @app.get("/api/models/{model_id}/ellipses")
    def ellipses(model_id: str, group: str, level: float = 0.95,
                 kind: str = "mean", axes: str = "1,2"):
        entry = _model(model_id)
        if entry is None:
            return _error(404, f"unknown model id {model_id}")
        try:
            ax = tuple(int(a) for a in axes.split(","))
            result, warnings = inference.group_ellipse(
                entry.model, entry.ds, group, axes=ax, level=level, kind=kind)
        except (McawError, ValueError) as exc:
            return _error(400, str(exc))
        return _json_response(report.ellipse_report(result, warnings))

    @app.post("/api/models/{model_id}/supplementary")
    async def supplementary(model_id: str, request: Request):
        entry = _model(model_id)
        if entry is None:
            return _error(404, f"unknown model id {model_id}")
        try:
            doc = json.loads(await request.body())
            membership = doc["membership"]
            coords = mca.project_supplementary(entry.model, membership)
        except (DegenerateError, ValueError, KeyError,
                json.JSONDecodeError) as exc:
            return _error(400, str(exc))
        return _json_response({"coordinates": [float(v) for v in coords]})

    def _dataset_for_tables(dataset_id: str):
        entry = store.datasets.get(dataset_id)
        if entry is None:
            return None, _error(404, f"unknown dataset id {dataset_id}")
        if entry.default_ds is None:
            return None, _error(400, "dataset has no categorical default view")
        return entry.default_ds, None

    @app.get("/api/datasets/{dataset_id}/frequencies")
    def frequencies(dataset_id: str, var: str):
        ds, err = _dataset_for_tables(dataset_id)
        if err is not None:
            return err
        try:
            table = frequency_table(ds, var)
        except McawError as exc:
            return _error(400, str(exc))
        return _json_response(report.frequency_report(table))

    @app.get("/api/datasets/{dataset_id}/rates")
    def rates(dataset_id: str, var: str, decimals: int = 2):
        ds, err = _dataset_for_tables(dataset_id)
        if err is not None:
            return err
        try:
            table = rate_by_group(ds, var, decimals)
        except McawError as exc:
            return _error(400, str(exc))
        return _json_response(report.rate_report(table))

    return app
