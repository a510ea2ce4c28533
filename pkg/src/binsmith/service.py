"""HTTP API: upload datasets, request bins, refine schemes interactively.

Datasets live in an in-memory store keyed by id; restarting the server
loses them.  All binning calls are pure, so handlers only synchronize
around the store itself.
"""

from __future__ import annotations

import threading
import uuid
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .core import (
    BinScheme,
    InvalidSchemeError,
    LabelFormat,
    Provenance,
    as_decimal,
    assign,
    counts_to_dict,
    label_bins,
    scheme_to_dict,
)
from .engine import (
    NoSemanticMatchError,
    check_invariants,
    compute_bins,
    profile_to_dict,
    result_to_dict,
)
from .ingest import EmptyColumnError, ParseError, Table, parse_csv, profile
from .legibility import LegibilityConfig, default_bins
from .matching import semantic_bins
from .pipeline import SemanticLookupTable


class DatasetStore:
    """Synchronized in-memory map of dataset id -> parsed table."""

    def __init__(self):
        self._tables: dict[str, Table] = {}
        self._lock = threading.Lock()

    def add(self, table: Table) -> str:
        dataset_id = uuid.uuid4().hex[:12]
        with self._lock:
            self._tables[dataset_id] = table
        return dataset_id

    def get(self, dataset_id: str) -> Table | None:
        with self._lock:
            return self._tables.get(dataset_id)


class BinRequest(BaseModel):
    dataset_id: str
    field: str
    purpose: str = "histogram"
    overrides: dict | None = None
    forced_mode: str | None = None


class RefineRequest(BaseModel):
    dataset_id: str
    field: str
    edges: list[float | int]
    open_low: bool = False
    open_high: bool = False
    toggles: dict[str, bool] = {}


def _numeric_column(store: DatasetStore, dataset_id: str, field: str):
    table = store.get(dataset_id)
    if table is None:
        raise HTTPException(status_code=404, detail=f"unknown dataset {dataset_id!r}")
    try:
        column = table.column(field)
    except KeyError:
        raise HTTPException(status_code=404, detail=f"unknown field {field!r}")
    if not column.is_numeric:
        raise HTTPException(status_code=422, detail=f"field {field!r} is not numeric")
    return column


def create_app(lookup: SemanticLookupTable | None = None,
               ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="binsmith", version="0.1.0")
    store = DatasetStore()
    app.state.store = store
    app.state.lookup = lookup

    @app.post("/api/dataset")
    async def upload_dataset(request: Request):
        body = await request.body()
        try:
            table = parse_csv(body)
        except ParseError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        dataset_id = store.add(table)
        fields = []
        for column in table.columns:
            entry = {"name": column.name, "numeric": column.is_numeric, "profile": None}
            if column.is_numeric:
                entry["profile"] = profile_to_dict(profile(list(column.values)))
            fields.append(entry)
        rows = len(table.columns[0].values) if table.columns else 0
        return {"dataset_id": dataset_id, "rows": rows, "fields": fields}

    @app.post("/api/bin")
    def bin_field(req: BinRequest):
        column = _numeric_column(store, req.dataset_id, req.field)
        cfg = LegibilityConfig.from_dict(req.overrides) if req.overrides else None
        try:
            result = compute_bins(
                req.field,
                list(column.values),
                table=app.state.lookup,
                purpose=req.purpose,
                cfg=cfg,
                forced_mode=req.forced_mode,
            )
        except NoSemanticMatchError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        except (ValueError, EmptyColumnError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return result_to_dict(result)

    @app.post("/api/refine")
    def refine(req: RefineRequest):
        column = _numeric_column(store, req.dataset_id, req.field)
        edges = [as_decimal(e) for e in req.edges]
        try:
            scheme = BinScheme(
                edges=tuple(edges),
                open_low=req.open_low,
                open_high=req.open_high,
                provenance=Provenance.manual(),
            )
        except InvalidSchemeError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        values = list(column.values)
        prof = profile(values)
        clean = [v for v in values if v is not None]
        scheme = label_bins(scheme, LabelFormat(prof.grain))
        invariants = check_invariants(scheme, prof)
        toggles = {"grain": True, "nice": True, "zero": True, **req.toggles}
        violations = [name for name, ok in invariants.items()
                      if toggles.get(name, True) and not ok]
        alternatives = [default_bins(prof, clean)]
        if app.state.lookup is not None:
            semantic = semantic_bins(req.field, prof, app.state.lookup)
            if semantic is not None:
                alternatives.insert(0, semantic)
        return {
            "scheme": scheme_to_dict(scheme),
            "counts": counts_to_dict(assign(clean, scheme)),
            "alternatives": [scheme_to_dict(s) for s in alternatives],
            "profile": profile_to_dict(prof),
            "invariants": invariants,
            "violations": violations,
        }

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
