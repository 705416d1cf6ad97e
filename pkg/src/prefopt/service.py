"""HTTP session service for interactive runs.

Each session lives in one JSON document under the data directory, written
atomically (temp file + rename) *before* a response is acknowledged, so a
restart always resumes at the identical pending query. The engine is rebuilt
from the document on every request; all of its randomness is a pure function
of (seed, iteration), so reconstruction is exact.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
import time
import uuid
from typing import List, Optional

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.responses import FileResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .acquisition import AcquisitionConfig
from .idw import IdwModel
from .loop import OptimizerRun, RunConfig
from .model import Dataset, Domain, QueryResponse
from .surrogate import FitConfig

GRID_SIZE = 50


class CreateSessionBody(BaseModel):
    name: str = ""
    lower: List[float]
    upper: List[float]
    dim_names: Optional[List[str]] = None
    dim_units: Optional[List[str]] = None
    n_max: int = Field(ge=3)
    n_init: Optional[int] = None
    has_satisfaction: bool = False
    seed: int = 0
    # optional solver overrides
    delta_E: Optional[float] = None
    delta_G_default: Optional[float] = None
    delta_S_default: Optional[float] = None
    exploration_mode: Optional[str] = None
    sigma: Optional[float] = None
    c_weight: Optional[float] = None
    lam: Optional[float] = None
    epsilon_initial: Optional[float] = None
    recalibration_steps: Optional[List[int]] = None


class ResponseBody(BaseModel):
    iteration: int
    preference: Optional[int] = None
    feasible: int
    satisfactory: Optional[int] = None


def _config_to_json(config: RunConfig) -> dict:
    return {
        "domain": config.domain.to_json(),
        "n_max": config.n_max,
        "n_init": config.n_init,
        "acquisition": {
            "delta_E": config.acquisition.delta_E,
            "delta_G_default": config.acquisition.delta_G_default,
            "delta_S_default": config.acquisition.delta_S_default,
            "n_max": config.acquisition.n_max,
            "exploration_mode": config.acquisition.exploration_mode,
        },
        "fit": {"sigma": config.fit.sigma, "c_weight": config.fit.c_weight,
                "lam": config.fit.lam},
        "rbf_kind": config.rbf_kind.value,
        "epsilon_initial": config.epsilon_initial,
        "epsilon_recalibration_steps": list(config.epsilon_recalibration_steps),
        "k_folds": config.k_folds,
        "has_satisfaction_oracle": config.has_satisfaction_oracle,
        "seed": config.seed,
    }


def _config_from_json(obj: dict) -> RunConfig:
    from .surrogate import RbfKind
    return RunConfig(
        domain=Domain.from_json(obj["domain"]),
        n_max=obj["n_max"],
        n_init=obj["n_init"],
        acquisition=AcquisitionConfig(**obj["acquisition"]),
        fit=FitConfig(**obj["fit"]),
        rbf_kind=RbfKind(obj["rbf_kind"]),
        epsilon_initial=obj["epsilon_initial"],
        epsilon_recalibration_steps=obj["epsilon_recalibration_steps"],
        k_folds=obj["k_folds"],
        has_satisfaction_oracle=obj["has_satisfaction_oracle"],
        seed=obj["seed"],
    )


class SessionStore:
    def __init__(self, data_dir: str):
        self.data_dir = data_dir
        os.makedirs(data_dir, exist_ok=True)
        self._locks = {}
        self._locks_guard = threading.Lock()

    def lock(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(session_id, threading.Lock())

    def _path(self, session_id: str) -> str:
        return os.path.join(self.data_dir, f"{session_id}.json")

    def list_ids(self) -> list:
        return sorted(name[:-5] for name in os.listdir(self.data_dir)
                      if name.endswith(".json"))

    def load(self, session_id: str) -> dict:
        path = self._path(session_id)
        if not os.path.exists(path):
            raise HTTPException(status_code=404,
                                detail=f"unknown session {session_id}")
        with open(path) as fh:
            return json.load(fh)

    def save(self, doc: dict) -> None:
        path = self._path(doc["id"])
        fd, tmp = tempfile.mkstemp(dir=self.data_dir, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(doc, fh)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, path)
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)


def _build_run(doc: dict) -> OptimizerRun:
    config = _config_from_json(doc["config"])
    run = OptimizerRun(config,
                       dataset=Dataset.from_json(doc["dataset"]),
                       epsilon=doc["epsilon"],
                       recalibration_done=set(doc["recalibration_done"]),
                       history=doc["history"])
    pending = doc.get("pending")
    if pending is not None:
        run.restore_pending(pending["candidate"], pending["iteration"],
                            pending.get("delta_G"), pending.get("delta_S"))
    return run


def _advance(doc: dict, run: OptimizerRun) -> None:
    """Compute the next pending query (if any) and fold state back in."""
    query = run.next_query()
    doc["dataset"] = run.dataset.to_json()
    doc["epsilon"] = run.epsilon
    doc["recalibration_done"] = sorted(run.recalibration_done)
    doc["history"] = run.history
    if query is None:
        doc["pending"] = None
        doc["phase"] = "finished"
    else:
        doc["pending"] = {
            "candidate": np.asarray(query["candidate"], float).tolist(),
            "iteration": query["iteration"],
            "delta_G": run._acq.delta_G,
            "delta_S": run._acq.delta_S,
        }
        doc["phase"] = ("initial-sampling"
                        if run.dataset.n_samples < run.config.n_init
                        else "active-learning")
    doc["updated"] = time.time()


def _query_view(doc: dict) -> dict:
    if doc["pending"] is None:
        ds = Dataset.from_json(doc["dataset"])
        best = ds.incumbent()
        return {"status": "finished",
                "best_point": None if best is None else best.tolist(),
                "n_samples": ds.n_samples}
    ds = Dataset.from_json(doc["dataset"])
    incumbent = ds.incumbent()
    return {
        "status": "pending",
        "iteration": doc["pending"]["iteration"],
        "n_max": doc["config"]["n_max"],
        "candidate": doc["pending"]["candidate"],
        "incumbent": None if incumbent is None else incumbent.tolist(),
        "requires_preference": incumbent is not None,
        "requires_satisfaction": doc["config"]["has_satisfaction_oracle"],
        "dim_names": doc["dim_names"],
        "dim_units": doc["dim_units"],
    }


def _summary(doc: dict) -> dict:
    return {"id": doc["id"], "name": doc["name"], "phase": doc["phase"],
            "n_samples": len(doc["dataset"]["points"]),
            "n_max": doc["config"]["n_max"],
            "created": doc["created"], "updated": doc["updated"]}


def _probability_grid(dataset: Dataset, labels) -> list:
    model = IdwModel(dataset.unit_points(), np.asarray(labels))
    axis = np.linspace(0.0, 1.0, GRID_SIZE)
    gx, gy = np.meshgrid(axis, axis)
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    return model.predict(pts).reshape(GRID_SIZE, GRID_SIZE).tolist()


def create_app(data_dir: str, static_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="prefopt session service")
    store = SessionStore(data_dir)
    app.state.store = store

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        try:
            domain = Domain(np.asarray(body.lower), np.asarray(body.upper))
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        n_init = body.n_init
        if n_init is not None and not (2 <= n_init < body.n_max):
            raise HTTPException(status_code=400,
                                detail="need 2 <= n_init < n_max")
        acq_kwargs = {"n_max": body.n_max}
        if body.delta_E is not None:
            acq_kwargs["delta_E"] = body.delta_E
        if body.delta_G_default is not None:
            acq_kwargs["delta_G_default"] = body.delta_G_default
        if body.delta_S_default is not None:
            acq_kwargs["delta_S_default"] = body.delta_S_default
        if body.exploration_mode is not None:
            acq_kwargs["exploration_mode"] = body.exploration_mode
        fit_kwargs = {"sigma": body.sigma if body.sigma is not None
                      else 1.0 / body.n_max}
        if body.c_weight is not None:
            fit_kwargs["c_weight"] = body.c_weight
        if body.lam is not None:
            fit_kwargs["lam"] = body.lam
        try:
            config = RunConfig(
                domain=domain, n_max=body.n_max, n_init=n_init,
                acquisition=AcquisitionConfig(**acq_kwargs),
                fit=FitConfig(**fit_kwargs),
                epsilon_initial=body.epsilon_initial or 1.0,
                epsilon_recalibration_steps=body.recalibration_steps,
                has_satisfaction_oracle=body.has_satisfaction,
                seed=body.seed)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

        doc = {
            "id": uuid.uuid4().hex,
            "name": body.name,
            "dim_names": body.dim_names or [f"x{k}" for k in range(domain.n_dims)],
            "dim_units": body.dim_units or ["" for _ in range(domain.n_dims)],
            "config": _config_to_json(config),
            "dataset": Dataset(domain).to_json(),
            "epsilon": config.epsilon_initial,
            "recalibration_done": [],
            "history": [],
            "pending": None,
            "phase": "initial-sampling",
            "created": time.time(),
            "updated": time.time(),
        }
        run = _build_run(doc)
        _advance(doc, run)
        store.save(doc)
        return {"session": _summary(doc), "query": _query_view(doc)}

    @app.get("/sessions")
    def list_sessions():
        return [_summary(store.load(sid)) for sid in store.list_ids()]

    @app.get("/sessions/{session_id}/query")
    def get_query(session_id: str):
        return _query_view(store.load(session_id))

    @app.post("/sessions/{session_id}/response")
    def post_response(session_id: str, body: ResponseBody):
        with store.lock(session_id):
            doc = store.load(session_id)
            if doc["pending"] is None:
                raise HTTPException(status_code=409,
                                    detail="session finished; no pending query")
            if body.iteration != doc["pending"]["iteration"]:
                raise HTTPException(
                    status_code=409,
                    detail=f"pending query is iteration "
                           f"{doc['pending']['iteration']}, got {body.iteration}")
            try:
                response = QueryResponse(preference=body.preference,
                                         feasible=body.feasible,
                                         satisfactory=body.satisfactory)
            except ValueError as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            run = _build_run(doc)
            try:
                run.submit(response)
            except ValueError as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            _advance(doc, run)
            store.save(doc)  # persisted before acknowledgment
            return {"session": _summary(doc), "query": _query_view(doc)}

    @app.get("/sessions/{session_id}/state")
    def get_state(session_id: str):
        doc = store.load(session_id)
        ds = Dataset.from_json(doc["dataset"])
        out = {
            "session": _summary(doc),
            "dataset": doc["dataset"],
            "incumbent": None if ds.incumbent() is None
            else ds.incumbent().tolist(),
            "history": doc["history"],
            "epsilon": doc["epsilon"],
            "query": _query_view(doc),
            "dim_names": doc["dim_names"],
            "dim_units": doc["dim_units"],
        }
        if ds.domain.n_dims == 2 and ds.n_samples >= 1:
            out["g_grid"] = _probability_grid(ds, ds.g_labels)
            if doc["config"]["has_satisfaction_oracle"]:
                out["s_grid"] = _probability_grid(ds, ds.s_labels)
        return out

    if static_dir and os.path.isdir(static_dir):
        app.mount("/", StaticFiles(directory=static_dir, html=True),
                  name="static")

    return app


def default_static_dir() -> Optional[str]:
    """Built frontend assets, when present alongside the repo."""
    here = os.path.dirname(os.path.abspath(__file__))
    for candidate in (
            os.path.join(here, "static"),
            os.path.normpath(os.path.join(here, "..", "..",
                                          "frontend", "dist"))):
        if os.path.isdir(candidate):
            return candidate
    return None
