"""Session-oriented HTTP service for the interactive decision loop.

One session = one model + its criterion bounds (computed once at creation)
+ an append-only history of (reference point, result) pairs. Submissions
queue FIFO behind a single worker thread per session, so reads never wait
on a running solve. Long solves return a result token immediately; the
token endpoint turns 200 once the solve lands.

State is persisted as one JSON-lines file per session under the state
directory; restarting the service with the same directory restores every
session and its history verbatim.
"""

from __future__ import annotations

import json
import math
import queue
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import Body, FastAPI, HTTPException
from fastapi.responses import JSONResponse
from fastapi.middleware.cors import CORSMiddleware

from . import grid as gridmod
from . import mdp as mdpmod
from .model import MoLpModel, ValidationError, from_json, to_json
from .scalarize import (
    CriterionBounds,
    InfeasibleModelError,
    ScalarizationResult,
    SolverConfig,
    UnboundedObjectiveError,
    criterion_bounds,
    solve_reference_point,
)

_STOP = object()


def _decision_payload(model: MoLpModel, result: ScalarizationResult) -> dict:
    "Problem-shaped view of the solved decision: a policy or a cell mask."
    assignment = result.outcome.assignment
    if not assignment:
        return {}
    meta = model.meta or {}
    if "mdp" in meta:
        mdp = mdpmod.mdp_from_meta(meta["mdp"])
        occupancy = mdpmod.occupancy_from_assignment(mdp, assignment)
        policy = mdpmod.extract_policy(occupancy)
        return {"kind": "policy", "policy": policy.tolist()}
    if "grid" in meta:
        inst = gridmod.grid_from_meta(meta["grid"])
        decision = gridmod.decision_from_assignment(inst, assignment)
        return {
            "kind": "cell_mask",
            "mask": gridmod.mask_lines(inst, decision),
            "managed": sorted([i, j] for i, j in decision),
        }
    return {"kind": "assignment", "assignment": assignment}


@dataclass
class Session:
    id: str
    model: MoLpModel
    bounds: CriterionBounds
    config: SolverConfig
    path: Path | None
    history: list[dict] = field(default_factory=list)
    results: dict[str, dict | None] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)
    jobs: "queue.Queue" = field(default_factory=queue.Queue)
    done: threading.Condition = field(default_factory=threading.Condition)

    def start_worker(self) -> None:
        thread = threading.Thread(target=self._run, name=f"solver-{self.id}", daemon=True)
        thread.start()

    def _run(self) -> None:
        while True:
            job = self.jobs.get()
            if job is _STOP:
                return
            token, reference = job
            result = solve_reference_point(self.model, reference, self.bounds, self.config)
            record = {
                "token": token,
                "reference": list(result.reference),
                "status": result.outcome.status.value,
                "criteria": list(result.outcome.criteria),
                "achievement": None if math.isnan(result.achievement) else result.achievement,
                "decision": _decision_payload(self.model, result),
                "timestamp": time.time(),
            }
            with self.lock:
                self.history.append(record)
                self.results[token] = record
            if self.path is not None:
                with self.path.open("a", encoding="utf-8") as fh:
                    fh.write(json.dumps({"type": "result", **record}) + "\n")
            with self.done:
                self.done.notify_all()

    def submit(self, reference: list[float], wait: float) -> tuple[dict | None, str]:
        token = uuid.uuid4().hex
        with self.lock:
            self.results[token] = None
        self.jobs.put((token, reference))
        deadline = time.monotonic() + wait
        with self.done:
            while True:
                with self.lock:
                    record = self.results[token]
                if record is not None:
                    return record, token
                remaining = deadline - time.monotonic()
                if remaining <= 0:
                    return None, token
                self.done.wait(timeout=remaining)

    def snapshot(self) -> list[dict]:
        with self.lock:
            return list(self.history)


def _bounds_json(bounds: CriterionBounds) -> dict:
    return {"z_min": list(bounds.z_min), "z_max": list(bounds.z_max),
            "lambdas": list(bounds.lambdas)}


def create_app(state_dir: str | None = None, config: SolverConfig | None = None,
               sync_wait: float = 15.0) -> FastAPI:
    """Build the service. `sync_wait` is how long a reference submission
    may block before falling back to a 202 + token response."""
    config = config or SolverConfig()
    app = FastAPI(title="refpoint", version="0.1.0")
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])
    sessions: dict[str, Session] = {}
    state = Path(state_dir) if state_dir else None
    if state:
        state.mkdir(parents=True, exist_ok=True)

    def _register(model: MoLpModel, bounds: CriterionBounds, sid: str | None = None,
                  history: list[dict] | None = None) -> Session:
        sid = sid or uuid.uuid4().hex[:12]
        path = state / f"{sid}.jsonl" if state else None
        session = Session(sid, model, bounds, config, path)
        for record in history or []:
            session.history.append(record)
            session.results[record["token"]] = record
        sessions[sid] = session
        session.start_worker()
        return session

    def _persist_created(session: Session) -> None:
        if session.path is None:
            return
        line = {
            "type": "created",
            "id": session.id,
            "model": json.loads(to_json(session.model).decode("utf-8")),
            "bounds": _bounds_json(session.bounds),
        }
        with session.path.open("w", encoding="utf-8") as fh:
            fh.write(json.dumps(line) + "\n")

    if state:
        for file in sorted(state.glob("*.jsonl")):
            try:
                lines = [json.loads(ln) for ln in file.read_text().splitlines() if ln]
            except json.JSONDecodeError:
                continue
            if not lines or lines[0].get("type") != "created":
                continue
            head = lines[0]
            model = from_json(json.dumps(head["model"]))
            bounds = CriterionBounds(tuple(head["bounds"]["z_min"]),
                                     tuple(head["bounds"]["z_max"]))
            history = [{k: v for k, v in ln.items() if k != "type"}
                       for ln in lines[1:] if ln.get("type") == "result"]
            _register(model, bounds, sid=head["id"], history=history)

    def _session_or_404(sid: str) -> Session:
        if sid not in sessions:
            raise HTTPException(status_code=404, detail="unknown session")
        return sessions[sid]

    def _create_from_model(model: MoLpModel) -> dict:
        try:
            bounds = criterion_bounds(model, config)
        except InfeasibleModelError:
            raise HTTPException(status_code=422, detail="empty feasible set")
        except UnboundedObjectiveError as err:
            raise HTTPException(status_code=422,
                                detail=f"objective {err.objective_name} is unbounded")
        session = _register(model, bounds)
        _persist_created(session)
        return {
            "id": session.id,
            "criteria": [obj.name for obj in model.objectives],
            "bounds": _bounds_json(bounds),
        }

    @app.post("/v1/sessions", status_code=201)
    def create_session(payload: dict = Body(...)):
        try:
            model = from_json(json.dumps(payload))
        except (ValidationError, json.JSONDecodeError) as err:
            raise HTTPException(status_code=400, detail=str(err))
        return _create_from_model(model)

    @app.post("/v1/demos/{kind}", status_code=201)
    def create_demo(kind: str, payload: dict = Body(default={})):
        if kind == "mdp":
            mdp = mdpmod.generate_predator_prey(
                seed=int(payload.get("seed", 0)),
                states=int(payload.get("states", 10)),
                actions=int(payload.get("actions", 4)),
                horizon=int(payload.get("horizon", 20)),
            )
            model = mdpmod.build_mdp_model(mdp)
        elif kind == "grid":
            inst = gridmod.generate_instance(
                seed=int(payload.get("seed", 0)),
                rows=int(payload.get("rows", 8)),
                cols=int(payload.get("cols", 8)),
                budget=payload.get("budget"),
                cardinality=payload.get("k"),
            )
            model = gridmod.build_grid_model(inst)
        else:
            raise HTTPException(status_code=404, detail="unknown demo kind")
        out = _create_from_model(model)
        out["kind"] = kind
        return out

    @app.post("/v1/sessions/{sid}/reference")
    def submit_reference(sid: str, payload: dict = Body(...)):
        session = _session_or_404(sid)
        values = payload.get("values")
        if not isinstance(values, list) or len(values) != session.model.num_objectives:
            raise HTTPException(
                status_code=400,
                detail=f"reference must list {session.model.num_objectives} values")
        try:
            reference = [float(v) for v in values]
        except (TypeError, ValueError):
            raise HTTPException(status_code=400, detail="reference values must be numbers")
        record, token = session.submit(reference, wait=sync_wait)
        if record is None:
            return JSONResponse(status_code=202, content={"token": token, "status": "pending"})
        return record

    @app.get("/v1/sessions/{sid}/results/{token}")
    def poll_result(sid: str, token: str):
        session = _session_or_404(sid)
        with session.lock:
            if token not in session.results:
                raise HTTPException(status_code=404, detail="unknown result token")
            record = session.results[token]
        if record is None:
            return JSONResponse(status_code=202, content={"token": token, "status": "pending"})
        return record

    @app.get("/v1/sessions/{sid}/history")
    def get_history(sid: str):
        return _session_or_404(sid).snapshot()

    @app.get("/v1/sessions/{sid}")
    def get_session(sid: str):
        session = _session_or_404(sid)
        return {
            "id": session.id,
            "criteria": [obj.name for obj in session.model.objectives],
            "bounds": _bounds_json(session.bounds),
            "meta_keys": sorted((session.model.meta or {}).keys()),
            "history_length": len(session.snapshot()),
        }

    return app
