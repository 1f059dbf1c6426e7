"""HTTP API over the store: annotation tasks, trial sessions, exports,
and stimulus SVGs."""

from __future__ import annotations

from fastapi import Body, FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse, Response

from ..svg import render_svg
from .config import ServiceConfig
from .store import Store, StoreError

STIMULUS_CONDITIONS = ("black", "color")


def create_app(config: ServiceConfig | None = None, store: Store | None = None) -> FastAPI:
    if store is None:
        if config is None:
            raise ValueError("create_app needs a config or an existing store")
        store = Store(config)

    app = FastAPI(title="tangram collection service")
    app.state.store = store

    @app.exception_handler(StoreError)
    def store_error(_request: Request, exc: StoreError) -> JSONResponse:
        return JSONResponse({"error": exc.reason}, status_code=exc.status)

    @app.get("/api/annotation-task")
    def annotation_task(workerId: str) -> JSONResponse:
        task = store.assign_task(workerId)
        if task is None:
            return JSONResponse({"tangramId": None, "reason": "all tangrams are at target"})
        return JSONResponse(task)

    @app.post("/api/annotations")
    def submit_annotation(payload: dict = Body(...)) -> JSONResponse:
        for key in ("workerId", "tangramId", "whole", "parts"):
            if key not in payload:
                raise StoreError(f"missing field {key!r}", 422)
        result = store.submit_annotation(
            payload["workerId"], payload["tangramId"], payload["whole"], payload["parts"]
        )
        return JSONResponse(result)

    @app.post("/api/trial-session")
    def start_session(payload: dict = Body(...)) -> JSONResponse:
        if "participantId" not in payload:
            raise StoreError("missing field 'participantId'", 422)
        return JSONResponse(store.start_session(payload["participantId"]))

    @app.get("/api/trial-session/{participant_id}/next")
    def next_trial(participant_id: str) -> JSONResponse:
        return JSONResponse(store.next_trial(participant_id))

    @app.post("/api/trial-session/{participant_id}/response")
    def submit_response(participant_id: str, payload: dict = Body(...)) -> JSONResponse:
        for key in ("trialIndex", "chosenItemIndex"):
            if key not in payload or not isinstance(payload[key], int):
                raise StoreError(f"field {key!r} must be an integer", 422)
        return JSONResponse(
            store.submit_response(participant_id, payload["trialIndex"], payload["chosenItemIndex"])
        )

    @app.get("/api/export/{kind}")
    def export(kind: str) -> PlainTextResponse:
        if kind == "annotations":
            return PlainTextResponse(store.export_annotations())
        if kind == "trials":
            return PlainTextResponse(store.export_trials())
        raise StoreError(f"unknown export kind {kind!r}", 404)

    @app.post("/api/admin/qualify")
    def qualify(payload: dict = Body(...)) -> JSONResponse:
        if "workerId" not in payload or "qualified" not in payload:
            raise StoreError("missing field 'workerId' or 'qualified'", 422)
        return JSONResponse(
            store.qualify_worker(
                payload["workerId"], bool(payload["qualified"]), payload.get("survey")
            )
        )

    @app.get("/stimuli/{tangram_id}.svg")
    def stimulus(tangram_id: str, condition: str = "black") -> Response:
        # Stimuli are served all black; color conditions recolor pieces
        # client-side through the per-piece path ids using the color
        # maps delivered with each trial.
        if condition not in STIMULUS_CONDITIONS:
            raise StoreError(f"unknown condition {condition!r}", 404)
        tangram = store.tangrams.get(tangram_id)
        if tangram is None:
            raise StoreError(f"unknown tangram {tangram_id!r}", 404)
        colors = {pid: "black" for pid in tangram.piece_ids}
        return Response(render_svg(tangram, colors), media_type="image/svg+xml")

    return app
