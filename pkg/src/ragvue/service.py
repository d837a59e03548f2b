"""Local HTTP API backing the web UI: uploads, runs, progress, reports."""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field
from typing import Any, Optional

from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel, Field

from ragvue.engine import EngineConfig, evaluate, run_agentic
from ragvue.judge import JudgeConfig
from ragvue.model import METRIC_NAMES, EvalItem, UnknownMetric, WeightsConfig, load_metrics
from ragvue.reports import AllLinesInvalid, RunReport, canonical_json, parse_jsonl, render_csv, render_markdown


class JudgeConfigModel(BaseModel):
    provider: str = "offline"
    model: str = "lexical"
    temperature: float = 0.0
    endpoint: Optional[str] = None
    timeout: float = 30.0
    max_retries: int = 2

    def to_config(self) -> JudgeConfig:
        return JudgeConfig(
            provider=self.provider,
            model=self.model,
            temperature=self.temperature,
            endpoint=self.endpoint,
            timeout=self.timeout,
            max_retries=self.max_retries,
        )


class WeightsModel(BaseModel):
    w_faithfulness: float = 0.4
    w_relevance: float = 0.2
    w_completeness: float = 0.2
    w_clarity: float = 0.2
    tau: float = 0.7

    def to_config(self) -> WeightsConfig:
        return WeightsConfig(
            w_faithfulness=self.w_faithfulness,
            w_relevance=self.w_relevance,
            w_completeness=self.w_completeness,
            w_clarity=self.w_clarity,
            tau=self.tau,
        )


class SessionConfigModel(BaseModel):
    """Per-run settings; the api key stays in process memory only."""

    mode: str = "agentic"
    metrics: Optional[list[str]] = None
    judge: JudgeConfigModel = Field(default_factory=JudgeConfigModel)
    weights: WeightsModel = Field(default_factory=WeightsModel)
    calibration_grid: Optional[list[JudgeConfigModel]] = None
    calibration_target: str = "strict_faithfulness"
    calibration_in_agentic: bool = False
    judge_fixture: Optional[str] = None
    api_key: Optional[str] = None

    def to_engine_config(self) -> EngineConfig:
        grid = None
        if self.calibration_grid is not None:
            grid = tuple(g.to_config() for g in self.calibration_grid)
        return EngineConfig(
            judge=self.judge.to_config(),
            weights=self.weights.to_config(),
            calibration_grid=grid,
            calibration_target=self.calibration_target,
            calibration_in_agentic=self.calibration_in_agentic,
            judge_fixture=self.judge_fixture,
        )


class RunCreateModel(BaseModel):
    dataset_id: str
    config: SessionConfigModel = Field(default_factory=SessionConfigModel)


@dataclass
class RunRecord:
    """In-memory run state; lost on process restart by design."""

    run_id: str
    state: str = "pending"
    completed: int = 0
    total: int = 0
    error: str | None = None
    report: RunReport | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)

    def handle(self) -> dict[str, Any]:
        with self.lock:
            out: dict[str, Any] = {
                "run_id": self.run_id,
                "state": self.state,
                "progress": {"completed": self.completed, "total": self.total},
                "report_ref": f"/api/runs/{self.run_id}/report" if self.state == "done" else None,
            }
            if self.error:
                out["error"] = self.error
            return out


def create_app(ui_dir: str | None = None, port: int = 8400, extra_origins: list[str] | None = None) -> FastAPI:
    app = FastAPI(title="ragvue service", docs_url=None, redoc_url=None)
    origins = [f"http://localhost:{port}", f"http://127.0.0.1:{port}"] + (extra_origins or [])
    app.add_middleware(
        CORSMiddleware,
        allow_origins=origins,
        allow_methods=["GET", "POST"],
        allow_headers=["*"],
    )

    datasets: dict[str, dict[str, Any]] = {}
    runs: dict[str, RunRecord] = {}
    store_lock = threading.Lock()

    @app.get("/api/metrics")
    def list_metrics() -> list[dict[str, Any]]:
        return [d.to_dict() for d in load_metrics().values()]

    @app.post("/api/datasets")
    async def upload_dataset(request: Request) -> dict[str, Any]:
        body = await request.body()
        try:
            text = body.decode("utf-8")
        except UnicodeDecodeError:
            raise HTTPException(status_code=400, detail={"message": "upload must be UTF-8 text"})
        try:
            loaded = parse_jsonl(text.splitlines())
        except AllLinesInvalid as exc:
            raise HTTPException(
                status_code=400,
                detail={
                    "message": "no valid items in upload",
                    "errors": [i.to_dict() for i in exc.issues],
                },
            )
        dataset_id = uuid.uuid4().hex
        with store_lock:
            datasets[dataset_id] = {"items": loaded.items, "summary": loaded.summary()}
        return {"dataset_id": dataset_id, **loaded.summary()}

    def _get_dataset(dataset_id: str) -> list[EvalItem]:
        with store_lock:
            entry = datasets.get(dataset_id)
        if entry is None:
            raise HTTPException(status_code=404, detail="unknown dataset id")
        return entry["items"]

    def _get_run(run_id: str) -> RunRecord:
        with store_lock:
            record = runs.get(run_id)
        if record is None:
            raise HTTPException(status_code=404, detail="unknown run id")
        return record

    def _execute_run(record: RunRecord, items: list[EvalItem], cfg: SessionConfigModel) -> None:
        def on_case(completed: int, total: int, _case) -> None:
            with record.lock:
                record.completed = completed
                record.total = total

        try:
            engine_config = cfg.to_engine_config()
            if cfg.mode == "manual":
                metric_names = cfg.metrics or list(METRIC_NAMES)
                report = evaluate(
                    items, metric_names, config=engine_config,
                    api_key=cfg.api_key, on_case=on_case,
                )
            else:
                report = run_agentic(
                    items, config=engine_config, api_key=cfg.api_key, on_case=on_case,
                )
        except Exception as exc:  # engine-fatal: surface on the handle
            with record.lock:
                record.state = "failed"
                record.error = str(exc)
            return
        with record.lock:
            record.report = report
            record.state = "done"

    @app.post("/api/runs", status_code=202)
    def create_run(body: RunCreateModel) -> dict[str, Any]:
        items = _get_dataset(body.dataset_id)
        if body.config.mode not in ("manual", "agentic"):
            raise HTTPException(status_code=400, detail="mode must be 'manual' or 'agentic'")
        if body.config.mode == "manual" and body.config.metrics:
            try:
                from ragvue.model import validate_metric_names

                validate_metric_names(body.config.metrics)
            except (UnknownMetric, ValueError) as exc:
                raise HTTPException(status_code=400, detail=str(exc))
        record = RunRecord(run_id=uuid.uuid4().hex, total=len(items))
        with store_lock:
            runs[record.run_id] = record
        with record.lock:
            record.state = "running"
        thread = threading.Thread(
            target=_execute_run, args=(record, items, body.config), daemon=True
        )
        thread.start()
        return record.handle()

    @app.get("/api/runs/{run_id}")
    def run_handle(run_id: str) -> dict[str, Any]:
        return _get_run(run_id).handle()

    def _ready_report(run_id: str) -> RunReport:
        record = _get_run(run_id)
        with record.lock:
            state, report = record.state, record.report
        if state != "done" or report is None:
            raise HTTPException(status_code=409, detail=f"run is {state}; report not ready")
        return report

    @app.get("/api/runs/{run_id}/report")
    def run_report(run_id: str) -> Response:
        report = _ready_report(run_id)
        return Response(content=canonical_json(report), media_type="application/json")

    @app.get("/api/runs/{run_id}/cases/{item_id}")
    def run_case(run_id: str, item_id: str) -> dict[str, Any]:
        report = _ready_report(run_id)
        for case in report.cases:
            if case.item_id == item_id:
                return case.to_dict()
        raise HTTPException(status_code=404, detail=f"no case for item {item_id!r}")

    @app.get("/api/runs/{run_id}/export")
    def run_export(run_id: str, format: str = "md") -> PlainTextResponse:
        report = _ready_report(run_id)
        if format == "md":
            return PlainTextResponse(render_markdown(report), media_type="text/markdown")
        if format == "csv":
            return PlainTextResponse(render_csv(report), media_type="text/csv")
        raise HTTPException(status_code=400, detail="format must be 'md' or 'csv'")

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
