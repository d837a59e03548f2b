"""Reference-free, explainable evaluation of RAG (question, contexts, answer) data."""

from ragvue.aspects import Aspect, AspectCache, AspectSet, extract_aspects
from ragvue.calibration import CalibrationResult, calibrate
from ragvue.engine import EngineConfig, evaluate, run_agentic
from ragvue.judge import JudgeConfig, JudgeError, offline_judge
from ragvue.model import (
    EvalItem,
    EmptyDataset,
    MetricDescriptor,
    MetricResult,
    ResultStatus,
    UnknownMetric,
    WeightsConfig,
    load_metrics,
)
from ragvue.orchestrator import answer_composite, harmonic_mean, select_metrics
from ragvue.reports import RunReport, export_ragas_json, load_jsonl, write_report

__version__ = "0.1.0"

__all__ = [
    "Aspect",
    "AspectCache",
    "AspectSet",
    "CalibrationResult",
    "EmptyDataset",
    "EngineConfig",
    "EvalItem",
    "JudgeConfig",
    "JudgeError",
    "MetricDescriptor",
    "MetricResult",
    "ResultStatus",
    "RunReport",
    "UnknownMetric",
    "WeightsConfig",
    "answer_composite",
    "calibrate",
    "evaluate",
    "export_ragas_json",
    "extract_aspects",
    "harmonic_mean",
    "load_jsonl",
    "load_metrics",
    "offline_judge",
    "run_agentic",
    "select_metrics",
    "write_report",
]
