/** Shapes mirrored from the evaluation service's JSON API. */

export interface MetricDescriptor {
	name: string;
	required: string[];
	dimension: string;
	summary: string;
}

export type ResultStatus = "ok" | "not_applicable" | "error";

export interface ChunkScoreData {
	index: number;
	score: number;
	band: string;
	rationale: string;
}

export interface AspectVerdictData {
	aspect_id: number;
	covered: boolean;
	evidence: string | null;
	source: number | string | null;
}

export interface ClaimData {
	text: string;
	label: "supported" | "partially_hallucinated" | "fully_hallucinated";
	evidence: string | null;
	violation: string | null;
}

export interface MetricResultData {
	metric: string;
	status: ResultStatus;
	score: number | null;
	explanation: string;
	details: Record<string, unknown>;
	judge: Record<string, unknown>;
	elapsed: number;
}

export interface SelectionData {
	selected: string[];
	skipped: { metric: string; reason: string }[];
}

export interface CompositesData {
	retrieval_overall: number | null;
	answer_overall: number | null;
	weights_used: Record<string, number>;
	renormalized: boolean;
}

export interface CaseReportData {
	item_id: string;
	question: string;
	answer: string | null;
	contexts: string[];
	metadata: Record<string, string>;
	results: MetricResultData[];
	selection?: SelectionData;
	composites?: CompositesData;
}

export interface AggregateStats {
	mean: number;
	std: number;
	applicable_count: number;
}

export interface RunReportData {
	report_schema_version: number;
	run_id: string;
	created_at: string;
	mode: string;
	config_snapshot: Record<string, unknown>;
	aggregates: Record<string, AggregateStats>;
	composite_aggregates?: Record<string, AggregateStats>;
	cases: CaseReportData[];
}

export interface RunHandle {
	run_id: string;
	state: "pending" | "running" | "done" | "failed";
	progress: { completed: number; total: number };
	report_ref: string | null;
	error?: string;
}

export interface DatasetSummary {
	dataset_id: string;
	items: number;
	errors: { line: number; message: string }[];
	empty_chunks_dropped: number;
}

export interface SessionConfig {
	mode: "manual" | "agentic";
	metrics?: string[];
	judge: {
		provider: string;
		model: string;
		temperature: number;
		endpoint: string | null;
		timeout: number;
		max_retries: number;
	};
	weights: {
		w_faithfulness: number;
		w_relevance: number;
		w_completeness: number;
		w_clarity: number;
		tau: number;
	};
	calibration_in_agentic: boolean;
	calibration_target: string;
	api_key?: string;
}
