/** Thin fetch client for the evaluation service. */

import type {
	CaseReportData,
	DatasetSummary,
	MetricDescriptor,
	RunHandle,
	RunReportData,
	SessionConfig,
} from "./types.js";

async function asJson<T>(resp: Response): Promise<T> {
	if (!resp.ok) {
		let detail = `${resp.status} ${resp.statusText}`;
		try {
			const body = await resp.json();
			detail = typeof body.detail === "string" ? body.detail : JSON.stringify(body.detail ?? body);
		} catch {
			// keep the status line
		}
		throw new Error(detail);
	}
	return (await resp.json()) as T;
}

export async function fetchMetrics(): Promise<MetricDescriptor[]> {
	return asJson(await fetch("/api/metrics"));
}

export async function uploadDataset(jsonl: string): Promise<DatasetSummary> {
	return asJson(
		await fetch("/api/datasets", {
			method: "POST",
			headers: { "Content-Type": "application/jsonl" },
			body: jsonl,
		}),
	);
}

export async function startRun(datasetId: string, config: SessionConfig): Promise<RunHandle> {
	return asJson(
		await fetch("/api/runs", {
			method: "POST",
			headers: { "Content-Type": "application/json" },
			body: JSON.stringify({ dataset_id: datasetId, config }),
		}),
	);
}

export async function fetchHandle(runId: string): Promise<RunHandle> {
	return asJson(await fetch(`/api/runs/${encodeURIComponent(runId)}`));
}

export async function fetchReport(runId: string): Promise<RunReportData> {
	return asJson(await fetch(`/api/runs/${encodeURIComponent(runId)}/report`));
}

export async function fetchCase(runId: string, itemId: string): Promise<CaseReportData> {
	return asJson(
		await fetch(`/api/runs/${encodeURIComponent(runId)}/cases/${encodeURIComponent(itemId)}`),
	);
}

/** Export URLs are plain links; they never carry session credentials. */
export function exportUrl(runId: string, format: "md" | "csv"): string {
	return `/api/runs/${encodeURIComponent(runId)}/export?format=${format}`;
}
