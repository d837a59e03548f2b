/** Application shell: tabs, session settings, upload, run control, drill-down. */

import { exportUrl, fetchCase, fetchHandle, fetchMetrics, fetchReport, startRun, uploadDataset } from "./api.js";
import { EMPTY_FILTERS, distinctKinds, filterCases, type CaseFilters } from "./filters.js";
import {
	escapeHtml,
	renderCaseDetail,
	renderCaseList,
	renderMetricsTable,
	renderProgress,
	renderSummary,
	renderValidation,
} from "./render.js";
import type { DatasetSummary, MetricDescriptor, RunHandle, RunReportData, SessionConfig } from "./types.js";

interface UiState {
	descriptors: MetricDescriptor[];
	dataset: DatasetSummary | null;
	run: RunHandle | null;
	report: RunReportData | null;
	activeCaseId: string | null;
	filters: CaseFilters;
	/** Session-only; deliberately kept out of storage, URLs, and exports. */
	apiKey: string;
}

const state: UiState = {
	descriptors: [],
	dataset: null,
	run: null,
	report: null,
	activeCaseId: null,
	filters: { ...EMPTY_FILTERS },
	apiKey: "",
};

let pollTimer: number | null = null;

function el<T extends HTMLElement>(id: string): T {
	const node = document.getElementById(id);
	if (!node) throw new Error(`missing element #${id}`);
	return node as T;
}

function banner(message: string, retry?: () => void) {
	const host = el<HTMLDivElement>("banners");
	const box = document.createElement("div");
	box.className = "banner";
	box.innerHTML = `<span>${escapeHtml(message)}</span>`;
	if (retry) {
		const button = document.createElement("button");
		button.textContent = "retry";
		button.addEventListener("click", () => {
			box.remove();
			retry();
		});
		box.appendChild(button);
	}
	const close = document.createElement("button");
	close.textContent = "dismiss";
	close.addEventListener("click", () => box.remove());
	box.appendChild(close);
	host.appendChild(box);
}

function switchTab(name: string) {
	for (const section of document.querySelectorAll<HTMLElement>("[data-tab-panel]")) {
		section.hidden = section.dataset.tabPanel !== name;
	}
	for (const button of document.querySelectorAll<HTMLButtonElement>("[data-tab]")) {
		button.classList.toggle("active", button.dataset.tab === name);
	}
}

function numberValue(id: string, fallback: number): number {
	const raw = el<HTMLInputElement>(id).value.trim();
	const parsed = Number(raw);
	return raw === "" || Number.isNaN(parsed) ? fallback : parsed;
}

function sessionConfig(): SessionConfig {
	const mode = el<HTMLSelectElement>("mode-select").value === "manual" ? "manual" : "agentic";
	const selected = [...document.querySelectorAll<HTMLInputElement>(".metric-check:checked")].map(
		(c) => c.value,
	);
	const provider = el<HTMLSelectElement>("judge-provider").value;
	const endpoint = el<HTMLInputElement>("judge-endpoint").value.trim();
	const config: SessionConfig = {
		mode,
		judge: {
			provider,
			model: el<HTMLInputElement>("judge-model").value.trim() || "lexical",
			temperature: numberValue("judge-temperature", 0),
			endpoint: provider === "http" ? endpoint || null : null,
			timeout: numberValue("judge-timeout", 30),
			max_retries: numberValue("judge-retries", 2),
		},
		weights: {
			w_faithfulness: numberValue("w-faithfulness", 0.4),
			w_relevance: numberValue("w-relevance", 0.2),
			w_completeness: numberValue("w-completeness", 0.2),
			w_clarity: numberValue("w-clarity", 0.2),
			tau: numberValue("weight-tau", 0.7),
		},
		calibration_in_agentic: el<HTMLInputElement>("calibration-enabled").checked,
		calibration_target: el<HTMLSelectElement>("calibration-target").value,
	};
	if (mode === "manual" && selected.length > 0) {
		config.metrics = selected;
	}
	if (state.apiKey) {
		config.api_key = state.apiKey;
	}
	return config;
}

function renderSettingsMetrics() {
	const host = el<HTMLDivElement>("metric-choices");
	host.innerHTML = state.descriptors
		.map(
			(d) => `<label class="metric-choice">
				<input type="checkbox" class="metric-check" value="${escapeHtml(d.name)}" checked>
				<code>${escapeHtml(d.name)}</code>
			</label>`,
		)
		.join("");
	const target = el<HTMLSelectElement>("calibration-target");
	target.innerHTML = state.descriptors
		.filter((d) => d.name !== "calibration")
		.map((d) => `<option value="${escapeHtml(d.name)}">${escapeHtml(d.name)}</option>`)
		.join("");
	target.value = "strict_faithfulness";
}

function refreshRunControls() {
	el<HTMLButtonElement>("run-button").disabled = state.dataset === null;
}

async function handleUpload(file: File) {
	try {
		const text = await file.text();
		state.dataset = await uploadDataset(text);
		el<HTMLDivElement>("validation-summary").innerHTML = renderValidation(state.dataset);
	} catch (err) {
		state.dataset = null;
		el<HTMLDivElement>("validation-summary").innerHTML = "";
		banner(`upload failed: ${err instanceof Error ? err.message : String(err)}`);
	}
	refreshRunControls();
}

function stopPolling() {
	if (pollTimer !== null) {
		window.clearInterval(pollTimer);
		pollTimer = null;
	}
}

function renderFilters() {
	if (!state.report) return;
	const kinds = distinctKinds(state.report.cases);
	el<HTMLSelectElement>("filter-kind").innerHTML =
		`<option value="">all kinds</option>` +
		kinds.map((k) => `<option value="${escapeHtml(k)}">${escapeHtml(k)}</option>`).join("");
	const metrics = Object.keys(state.report.aggregates);
	el<HTMLSelectElement>("filter-metric").innerHTML =
		`<option value="">no score filter</option>` +
		metrics.map((m) => `<option value="${escapeHtml(m)}">${escapeHtml(m)}</option>`).join("");
}

function renderReport() {
	if (!state.report) return;
	el<HTMLDivElement>("summary-host").innerHTML = renderSummary(state.report);
	const visible = filterCases(state.report.cases, state.filters);
	el<HTMLDivElement>("case-list-host").innerHTML = renderCaseList(visible, state.activeCaseId);
	for (const row of document.querySelectorAll<HTMLButtonElement>(".case-row")) {
		row.addEventListener("click", () => openCase(row.dataset.case ?? ""));
	}
	const exports = el<HTMLDivElement>("export-buttons");
	if (state.run) {
		const runId = state.run.run_id;
		exports.innerHTML = `
			<a class="button" href="${exportUrl(runId, "md")}" download="report.md">download md</a>
			<a class="button" href="${exportUrl(runId, "csv")}" download="report.csv">download csv</a>`;
	}
}

async function openCase(itemId: string) {
	if (!state.run) return;
	try {
		const caseReport = await fetchCase(state.run.run_id, itemId);
		state.activeCaseId = itemId;
		el<HTMLDivElement>("case-detail-host").innerHTML = renderCaseDetail(caseReport);
		renderReport();
	} catch (err) {
		banner(`could not load case: ${err instanceof Error ? err.message : String(err)}`);
	}
}

async function pollRun() {
	if (!state.run) return;
	try {
		state.run = await fetchHandle(state.run.run_id);
	} catch (err) {
		stopPolling();
		banner(`lost the run: ${err instanceof Error ? err.message : String(err)}`);
		return;
	}
	el<HTMLDivElement>("progress-host").innerHTML = renderProgress(state.run);
	if (state.run.state === "done") {
		stopPolling();
		try {
			state.report = await fetchReport(state.run.run_id);
			renderFilters();
			renderReport();
		} catch (err) {
			banner(`report fetch failed: ${err instanceof Error ? err.message : String(err)}`, () =>
				void pollRun(),
			);
		}
	} else if (state.run.state === "failed") {
		stopPolling();
		banner(`run failed: ${state.run.error ?? "unknown error"}`);
	}
}

async function handleRun() {
	if (!state.dataset) return;
	state.report = null;
	state.activeCaseId = null;
	el<HTMLDivElement>("summary-host").innerHTML = "";
	el<HTMLDivElement>("case-list-host").innerHTML = "";
	el<HTMLDivElement>("case-detail-host").innerHTML = "";
	try {
		state.run = await startRun(state.dataset.dataset_id, sessionConfig());
	} catch (err) {
		banner(`run start failed: ${err instanceof Error ? err.message : String(err)}`, () =>
			void handleRun(),
		);
		return;
	}
	switchTab("evaluate");
	el<HTMLDivElement>("progress-host").innerHTML = renderProgress(state.run);
	stopPolling();
	pollTimer = window.setInterval(() => void pollRun(), 1000);
}

function bindFilters() {
	const apply = () => {
		const thresholdRaw = el<HTMLInputElement>("filter-threshold").value.trim();
		state.filters = {
			kind: el<HTMLSelectElement>("filter-kind").value,
			metric: el<HTMLSelectElement>("filter-metric").value,
			threshold: thresholdRaw === "" ? null : Number(thresholdRaw),
			direction: el<HTMLSelectElement>("filter-direction").value === "at_or_above" ? "at_or_above" : "below",
		};
		renderReport();
	};
	for (const id of ["filter-kind", "filter-metric", "filter-threshold", "filter-direction"]) {
		el(id).addEventListener("change", apply);
	}
	el<HTMLButtonElement>("filter-clear").addEventListener("click", () => {
		state.filters = { ...EMPTY_FILTERS };
		el<HTMLSelectElement>("filter-kind").value = "";
		el<HTMLSelectElement>("filter-metric").value = "";
		el<HTMLInputElement>("filter-threshold").value = "";
		el<HTMLSelectElement>("filter-direction").value = "below";
		renderReport();
	});
}

async function boot() {
	for (const button of document.querySelectorAll<HTMLButtonElement>("[data-tab]")) {
		button.addEventListener("click", () => switchTab(button.dataset.tab ?? "overview"));
	}
	switchTab("overview");

	el<HTMLInputElement>("api-key").addEventListener("input", (event) => {
		state.apiKey = (event.target as HTMLInputElement).value;
	});
	el<HTMLSelectElement>("judge-provider").addEventListener("change", (event) => {
		const http = (event.target as HTMLSelectElement).value === "http";
		el<HTMLInputElement>("judge-endpoint").disabled = !http;
		el<HTMLInputElement>("api-key").disabled = !http;
	});
	el<HTMLInputElement>("dataset-file").addEventListener("change", (event) => {
		const file = (event.target as HTMLInputElement).files?.[0];
		if (file) void handleUpload(file);
	});
	el<HTMLButtonElement>("run-button").addEventListener("click", () => void handleRun());
	bindFilters();
	refreshRunControls();

	try {
		state.descriptors = await fetchMetrics();
		el<HTMLDivElement>("overview-metrics").innerHTML = renderMetricsTable(state.descriptors);
		renderSettingsMetrics();
	} catch (err) {
		banner(`could not reach the service: ${err instanceof Error ? err.message : String(err)}`, () =>
			void boot(),
		);
	}
}

document.addEventListener("DOMContentLoaded", () => void boot());
