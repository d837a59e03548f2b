/** Pure HTML renderers. Every number shown comes straight from a report field. */

import type {
	AggregateStats,
	AspectVerdictData,
	CaseReportData,
	ChunkScoreData,
	ClaimData,
	DatasetSummary,
	MetricDescriptor,
	MetricResultData,
	RunHandle,
	RunReportData,
} from "./types.js";

export function escapeHtml(text: string): string {
	return text
		.replaceAll("&", "&amp;")
		.replaceAll("<", "&lt;")
		.replaceAll(">", "&gt;")
		.replaceAll('"', "&quot;")
		.replaceAll("'", "&#39;");
}

export function fmtScore(score: number | null | undefined): string {
	return score === null || score === undefined ? "n/a" : score.toFixed(2);
}

function scoreLevel(score: number): "good" | "mid" | "bad" {
	if (score >= 0.7) return "good";
	if (score >= 0.4) return "mid";
	return "bad";
}

export function scoreBadge(result: MetricResultData): string {
	if (result.status !== "ok" || result.score === null) {
		return `<span class="badge badge-na" title="${escapeHtml(result.explanation)}">n/a</span>`;
	}
	return `<span class="badge badge-${scoreLevel(result.score)}">${fmtScore(result.score)}</span>`;
}

export function renderMetricsTable(descriptors: MetricDescriptor[]): string {
	const rows = descriptors
		.map(
			(d) => `<tr>
				<td><code>${escapeHtml(d.name)}</code></td>
				<td>${escapeHtml(d.required.join(", "))}</td>
				<td>${escapeHtml(d.dimension)}</td>
				<td>${escapeHtml(d.summary)}</td>
			</tr>`,
		)
		.join("");
	return `<table class="data-table">
		<thead><tr><th>metric</th><th>inputs</th><th>dimension</th><th>what it measures</th></tr></thead>
		<tbody>${rows}</tbody>
	</table>`;
}

export function renderValidation(summary: DatasetSummary): string {
	const headline = `${summary.items} items, ${summary.errors.length} errors`;
	const dropped =
		summary.empty_chunks_dropped > 0
			? `<p class="muted">${summary.empty_chunks_dropped} empty context chunk(s) dropped</p>`
			: "";
	const errors = summary.errors.length
		? `<ul class="issue-list">${summary.errors
				.map((e) => `<li>line ${e.line}: ${escapeHtml(e.message)}</li>`)
				.join("")}</ul>`
		: "";
	return `<p class="validation-headline">${escapeHtml(headline)}</p>${dropped}${errors}`;
}

export function renderProgress(handle: RunHandle): string {
	const { completed, total } = handle.progress;
	const pct = total > 0 ? Math.round((100 * completed) / total) : 0;
	const error = handle.error ? `<p class="error-text">${escapeHtml(handle.error)}</p>` : "";
	return `<div class="progress-row">
		<div class="progress-bar"><div class="progress-fill" style="width:${pct}%"></div></div>
		<span>${handle.state} ${completed}/${total}</span>
	</div>${error}`;
}

function aggregateRows(aggregates: Record<string, AggregateStats>): string {
	return Object.entries(aggregates)
		.map(
			([name, stats]) => `<tr>
				<td><code>${escapeHtml(name)}</code></td>
				<td>${stats.mean.toFixed(4)}</td>
				<td>${stats.std.toFixed(4)}</td>
				<td>${stats.applicable_count}</td>
			</tr>`,
		)
		.join("");
}

export function renderSummary(report: RunReportData): string {
	const composite = report.composite_aggregates
		? `<h3>Composites</h3>
			<table class="data-table">
			<thead><tr><th>composite</th><th>mean</th><th>std</th><th>applicable</th></tr></thead>
			<tbody>${aggregateRows(report.composite_aggregates)}</tbody></table>`
		: "";
	return `<div class="summary-meta muted">run ${escapeHtml(report.run_id)} (${escapeHtml(report.mode)}), ${report.cases.length} cases</div>
		<table class="data-table">
		<thead><tr><th>metric</th><th>mean</th><th>std</th><th>applicable</th></tr></thead>
		<tbody>${aggregateRows(report.aggregates)}</tbody></table>${composite}`;
}

export function renderCaseList(cases: CaseReportData[], activeId: string | null): string {
	if (cases.length === 0) {
		return `<p class="muted">No cases match the current filters.</p>`;
	}
	const rows = cases
		.map((c) => {
			const kind = c.metadata?.kind ? `<span class="kind-tag">${escapeHtml(c.metadata.kind)}</span>` : "";
			const badges = c.results
				.map((r) => `<span class="mini-metric" title="${escapeHtml(r.metric)}">${scoreBadge(r)}</span>`)
				.join("");
			const active = c.item_id === activeId ? " active" : "";
			return `<button class="case-row${active}" data-case="${escapeHtml(c.item_id)}">
				<span class="case-id">${escapeHtml(c.item_id)}</span>${kind}
				<span class="case-badges">${badges}</span>
			</button>`;
		})
		.join("");
	return `<div class="case-list">${rows}</div>`;
}

function renderChunkTable(chunks: ChunkScoreData[]): string {
	const rows = chunks
		.map(
			(c) => `<tr>
				<td>[${c.index + 1}]</td>
				<td>${fmtScore(c.score)}</td>
				<td><span class="band band-${escapeHtml(c.band)}">${escapeHtml(c.band)}</span></td>
				<td>${escapeHtml(c.rationale)}</td>
			</tr>`,
		)
		.join("");
	return `<table class="data-table compact">
		<thead><tr><th>chunk</th><th>score</th><th>band</th><th>rationale</th></tr></thead>
		<tbody>${rows}</tbody></table>`;
}

function renderVerdictTable(aspects: string[], verdicts: AspectVerdictData[]): string {
	const rows = verdicts
		.map((v) => {
			const aspect = aspects[v.aspect_id] ?? `aspect ${v.aspect_id}`;
			const mark = v.covered ? `<span class="covered">covered</span>` : `<span class="uncovered">not covered</span>`;
			const source =
				v.source === null || v.source === undefined
					? ""
					: typeof v.source === "number"
						? `chunk [${v.source + 1}]`
						: escapeHtml(String(v.source));
			const evidence = v.evidence ? escapeHtml(v.evidence) : "";
			return `<tr><td>${escapeHtml(aspect)}</td><td>${mark}</td><td>${source}</td><td>${evidence}</td></tr>`;
		})
		.join("");
	return `<table class="data-table compact">
		<thead><tr><th>aspect</th><th>verdict</th><th>source</th><th>evidence</th></tr></thead>
		<tbody>${rows}</tbody></table>`;
}

const CLAIM_CLASS: Record<ClaimData["label"], string> = {
	supported: "claim-supported",
	partially_hallucinated: "claim-partial",
	fully_hallucinated: "claim-full",
};

export function renderClaimTable(claims: ClaimData[]): string {
	const rows = claims
		.map(
			(c) => `<tr class="${CLAIM_CLASS[c.label]}">
				<td>${escapeHtml(c.text)}</td>
				<td><span class="claim-label">${escapeHtml(c.label)}</span></td>
				<td>${c.evidence ? escapeHtml(c.evidence) : ""}</td>
				<td>${c.violation ? escapeHtml(c.violation) : ""}</td>
			</tr>`,
		)
		.join("");
	return `<table class="data-table compact claim-table">
		<thead><tr><th>claim</th><th>label</th><th>evidence</th><th>violation</th></tr></thead>
		<tbody>${rows}</tbody></table>`;
}

function renderStringList(title: string, values: unknown): string {
	if (!Array.isArray(values) || values.length === 0) return "";
	const items = values.map((v) => `<li>${escapeHtml(String(v))}</li>`).join("");
	return `<p class="muted">${escapeHtml(title)}</p><ul class="issue-list">${items}</ul>`;
}

function renderResultDetails(result: MetricResultData): string {
	const d = result.details;
	switch (result.metric) {
		case "retrieval_relevance":
			return renderChunkTable((d.chunks as ChunkScoreData[]) ?? []);
		case "retrieval_coverage":
		case "answer_completeness":
			return renderVerdictTable((d.aspects as string[]) ?? [], (d.verdicts as AspectVerdictData[]) ?? []);
		case "strict_faithfulness":
			return renderClaimTable((d.claims as ClaimData[]) ?? []);
		case "answer_relevance":
			return (
				renderStringList("Missing parts", d.missing_parts) +
				renderStringList("Off-topic parts", d.off_topic_parts)
			);
		case "clarity":
			return renderStringList("Suggestions", d.suggestions);
		case "calibration": {
			const runs = (d.runs as { judge: Record<string, unknown>; score: number; explanation: string }[]) ?? [];
			const rows = runs
				.map(
					(r) => `<tr>
						<td>${escapeHtml(String(r.judge.model ?? ""))} @ ${escapeHtml(String(r.judge.temperature ?? ""))}</td>
						<td>${fmtScore(r.score)}</td>
						<td>${escapeHtml(r.explanation)}</td>
					</tr>`,
				)
				.join("");
			return `<p class="muted">target: <code>${escapeHtml(String(d.target_metric ?? ""))}</code></p>
				<table class="data-table compact">
				<thead><tr><th>judge</th><th>score</th><th>explanation</th></tr></thead>
				<tbody>${rows}</tbody></table>`;
		}
		default:
			return "";
	}
}

function renderSelection(caseReport: CaseReportData): string {
	const selection = caseReport.selection;
	if (!selection) return "";
	const skippedAnswer = selection.skipped.filter((s) =>
		["clarity", "answer_relevance", "answer_completeness", "strict_faithfulness"].includes(s.metric),
	);
	const notice =
		skippedAnswer.length > 0 && selection.skipped.some((s) => s.reason.includes("no answer"))
			? `<p class="notice">answer metrics skipped: no answer provided for this item</p>`
			: "";
	const skipped = selection.skipped
		.map((s) => `<li><code>${escapeHtml(s.metric)}</code>: ${escapeHtml(s.reason)}</li>`)
		.join("");
	return `<section class="detail-block">
		<h3>Metric selection</h3>
		${notice}
		<p>selected: ${selection.selected.map((m) => `<code>${escapeHtml(m)}</code>`).join(" ")}</p>
		${skipped ? `<p class="muted">skipped:</p><ul class="issue-list">${skipped}</ul>` : ""}
	</section>`;
}

function renderComposites(caseReport: CaseReportData): string {
	const composites = caseReport.composites;
	if (!composites) return "";
	const renorm = composites.renormalized ? ` <span class="muted">(weights renormalized)</span>` : "";
	return `<section class="detail-block">
		<h3>Composites</h3>
		<p>retrieval overall: <strong>${fmtScore(composites.retrieval_overall)}</strong></p>
		<p>answer overall: <strong>${fmtScore(composites.answer_overall)}</strong>${renorm}</p>
	</section>`;
}

export function renderCaseDetail(caseReport: CaseReportData): string {
	const contexts = caseReport.contexts
		.map((c, i) => `<li><span class="muted">[${i + 1}]</span> ${escapeHtml(c)}</li>`)
		.join("");
	const results = caseReport.results
		.map(
			(r) => `<section class="detail-block" data-metric="${escapeHtml(r.metric)}">
				<h3><code>${escapeHtml(r.metric)}</code> ${scoreBadge(r)}</h3>
				<p>${escapeHtml(r.explanation)}</p>
				${r.status === "ok" ? renderResultDetails(r) : ""}
			</section>`,
		)
		.join("");
	const kind = caseReport.metadata?.kind
		? ` <span class="kind-tag">${escapeHtml(caseReport.metadata.kind)}</span>`
		: "";
	return `<article class="case-detail">
		<h2>${escapeHtml(caseReport.item_id)}${kind}</h2>
		<p><strong>Question:</strong> ${escapeHtml(caseReport.question)}</p>
		${caseReport.answer !== null ? `<p><strong>Answer:</strong> ${escapeHtml(caseReport.answer)}</p>` : ""}
		${contexts ? `<p><strong>Contexts:</strong></p><ol class="context-list">${contexts}</ol>` : ""}
		${renderSelection(caseReport)}
		${results}
		${renderComposites(caseReport)}
	</article>`;
}
