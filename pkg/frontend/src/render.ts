// Pure HTML rendering of the application state. Everything here is a
// string-in/string-out function so the views are testable without a
// browser; main.ts owns the DOM wiring.

import type { AppState } from "./store.js";
import type { RouteDraft, RouteReport, SegmentDraft } from "./types.js";
import { ACTIVITIES, MODES } from "./types.js";
import { allowedKinds, routeErrors, scoringBlocked, segmentErrors } from "./validate.js";

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

// Displayed totals always come verbatim from the response; this only
// formats them for humans.
export function fmtPercent(probability: number): string {
  return `${(probability * 100).toFixed(1)}%`;
}

export function fmtHours(hours: number): string {
  return hours >= 1 ? `${hours.toFixed(2)} h` : `${Math.round(hours * 60)} min`;
}

const KIND_LABEL: Record<SegmentDraft["kind"], string> = {
  distance_m: "meters",
  stops: "stops",
  minutes: "minutes",
};

function options(values: readonly string[], selected: string | undefined): string {
  return values
    .map(
      (value) =>
        `<option value="${value}"${value === selected ? " selected" : ""}>${value}</option>`,
    )
    .join("");
}

function renderSegmentRow(
  segment: SegmentDraft,
  route: number,
  index: number,
  count: number,
): string {
  const errors = segmentErrors(segment);
  const problems = errors.length
    ? `<div class="problems">${errors.map(escapeHtml).join("; ")}</div>`
    : "";
  return `
  <div class="segment" data-route="${route}" data-segment="${index}">
    <select data-field="mode" data-route="${route}" data-segment="${index}">
      ${options(MODES, segment.mode)}
    </select>
    <input data-field="value" data-route="${route}" data-segment="${index}"
           type="number" min="0" value="${segment.value}">
    <select data-field="kind" data-route="${route}" data-segment="${index}">
      ${allowedKinds(segment.mode)
        .map(
          (kind) =>
            `<option value="${kind}"${kind === segment.kind ? " selected" : ""}>${KIND_LABEL[kind]}</option>`,
        )
        .join("")}
    </select>
    <span class="reorder">
      <button data-action="seg-up" data-route="${route}" data-segment="${index}"
              ${index === 0 ? "disabled" : ""} title="move up">&#8593;</button>
      <button data-action="seg-down" data-route="${route}" data-segment="${index}"
              ${index === count - 1 ? "disabled" : ""} title="move down">&#8595;</button>
      <button data-action="seg-remove" data-route="${route}" data-segment="${index}"
              title="remove leg">&#10005;</button>
    </span>
    ${problems}
  </div>`;
}

function renderRouteCard(draft: RouteDraft, index: number, state: AppState): string {
  const problems = routeErrors(draft);
  const inlineError =
    state.status === "error"
      ? `<div class="problems">scoring failed: ${escapeHtml(state.errorMessage)}</div>`
      : "";
  return `
<article class="route-card" data-route-id="${escapeHtml(draft.id)}">
  <header>
    <strong>${escapeHtml(draft.id)}</strong>
    <span class="label">${escapeHtml(draft.label)}</span>
    <button data-action="route-remove" data-route="${index}" title="remove route">remove</button>
  </header>
  ${draft.segments.map((s, i) => renderSegmentRow(s, index, i, draft.segments.length)).join("")}
  <button data-action="seg-add" data-route="${index}">+ add leg</button>
  ${problems.length && draft.segments.length === 0 ? `<div class="problems">${problems.map(escapeHtml).join("; ")}</div>` : ""}
  ${inlineError}
</article>`;
}

function renderBar(report: RouteReport, rank: number, maxTotal: number): string {
  const width = maxTotal > 0 ? Math.max((report.total / maxTotal) * 100, 0.5) : 0.5;
  const segmentSum = report.per_segment.reduce((acc, s) => acc + s.probability, 0);
  const stacked = report.per_segment
    .map((s) => {
      const share = segmentSum > 0 ? (s.probability / segmentSum) * 100 : 0;
      const detail = `${s.mode}: ${fmtHours(s.hours)}, ${fmtPercent(s.probability)}`;
      return `<span class="chunk mode-${s.mode}" style="width:${share.toFixed(2)}%" title="${escapeHtml(detail)}"></span>`;
    })
    .join("");
  const badge = rank === 0 ? `<span class="badge">safest</span>` : "";
  return `
<div class="ranked-row" data-route-id="${escapeHtml(report.route_id)}" data-total="${report.total}">
  <div class="ranked-head">
    <span class="rank">${rank + 1}.</span>
    <strong>${escapeHtml(report.route_id)}</strong>
    ${badge}
    <span class="total">${fmtPercent(report.total)}</span>
  </div>
  <div class="bar" style="width:${width.toFixed(2)}%">${stacked}</div>
  <div class="ranked-label">${escapeHtml(report.label)}</div>
</div>`;
}

export function renderComparison(state: AppState): string {
  if (!state.results) {
    return `<p class="placeholder">No scores yet.</p>`;
  }
  // displayed ranking is exactly the response ordering
  const reports = state.results.reports;
  const maxTotal = Math.max(...reports.map((r) => r.total));
  return `
<div class="comparison-list">
  ${reports.map((report, rank) => renderBar(report, rank, maxTotal)).join("")}
</div>
<p class="versions">engine ${escapeHtml(state.results.engine_version)},
presets ${escapeHtml(state.results.preset_version)}</p>`;
}

function renderControls(state: AppState): string {
  const blocked = scoringBlocked(state.drafts);
  const transitActivity = state.activities.subway ?? "";
  const walkingActivity = state.activities.walking ?? "";
  return `
<div class="controls">
  <button data-action="load-sample">load sample routes</button>
  <button data-action="route-add">+ add route</button>
  <button data-action="score-now" id="score-button" ${blocked ? "disabled" : ""}>score</button>
  <label>prevalence
    <input id="prevalence" type="range" min="0" max="0.03" step="0.0001"
           value="${state.prevalence}">
    <span class="readout">${(state.prevalence * 100).toFixed(2)}%</span>
  </label>
  <label><input id="derived" type="checkbox" ${state.derived ? "checked" : ""}>
    derive rates from k(E)</label>
  <label>walking activity
    <select id="activity-walking" ${state.derived ? "" : "disabled"}>
      <option value="">default</option>${options(ACTIVITIES, walkingActivity)}
    </select>
  </label>
  <label>transit activity
    <select id="activity-transit" ${state.derived ? "" : "disabled"}>
      <option value="">default</option>${options(ACTIVITIES, transitActivity)}
    </select>
  </label>
</div>`;
}

export function renderBanner(state: AppState): string {
  if (state.status === "offline") {
    return `<div class="banner offline">Scoring service unreachable — editing still works,
scores will refresh when the service returns.</div>`;
  }
  return "";
}

export function renderApp(state: AppState): string {
  return `
${renderBanner(state)}
${renderControls(state)}
<main>
  <section class="builder">
    <h2>Routes</h2>
    ${state.drafts.map((draft, i) => renderRouteCard(draft, i, state)).join("")}
  </section>
  <section class="comparison">
    <h2>Ranked by infection risk${state.status === "scoring" ? " (scoring…)" : ""}</h2>
    ${renderComparison(state)}
  </section>
</main>`;
}
