/**
 * Pure HTML builders. Every function returns a string and touches no DOM,
 * so the whole presentation layer is testable without a browser.
 */

import type {
  Candidate,
  DesignResponse,
  ErrorBody,
  FieldErrorDetail,
  InfeasibleDetails,
} from "./types.js";
import { comboKey } from "./types.js";
import type { HistoryEntry, PinnedCandidate } from "./state.js";
import {
  batteryLabel,
  escapeHtml,
  indexValue,
  kg,
  amps,
  millimeters,
  minutes,
  objective,
} from "./format.js";

export const INDEX_LABELS = [
  "X1 diameter",
  "X2 mass",
  "X3 mismatch",
  "X4 hover power/thrust",
  "X5 voltage",
  "X6 capacity",
  "X7 current headroom",
] as const;

function comboLabel(candidate: Candidate): string {
  const { motor_id, esc_id, prop_id } = candidate.combo;
  return `${motor_id} + ${esc_id} + ${prop_id}`;
}

function pinButton(key: string, pinned: boolean): string {
  const pressed = pinned ? "true" : "false";
  const glyph = pinned ? "★" : "☆";
  const label = pinned ? "Unpin" : "Pin";
  return (
    `<button type="button" class="pin-toggle" data-key="${escapeHtml(key)}"` +
    ` aria-pressed="${pressed}" title="${label} for comparison">${glyph}</button>`
  );
}

/** Ranked candidate table, rows in the order the service returned them. */
export function renderResultsTable(
  response: DesignResponse,
  pinnedKeys: ReadonlySet<string>,
): string {
  if (response.candidates.length === 0) {
    return `<p class="empty">No candidates returned.</p>`;
  }

  const indexHeads = INDEX_LABELS.map(
    (label) => `<th class="num">${escapeHtml(label)}</th>`,
  ).join("");

  const rows = response.candidates
    .map((candidate, i) => {
      const key = comboKey(candidate.combo);
      const cells = [
        `<td class="num">${i + 1}</td>`,
        `<td>${escapeHtml(comboLabel(candidate))}</td>`,
        `<td class="num">${kg(candidate.copter_mass)}</td>`,
        `<td class="num">${millimeters(candidate.airframe.diameter)}</td>`,
        `<td class="num">${escapeHtml(batteryLabel(candidate.battery.voltage, candidate.battery.capacity))}</td>`,
        `<td class="num">${minutes(candidate.achieved_time)}</td>`,
        ...candidate.indexes.map((value) => `<td class="num">${indexValue(value)}</td>`),
        `<td class="num objective">${objective(candidate.objective)}</td>`,
        `<td>${pinButton(key, pinnedKeys.has(key))}</td>`,
      ];
      return `<tr data-key="${escapeHtml(key)}">${cells.join("")}</tr>`;
    })
    .join("\n");

  return `<table class="results">
<thead><tr><th class="num">#</th><th>Combination</th><th class="num">Mass</th><th class="num">Diameter</th><th class="num">Battery</th><th class="num">Hover time</th>${indexHeads}<th class="num">J</th><th></th></tr></thead>
<tbody>
${rows}
</tbody>
</table>`;
}

export function renderSummary(response: DesignResponse): string {
  const density = response.air_density.toFixed(4);
  const timing =
    response.timing_ms !== undefined
      ? ` in ${response.timing_ms.toFixed(1)} ms`
      : "";
  return (
    `<p class="summary">Showing ${response.returned} of ${response.considered} combinations considered` +
    ` at air density ${density} kg/m³${timing}.` +
    ` <span class="fingerprint">db ${escapeHtml(response.db_fingerprint)}</span></p>`
  );
}

/** One comparison row: a label plus a value cell per pinned candidate. */
function comparisonRow(label: string, cells: string[]): string {
  return `<tr><th scope="row">${escapeHtml(label)}</th>${cells
    .map((cell) => `<td>${cell}</td>`)
    .join("")}</tr>`;
}

/**
 * Side-by-side table of every pinned candidate. Index rows render as bars
 * scaled against the largest value across the pinned set, so relative
 * weaknesses line up visually. Empty string until two pins exist.
 */
export function renderComparison(pins: readonly PinnedCandidate[]): string {
  if (pins.length < 2) {
    return "";
  }

  const heads = pins
    .map((pin) => {
      const stale = pin.stale
        ? ` <span class="stale-badge" title="Pinned from an earlier run">stale</span>`
        : "";
      return `<th data-key="${escapeHtml(pin.key)}">${escapeHtml(comboLabel(pin.candidate))}${stale}</th>`;
    })
    .join("");

  const rows: string[] = [];
  const value = (fn: (c: Candidate) => string): string[] =>
    pins.map((pin) => escapeHtml(fn(pin.candidate)));

  rows.push(comparisonRow("Total mass", value((c) => kg(c.copter_mass))));
  rows.push(comparisonRow("Airframe diameter", value((c) => millimeters(c.airframe.diameter))));
  rows.push(
    comparisonRow("Battery", value((c) => batteryLabel(c.battery.voltage, c.battery.capacity))),
  );
  rows.push(comparisonRow("Battery mass", value((c) => kg(c.battery.mass))));
  rows.push(comparisonRow("Hover time", value((c) => minutes(c.achieved_time))));
  rows.push(comparisonRow("Payload", value((c) => kg(c.achieved_payload))));
  rows.push(
    comparisonRow("Hover throttle ratio", value((c) => c.achieved_ratio.toFixed(3))),
  );
  rows.push(comparisonRow("Hover current", value((c) => amps(c.hover_current))));
  rows.push(
    comparisonRow(
      "Max vertical accel",
      value((c) => `${c.max_vertical_accel.toFixed(2)} m/s²`),
    ),
  );
  rows.push(comparisonRow("Objective J", value((c) => objective(c.objective))));

  for (let i = 0; i < INDEX_LABELS.length; i++) {
    const values = pins.map((pin) => pin.candidate.indexes[i] ?? 0);
    const max = Math.max(...values);
    const cells = values.map((v) => {
      const width = max > 0 ? (v / max) * 100 : 0;
      return (
        `<span class="bar" style="width:${width.toFixed(1)}%"></span>` +
        `<span class="bar-value">${indexValue(v)}</span>`
      );
    });
    rows.push(comparisonRow(INDEX_LABELS[i] ?? `X${i + 1}`, cells));
  }

  return `<table class="comparison">
<thead><tr><th></th>${heads}</tr></thead>
<tbody>
${rows.join("\n")}
</tbody>
</table>
<p class="comparison-note"><button type="button" class="unpin-all">Clear pins</button></p>`;
}

function renderFieldErrors(details: FieldErrorDetail[]): string {
  const items = details
    .map(
      (detail) =>
        `<li><code>${escapeHtml(detail.field)}</code> ${escapeHtml(detail.message)}</li>`,
    )
    .join("");
  return `<div class="error-panel invalid-request"><h3>Request rejected</h3><ul>${items}</ul></div>`;
}

function renderInfeasible(message: string, details: InfeasibleDetails): string {
  const reasons = Object.entries(details.reasons)
    .map(
      ([reason, count]) =>
        `<li><code>${escapeHtml(reason)}</code>: ${escapeHtml(count)}</li>`,
    )
    .join("");
  const nearest = details.nearest_miss
    ? `<p class="nearest-miss">Nearest miss: ${escapeHtml(details.nearest_miss)}</p>`
    : "";
  return (
    `<div class="error-panel infeasible"><h3>No feasible design</h3>` +
    `<p>${escapeHtml(message)}</p>` +
    `<ul class="reasons">${reasons}</ul>${nearest}</div>`
  );
}

/** Render a service error body according to its status and code. */
export function renderErrorBody(status: number, body: ErrorBody): string {
  const { code, message, details } = body.error;
  if (status === 422 && code === "no_feasible_design") {
    return renderInfeasible(message, details as InfeasibleDetails);
  }
  if (status === 400 && Array.isArray(details)) {
    return renderFieldErrors(details as FieldErrorDetail[]);
  }
  return (
    `<div class="error-panel"><h3>${escapeHtml(code)}</h3>` +
    `<p>${escapeHtml(message)}</p></div>`
  );
}

/** Local (pre-flight) validation failures, same visual shape as a 400. */
export function renderLocalErrors(errors: Record<string, string>): string {
  const details = Object.entries(errors).map(([field, message]) => ({ field, message }));
  return renderFieldErrors(details);
}

export function renderHistoryList(
  entries: readonly HistoryEntry[],
  currentId: number | null,
): string {
  if (entries.length === 0) {
    return `<p class="empty">No runs yet.</p>`;
  }
  // Newest first: the latest run is the one being scanned for.
  const items = [...entries]
    .reverse()
    .map((entry) => {
      const req = entry.request;
      const current = entry.id === currentId ? ` aria-current="true"` : "";
      const summary =
        `${req.hover_time} min · ${req.payload} kg · ` +
        `${req.rotor_count} rotors · ratio ${req.thrust_ratio}`;
      const top = entry.response.candidates[0];
      const outcome = top
        ? `${escapeHtml(comboLabel(top))}, J=${objective(top.objective)}`
        : "no candidates";
      return (
        `<li data-entry-id="${entry.id}"${current}>` +
        `<button type="button" class="history-select" data-entry-id="${entry.id}">` +
        `<span class="history-request">${escapeHtml(summary)}</span>` +
        `<span class="history-outcome">${outcome}</span>` +
        `</button></li>`
      );
    })
    .join("");
  return `<ol class="history">${items}</ol>`;
}
