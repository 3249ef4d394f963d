/**
 * Pure rendering: every function maps plain data to an HTML string with no
 * DOM access and no state, so output is directly assertable in node tests.
 *
 * Numbers coming from the service (probabilities, deltas) are rendered with
 * String(value) and also stamped into data-* attributes, so the digits on
 * screen are byte-identical to the digits in the service's JSON response.
 */

import { GRID, zoneInfo } from "./court.js";
import {
  EDITABLE_FIELDS,
  FIELD_ENUMS,
  type EditableField,
  type FieldMarkers,
  type RallyDraft,
  type WhatIfEntry,
} from "./state.js";
import type { Diagnostic, HealthResponse, LintResponse, WhatIfResponse } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

/** Input/display form of a field value; null shows as the empty string. */
function fieldText(value: unknown): string {
  if (value === null || value === undefined) return "";
  return String(value);
}

export function renderHealthBanner(health: HealthResponse | null, detail = ""): string {
  if (health === null) {
    const suffix = detail ? `: ${escapeHtml(detail)}` : "";
    return (
      `<div id="health" class="banner banner-down" role="alert">` +
      `service unreachable${suffix}</div>`
    );
  }
  const model = health.model_loaded ? "model loaded" : "no model";
  return (
    `<div id="health" class="banner banner-ok" data-layout-hash="${escapeHtml(health.layout_hash)}">` +
    `service ${escapeHtml(health.status)} &middot; ${model} &middot; ` +
    `${String(health.corpus_matches)} corpus match(es)</div>`
  );
}

export function renderApiError(code: string, message: string, line: number | null): string {
  const where = line === null ? "" : ` (line ${String(line)})`;
  return (
    `<div class="banner banner-error" data-code="${escapeHtml(code)}">` +
    `${escapeHtml(code)}${where}: ${escapeHtml(message)}</div>`
  );
}

export function renderDiagnosticItem(d: Diagnostic): string {
  const at: string[] = [];
  if (d.rally_no !== null) at.push(`rally ${String(d.rally_no)}`);
  if (d.round_no !== null) at.push(`round ${String(d.round_no)}`);
  const location = at.length ? ` <span class="diag-at">(${at.join(", ")})</span>` : "";
  return (
    `<li class="diag diag-${d.severity}" data-code="${escapeHtml(d.code)}">` +
    `<span class="diag-code">${escapeHtml(d.code)}</span> ` +
    `<span class="diag-message">${escapeHtml(d.message)}</span>${location}</li>`
  );
}

export function renderLintPanel(lint: LintResponse): string {
  if (lint.diagnostics.length === 0) {
    return `<div id="lint" class="lint lint-clean" data-errors="0">no findings</div>`;
  }
  const items = lint.diagnostics.map(renderDiagnosticItem).join("");
  return (
    `<div id="lint" class="lint" data-errors="${String(lint.error_count)}">` +
    `<p>${String(lint.error_count)} error(s), ` +
    `${String(lint.diagnostics.length - lint.error_count)} warning(s)</p>` +
    `<ul>${items}</ul></div>`
  );
}

/** Inline marker beside a field input carrying the lint finding(s). */
export function renderFieldMarker(diagnostics: readonly Diagnostic[]): string {
  if (diagnostics.length === 0) return "";
  const severity = diagnostics.some((d) => d.severity === "error") ? "error" : "warning";
  const codes = diagnostics.map((d) => d.code).join(" ");
  const titles = diagnostics.map((d) => d.message).join("; ");
  return (
    `<span class="marker marker-${severity}" data-codes="${escapeHtml(codes)}" ` +
    `title="${escapeHtml(titles)}">&#9888;</span>`
  );
}

function renderFieldInput(roundNo: number, field: EditableField, value: unknown): string {
  const id = `f-${roundNo}-${field}`;
  const tokens = FIELD_ENUMS[field];
  const current = fieldText(value);
  if (tokens) {
    const blank = `<option value=""${current === "" ? " selected" : ""}></option>`;
    const options = tokens
      .map(
        (t) =>
          `<option value="${escapeHtml(t)}"${t === current ? " selected" : ""}>${escapeHtml(t)}</option>`,
      )
      .join("");
    return `<select id="${id}" data-field="${field}" data-round="${String(roundNo)}">${blank}${options}</select>`;
  }
  if (field === "block_touch") {
    const options = ["true", "false"]
      .map((t) => `<option value="${t}"${t === current ? " selected" : ""}>${t}</option>`)
      .join("");
    return `<select id="${id}" data-field="${field}" data-round="${String(roundNo)}">${options}</select>`;
  }
  return (
    `<input id="${id}" data-field="${field}" data-round="${String(roundNo)}" ` +
    `value="${escapeHtml(current)}">`
  );
}

export function renderRallyEditor(draft: RallyDraft, markers: FieldMarkers): string {
  const rounds = draft.rally.rounds
    .map((round) => {
      const rows = EDITABLE_FIELDS.map((field) => {
        const key = `${round.round_no}.${field}`;
        const marker = renderFieldMarker(markers.fields[key] ?? []);
        const localError = draft.errors[key];
        const errorSpan = localError
          ? `<span class="field-error">${escapeHtml(localError)}</span>`
          : "";
        return (
          `<div class="field-row" data-key="${key}">` +
          `<label for="f-${round.round_no}-${field}">${field}</label>` +
          renderFieldInput(round.round_no, field, round[field]) +
          marker +
          errorSpan +
          `</div>`
        );
      }).join("");
      return (
        `<fieldset class="round" data-round="${String(round.round_no)}">` +
        `<legend>round ${String(round.round_no)} &middot; team ${escapeHtml(round.team)}</legend>` +
        rows +
        `</fieldset>`
      );
    })
    .join("");
  return (
    `<form id="rally-editor" data-rally="${String(draft.rallyNo)}" ` +
    `data-dirty="${draft.dirty ? "true" : "false"}">` +
    `<h2>rally ${String(draft.rallyNo)}</h2>` +
    rounds +
    `</form>`
  );
}

export function renderSubmitButton(enabled: boolean): string {
  return `<button id="submit-rally" type="button"${enabled ? "" : " disabled"}>apply edits</button>`;
}

/**
 * The 26-zone court grid.  The net sits above the first row; out-of-bounds
 * cells (16, 22-26) and service zones (17-21) are styled distinctly so a
 * coach can't mistake them for in-play targets.
 */
export function renderZonePicker(selected: number | null): string {
  const rows = GRID.map((row) => {
    const cells = row
      .map((zone) => {
        if (zone === null) return `<td class="zone-gap"></td>`;
        const info = zoneInfo(zone);
        const classes = ["zone"];
        if (!info.inBounds) classes.push("zone-oob");
        if (info.frontRow) classes.push("zone-front");
        if (info.inSystem) classes.push("zone-insystem");
        if (info.service) classes.push("zone-service");
        if (zone === selected) classes.push("zone-selected");
        return (
          `<td><button type="button" class="${classes.join(" ")}" ` +
          `data-zone="${String(zone)}">${String(zone)}</button></td>`
        );
      })
      .join("");
    return `<tr>${cells}</tr>`;
  }).join("");
  return (
    `<table id="zone-picker"><caption>net</caption>` +
    `<tbody>${rows}</tbody></table>`
  );
}

/**
 * One horizontal bar per probability.  Throws RangeError on anything outside
 * [0, 1] rather than rendering a misleading bar.
 */
export function renderProbBars(probs: readonly number[], kind = "probs"): string {
  const bars = probs
    .map((p, i) => {
      if (!Number.isFinite(p) || p < 0 || p > 1) {
        throw new RangeError(`probability ${String(p)} at index ${i} is not in [0, 1]`);
      }
      const width = (p * 100).toFixed(1);
      return (
        `<div class="prob-bar" data-round="${String(i + 1)}" data-prob="${String(p)}">` +
        `<span class="prob-fill" style="width: ${width}%"></span>` +
        `<span class="prob-value">${String(p)}</span></div>`
      );
    })
    .join("");
  return `<div class="prob-bars" data-kind="${escapeHtml(kind)}" data-count="${String(probs.length)}">${bars}</div>`;
}

/**
 * Signed delta badge.  Positive deltas get an explicit "+"; a zero delta
 * (identity perturbation) renders exactly "0".
 */
export function renderDeltaBadge(delta: number): string {
  if (!Number.isFinite(delta)) {
    throw new RangeError(`delta ${String(delta)} is not finite`);
  }
  const cls = delta > 0 ? "delta-positive" : delta < 0 ? "delta-negative" : "delta-zero";
  const text = delta > 0 ? `+${String(delta)}` : String(delta);
  return `<span class="delta-badge ${cls}" data-delta="${String(delta)}">${text}</span>`;
}

/**
 * Before/after probability tracks plus the delta badge.  `roundCount` is the
 * number of rounds in the rally the what-if was run against; both tracks
 * must have exactly one bar per round.
 */
export function renderWhatIfPanel(result: WhatIfResponse, roundCount: number): string {
  if (result.probs_before.length !== roundCount || result.probs_after.length !== roundCount) {
    throw new RangeError(
      `what-if probabilities (${result.probs_before.length} before, ` +
        `${result.probs_after.length} after) do not match ${roundCount} rounds`,
    );
  }
  const oldText = fieldText(result.old_value) || "&empty;";
  const newText = fieldText(result.new_value) || "&empty;";
  return (
    `<div id="whatif-result" data-field="${escapeHtml(result.changed_field)}">` +
    `<p class="whatif-change">${escapeHtml(result.changed_field)}: ` +
    `<code>${escapeHtml(oldText)}</code> &rarr; <code>${escapeHtml(newText)}</code> ` +
    renderDeltaBadge(result.delta) +
    `</p>` +
    `<h3>before <span class="p-final" data-p="${String(result.p_before)}">${String(result.p_before)}</span></h3>` +
    renderProbBars(result.probs_before, "before") +
    `<h3>after <span class="p-final" data-p="${String(result.p_after)}">${String(result.p_after)}</span></h3>` +
    renderProbBars(result.probs_after, "after") +
    `</div>`
  );
}

export function renderWhatIfHistory(entries: readonly WhatIfEntry[]): string {
  if (entries.length === 0) {
    return `<ol id="whatif-history" data-count="0"></ol>`;
  }
  const items = entries
    .map(
      (e) =>
        `<li><code>${escapeHtml(e.field)}=${escapeHtml(fieldText(e.value))}</code> ` +
        renderDeltaBadge(e.delta) +
        `</li>`,
    )
    .join("");
  return `<ol id="whatif-history" data-count="${String(entries.length)}">${items}</ol>`;
}
