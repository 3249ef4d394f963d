/**
 * DOM wiring: the only module that touches the document or the real network.
 * Everything it draws comes from the pure render functions and everything it
 * stores goes through the pure state transitions, so this file is glue.
 */

import { ApiError, ServiceUnreachableError, VrenClient, isAbort } from "./api.js";
import {
  renderApiError,
  renderHealthBanner,
  renderLintPanel,
  renderProbBars,
  renderRallyEditor,
  renderSubmitButton,
  renderWhatIfHistory,
  renderWhatIfPanel,
  renderZonePicker,
} from "./render.js";
import {
  EDITABLE_FIELDS,
  EMPTY_WHAT_IF,
  ZONE_FIELDS,
  type EditableField,
  type RallyDraft,
  type WhatIfPanelState,
  applyEdit,
  applyWhatIfResult,
  canSubmit,
  coerceInput,
  createDraft,
  draftMatch,
  markersByField,
  restoreSession,
  serializeSession,
} from "./state.js";
import type { LintResponse, MatchDoc } from "./types.js";

const SESSION_KEY = "vren-coach-session";

function must<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

const el = {
  banner: must<HTMLDivElement>("banner"),
  source: must<HTMLTextAreaElement>("source"),
  load: must<HTMLButtonElement>("load"),
  rallySelect: must<HTMLSelectElement>("rally-select"),
  editor: must<HTMLDivElement>("editor"),
  submitArea: must<HTMLDivElement>("submit-area"),
  lintPanel: must<HTMLDivElement>("lint-panel"),
  zoneArea: must<HTMLDivElement>("zone-area"),
  zoneRound: must<HTMLInputElement>("zone-round"),
  zoneField: must<HTMLSelectElement>("zone-field"),
  predict: must<HTMLButtonElement>("predict"),
  predictOut: must<HTMLDivElement>("predict-out"),
  wiRound: must<HTMLInputElement>("wi-round"),
  wiField: must<HTMLSelectElement>("wi-field"),
  wiValue: must<HTMLInputElement>("wi-value"),
  wiRun: must<HTMLButtonElement>("wi-run"),
  whatifOut: must<HTMLDivElement>("whatif-out"),
  history: must<HTMLDivElement>("history"),
  errorArea: must<HTMLDivElement>("error-area"),
};

const client = new VrenClient(window.location.origin);

let match: MatchDoc | null = null;
let draft: RallyDraft | null = null;
let lint: LintResponse | null = null;
let whatIf: WhatIfPanelState = EMPTY_WHAT_IF;
let selectedZone: number | null = null;

function showError(err: unknown): void {
  if (isAbort(err)) return;
  if (err instanceof ApiError) {
    el.errorArea.innerHTML = renderApiError(err.code, err.message, err.line);
  } else if (err instanceof ServiceUnreachableError) {
    el.banner.innerHTML = renderHealthBanner(null, err.message);
  } else {
    el.errorArea.innerHTML = renderApiError("E_CLIENT", String(err), null);
  }
}

function persist(): void {
  if (!draft) return;
  try {
    window.sessionStorage.setItem(SESSION_KEY, serializeSession({ draft, whatIf }));
  } catch {
    // storage full or unavailable: the draft simply won't survive a reload
  }
}

function redraw(): void {
  if (!draft) return;
  const markers = markersByField(lint?.diagnostics ?? []);
  el.editor.innerHTML = renderRallyEditor(draft, markers);
  el.submitArea.innerHTML = renderSubmitButton(canSubmit(draft, lint));
  el.lintPanel.innerHTML = lint
    ? renderLintPanel(lint)
    : `<div id="lint" class="lint lint-pending">lint pending</div>`;
  el.zoneArea.innerHTML = renderZonePicker(selectedZone);
  el.history.innerHTML = renderWhatIfHistory(whatIf.history);
  persist();
}

async function relint(): Promise<void> {
  if (!draft) return;
  try {
    lint = await client.lint(draftMatch(draft), client.latestSignal("lint"));
    el.errorArea.innerHTML = "";
  } catch (err) {
    if (isAbort(err)) return;
    lint = null;
    showError(err);
  }
  redraw();
}

function selectRally(rallyNo: number): void {
  if (!match) return;
  draft = createDraft(match, rallyNo);
  lint = null;
  whatIf = EMPTY_WHAT_IF;
  redraw();
  void relint();
}

function loadMatch(loaded: MatchDoc): void {
  match = loaded;
  el.rallySelect.innerHTML = loaded.rallies
    .map((r) => `<option value="${String(r.rally_no)}">rally ${String(r.rally_no)}</option>`)
    .join("");
  const first = loaded.rallies[0];
  if (first) selectRally(first.rally_no);
}

async function loadFromSource(): Promise<void> {
  try {
    const parsed = await client.parse(el.source.value, client.latestSignal("parse"));
    const doc = parsed.matches[0];
    if (!doc) throw new Error("no matches in input");
    loadMatch(doc);
  } catch (err) {
    showError(err);
  }
}

function editFromEvent(target: EventTarget | null): void {
  if (!draft) return;
  if (!(target instanceof HTMLInputElement) && !(target instanceof HTMLSelectElement)) return;
  const field = target.dataset["field"] as EditableField | undefined;
  const round = target.dataset["round"];
  if (!field || round === undefined) return;
  draft = applyEdit(draft, parseInt(round, 10), field, target.value);
  redraw();
  void relint();
}

async function runPredict(): Promise<void> {
  if (!draft) return;
  try {
    const res = await client.predictRally(
      draftMatch(draft),
      draft.rallyNo,
      client.latestSignal("predict"),
    );
    const rally = res.rallies.find((r) => r.rally_no === draft?.rallyNo) ?? res.rallies[0];
    el.predictOut.innerHTML = rally ? renderProbBars(rally.probs, "predict") : "";
  } catch (err) {
    showError(err);
  }
}

async function runWhatIf(): Promise<void> {
  if (!draft) return;
  const field = el.wiField.value as EditableField;
  try {
    const result = await client.whatIf(
      {
        match: draftMatch(draft),
        rally_no: draft.rallyNo,
        round_index: parseInt(el.wiRound.value, 10),
        field,
        value: coerceInput(field, el.wiValue.value),
      },
      client.latestSignal("whatif"),
    );
    whatIf = applyWhatIfResult(whatIf, result);
    el.whatifOut.innerHTML = renderWhatIfPanel(result, draft.rally.rounds.length);
    el.errorArea.innerHTML = "";
    redraw();
  } catch (err) {
    showError(err);
  }
}

function applyZone(zone: number): void {
  if (!draft) return;
  selectedZone = zone;
  const field = el.zoneField.value as EditableField;
  draft = applyEdit(draft, parseInt(el.zoneRound.value, 10), field, String(zone));
  redraw();
  void relint();
}

function fillFieldSelect(select: HTMLSelectElement, fields: readonly string[]): void {
  select.innerHTML = fields
    .map((f) => `<option value="${f}">${f}</option>`)
    .join("");
}

async function init(): Promise<void> {
  fillFieldSelect(el.wiField, EDITABLE_FIELDS);
  fillFieldSelect(el.zoneField, ZONE_FIELDS);

  el.load.addEventListener("click", () => void loadFromSource());
  el.rallySelect.addEventListener("change", () => selectRally(parseInt(el.rallySelect.value, 10)));
  el.editor.addEventListener("change", (e) => editFromEvent(e.target));
  el.predict.addEventListener("click", () => void runPredict());
  el.wiRun.addEventListener("click", () => void runWhatIf());
  el.zoneArea.addEventListener("click", (e) => {
    const target = e.target;
    if (target instanceof HTMLButtonElement && target.dataset["zone"]) {
      applyZone(parseInt(target.dataset["zone"], 10));
    }
  });

  const saved = window.sessionStorage.getItem(SESSION_KEY);
  if (saved) {
    try {
      const snapshot = restoreSession(saved);
      draft = snapshot.draft;
      whatIf = snapshot.whatIf;
      match = snapshot.draft.base;
      redraw();
      void relint();
    } catch {
      window.sessionStorage.removeItem(SESSION_KEY);
    }
  }

  try {
    const health = await client.health();
    el.banner.innerHTML = renderHealthBanner(health);
  } catch (err) {
    showError(err);
  }
}

void init();
