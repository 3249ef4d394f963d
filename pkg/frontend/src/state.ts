/**
 * Pure client-side state: rally drafts with per-field validation, the
 * diagnostic-to-field marker mapping, what-if history, and session
 * persistence.  Nothing in this module touches the DOM or the network, so
 * every transition is unit-testable as a plain function.
 */

import type {
  Diagnostic,
  LintResponse,
  MatchDoc,
  RallyDoc,
  RoundDoc,
  WhatIfResponse,
} from "./types.js";

/** Round fields a coach may edit (everything but the round number). */
export const EDITABLE_FIELDS = [
  "team",
  "serve_type",
  "serve_from",
  "recv_move_from",
  "recv_at",
  "pass_rating",
  "pass_to",
  "set_location",
  "set_sub",
  "set_from",
  "hit_type",
  "hit_from",
  "num_blockers",
  "block_touch",
  "target",
] as const;

export type EditableField = (typeof EDITABLE_FIELDS)[number];

/** Closed token lists, sorted the way the service reports them. */
export const FIELD_ENUMS: Readonly<Partial<Record<EditableField, readonly string[]>>> = {
  team: ["A", "B"],
  serve_type: ["float", "hybrid", "jump"],
  pass_rating: ["in_system", "out_of_system", "overpass"],
  set_location: [
    "bic",
    "blocked",
    "d_ball",
    "dump",
    "none",
    "oppo",
    "outside",
    "overpass",
    "quick",
  ],
  set_sub: ["thirty_one"],
  hit_type: [
    "blocked",
    "dump",
    "free_ball",
    "hit",
    "none",
    "off_speed",
    "overpass",
    "roll_shot",
    "tip",
  ],
};

export const ZONE_FIELDS: readonly EditableField[] = [
  "serve_from",
  "recv_move_from",
  "recv_at",
  "pass_to",
  "set_from",
  "hit_from",
  "target",
];

const NON_NULLABLE = new Set<EditableField>([
  "team",
  "set_location",
  "hit_type",
  "num_blockers",
  "block_touch",
]);

/**
 * Which round field each diagnostic code points at, so lint results can be
 * drawn as markers next to the offending input.  Codes mapped to null are
 * rally- or match-level and render in the general lint list only.
 */
export const CODE_FIELDS: Readonly<Record<string, EditableField | null>> = {
  E_EMPTY_RALLY: null,
  E_ROUND_GAP: null,
  E_RALLY_GAP: null,
  E_TEAM_ALTERNATION: "team",
  W_TEAM_ALTERNATION: "team",
  E_SERVE_NOT_ROUND1: "serve_type",
  W_SERVE_MISSING: "serve_type",
  E_OVERPASS_PROPAGATION: "pass_rating",
  W_PASS_RATING_MISMATCH: "pass_to",
  E_BLOCK_TOUCH_NO_BLOCKERS: "block_touch",
};

export interface FieldMarkers {
  /** Keyed `${round_no}.${field}`. */
  fields: Record<string, Diagnostic[]>;
  /** Diagnostics with no round or no mapped field. */
  general: Diagnostic[];
}

export function markersByField(diagnostics: readonly Diagnostic[]): FieldMarkers {
  const fields: Record<string, Diagnostic[]> = {};
  const general: Diagnostic[] = [];
  for (const d of diagnostics) {
    const field = CODE_FIELDS[d.code] ?? null;
    if (d.round_no === null || field === null) {
      general.push(d);
      continue;
    }
    const key = `${d.round_no}.${field}`;
    (fields[key] ??= []).push(d);
  }
  return { fields, general };
}

/** Turn raw input text into the JSON value the service expects for `field`. */
export function coerceInput(field: EditableField, raw: string): unknown {
  const text = raw.trim();
  if (text === "") return null;
  if (field === "block_touch") {
    if (text === "true") return true;
    if (text === "false") return false;
    return text;
  }
  if (field === "num_blockers" || ZONE_FIELDS.includes(field)) {
    if (/^-?\d+$/.test(text)) return parseInt(text, 10);
    return text;
  }
  return text;
}

/** Validate one field value; returns an error message or null when valid. */
export function validateField(field: EditableField, value: unknown): string | null {
  if (value === null) {
    return NON_NULLABLE.has(field) ? `${field} cannot be cleared` : null;
  }
  const tokens = FIELD_ENUMS[field];
  if (tokens) {
    if (typeof value === "string" && tokens.includes(value)) return null;
    return `${field}='${String(value)}' is not one of [${tokens.map((t) => `'${t}'`).join(", ")}]`;
  }
  if (field === "block_touch") {
    return typeof value === "boolean" ? null : "block_touch must be true or false";
  }
  if (field === "num_blockers") {
    if (typeof value === "number" && Number.isInteger(value) && value >= 0 && value <= 3) {
      return null;
    }
    return `num_blockers must be 0..3, got '${String(value)}'`;
  }
  // remaining editable fields are zones
  if (typeof value === "number" && Number.isInteger(value) && value >= 1 && value <= 26) {
    return null;
  }
  return `${field} must be a zone number 1..26, got '${String(value)}'`;
}

export interface RallyDraft {
  base: MatchDoc;
  rallyNo: number;
  rally: RallyDoc;
  dirty: boolean;
  /** Local field validation errors, keyed `${round_no}.${field}`. */
  errors: Record<string, string>;
}

function deepCopy<T>(value: T): T {
  return JSON.parse(JSON.stringify(value)) as T;
}

export function createDraft(match: MatchDoc, rallyNo: number): RallyDraft {
  const rally = match.rallies.find((r) => r.rally_no === rallyNo);
  if (!rally) {
    throw new RangeError(`match ${match.match_id} has no rally ${rallyNo}`);
  }
  return {
    base: match,
    rallyNo,
    rally: deepCopy(rally),
    dirty: false,
    errors: {},
  };
}

/**
 * Apply one edit and return the new draft.  Invalid input is still stored
 * (the editor shows what was typed) but recorded in `errors`, which keeps
 * canSubmit() false until fixed.
 */
export function applyEdit(
  draft: RallyDraft,
  roundNo: number,
  field: EditableField,
  raw: string,
): RallyDraft {
  const index = draft.rally.rounds.findIndex((r) => r.round_no === roundNo);
  if (index === -1) {
    throw new RangeError(`rally ${draft.rallyNo} has no round ${roundNo}`);
  }
  const value = coerceInput(field, raw);
  const error = validateField(field, value);
  const rounds = draft.rally.rounds.map((r, i) =>
    i === index ? ({ ...r, [field]: value } as RoundDoc) : r,
  );
  const errors = { ...draft.errors };
  const key = `${roundNo}.${field}`;
  if (error === null) {
    delete errors[key];
  } else {
    errors[key] = error;
  }
  return {
    ...draft,
    rally: { ...draft.rally, rounds },
    dirty: true,
    errors,
  };
}

/** The match document with the drafted rally substituted in. */
export function draftMatch(draft: RallyDraft): MatchDoc {
  return {
    ...draft.base,
    rallies: draft.base.rallies.map((r) =>
      r.rally_no === draft.rallyNo ? draft.rally : r,
    ),
  };
}

/**
 * A draft may be submitted only when every field parses locally AND the
 * latest lint of the drafted match reported zero error-severity diagnostics.
 * No lint result yet means no submission.
 */
export function canSubmit(draft: RallyDraft, lint: LintResponse | null): boolean {
  if (Object.keys(draft.errors).length > 0) return false;
  if (lint === null) return false;
  return lint.error_count === 0 && !lint.diagnostics.some((d) => d.severity === "error");
}

export interface WhatIfEntry {
  field: string;
  value: unknown;
  p_before: number;
  p_after: number;
  delta: number;
}

export interface WhatIfPanelState {
  last: WhatIfResponse | null;
  history: WhatIfEntry[];
}

export const EMPTY_WHAT_IF: WhatIfPanelState = { last: null, history: [] };

export function applyWhatIfResult(
  state: WhatIfPanelState,
  result: WhatIfResponse,
): WhatIfPanelState {
  const entry: WhatIfEntry = {
    field: result.changed_field,
    value: result.new_value,
    p_before: result.p_before,
    p_after: result.p_after,
    delta: result.delta,
  };
  return { last: result, history: [...state.history, entry] };
}

export interface SessionSnapshot {
  draft: RallyDraft;
  whatIf: WhatIfPanelState;
}

export function serializeSession(snapshot: SessionSnapshot): string {
  return JSON.stringify(snapshot);
}

export function restoreSession(serialized: string): SessionSnapshot {
  const parsed = JSON.parse(serialized) as SessionSnapshot;
  if (
    typeof parsed !== "object" ||
    parsed === null ||
    typeof parsed.draft !== "object" ||
    parsed.draft === null ||
    !Array.isArray(parsed.draft.rally?.rounds) ||
    typeof parsed.whatIf !== "object" ||
    parsed.whatIf === null
  ) {
    throw new TypeError("not a session snapshot");
  }
  return parsed;
}
