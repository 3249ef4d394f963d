/** JSON contracts of the vren HTTP service, mirrored field for field. */

export type TeamId = "A" | "B";

export interface RoundDoc {
  round_no: number;
  team: TeamId;
  serve_type: string | null;
  serve_from: number | null;
  recv_move_from: number | null;
  recv_at: number | null;
  pass_rating: string | null;
  pass_to: number | null;
  set_location: string;
  set_sub: string | null;
  set_from: number | null;
  hit_type: string;
  hit_from: number | null;
  num_blockers: number;
  block_touch: boolean;
  target: number | null;
}

export interface RallyDoc {
  rally_no: number;
  winner: TeamId;
  winning_reason: string;
  losing_reason: string;
  rounds: RoundDoc[];
}

export interface MatchDoc {
  match_id: string;
  team_a: string;
  team_b: string;
  level: string;
  rallies: RallyDoc[];
}

export interface Diagnostic {
  code: string;
  severity: "error" | "warning";
  message: string;
  rally_no: number | null;
  round_no: number | null;
  line: number | null;
  match_id?: string;
}

export interface HealthResponse {
  status: string;
  layout_hash: string;
  model_loaded: boolean;
  corpus_matches: number;
}

export interface ParseResponse {
  matches: MatchDoc[];
}

export interface LintResponse {
  diagnostics: Diagnostic[];
  error_count: number;
}

export interface FormatResponse {
  text: string;
}

export interface RallyPrediction {
  rally_no: number;
  probs: number[];
}

export interface PredictResponse {
  match_id: string;
  rallies: RallyPrediction[];
}

export interface WhatIfRequest {
  match: MatchDoc;
  rally_no: number;
  round_index: number;
  field: string;
  value: unknown;
}

export interface WhatIfResponse {
  changed_field: string;
  old_value: unknown;
  new_value: unknown;
  p_before: number;
  p_after: number;
  delta: number;
  probs_before: number[];
  probs_after: number[];
}

export interface ErrorEnvelope {
  code: string;
  message: string;
  line: number | null;
}
