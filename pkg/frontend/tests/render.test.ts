import { describe, expect, it } from "vitest";

import {
  escapeHtml,
  renderApiError,
  renderDeltaBadge,
  renderDiagnosticItem,
  renderFieldMarker,
  renderHealthBanner,
  renderLintPanel,
  renderProbBars,
  renderRallyEditor,
  renderSubmitButton,
  renderWhatIfHistory,
  renderWhatIfPanel,
  renderZonePicker,
} from "../src/render.js";
import { applyEdit, createDraft, markersByField } from "../src/state.js";
import type {
  ErrorEnvelope,
  HealthResponse,
  LintResponse,
  MatchDoc,
  ParseResponse,
  PredictResponse,
  RallyDoc,
  WhatIfResponse,
} from "../src/types.js";
import { fixtureJson, fixtureText } from "./helpers.js";

const golden = fixtureJson<ParseResponse>("parse_golden.json").matches[0] as MatchDoc;
const rally8 = golden.rallies.find((r) => r.rally_no === 8) as RallyDoc;

describe("escapeHtml", () => {
  it("escapes markup-significant characters", () => {
    expect(escapeHtml(`<b a="1" b='2'>&`)).toBe("&lt;b a=&quot;1&quot; b=&#39;2&#39;&gt;&amp;");
  });

  it("passes digits through untouched", () => {
    expect(escapeHtml("0.010044004511253979")).toBe("0.010044004511253979");
  });
});

describe("probability bars are byte-traceable to the recorded responses", () => {
  it("renders every probability digit-for-digit as the service sent it", () => {
    const raw = fixtureText("predict_rally8.json");
    const predict = fixtureJson<PredictResponse>("predict_rally8.json");
    const probs = predict.rallies[0]?.probs ?? [];
    const html = renderProbBars(probs);
    for (const p of probs) {
      expect(html).toContain(`data-prob="${String(p)}"`);
      expect(html).toContain(`<span class="prob-value">${String(p)}</span>`);
      expect(raw).toContain(String(p));
    }
  });

  it("draws one bar per rally round", () => {
    const predict = fixtureJson<PredictResponse>("predict_rally8.json");
    const probs = predict.rallies[0]?.probs ?? [];
    expect(probs).toHaveLength(rally8.rounds.length);
    const html = renderProbBars(probs);
    expect(html).toContain(`data-count="${String(rally8.rounds.length)}"`);
    expect(html.match(/class="prob-bar"/g)).toHaveLength(rally8.rounds.length);
  });

  it("refuses probabilities outside [0, 1]", () => {
    expect(() => renderProbBars([1.2])).toThrow(RangeError);
    expect(() => renderProbBars([-0.1])).toThrow(RangeError);
    expect(() => renderProbBars([Number.NaN])).toThrow(RangeError);
    expect(renderProbBars([0, 1])).toContain(`data-prob="1"`);
  });
});

describe("delta badge", () => {
  it("signs positive deltas and classes them", () => {
    const html = renderDeltaBadge(0.010044004511253979);
    expect(html).toContain("delta-positive");
    expect(html).toContain(">+0.010044004511253979<");
    expect(html).toContain(`data-delta="0.010044004511253979"`);
  });

  it("classes negative deltas", () => {
    const html = renderDeltaBadge(-0.25);
    expect(html).toContain("delta-negative");
    expect(html).toContain(">-0.25<");
  });

  it("renders an identity delta as exactly 0", () => {
    const html = renderDeltaBadge(0);
    expect(html).toContain("delta-zero");
    expect(html).toContain(`data-delta="0"`);
    expect(html).toContain(">0<");
  });

  it("rejects non-finite deltas", () => {
    expect(() => renderDeltaBadge(Number.POSITIVE_INFINITY)).toThrow(RangeError);
  });
});

describe("what-if panel", () => {
  const raw = fixtureText("whatif_dball_quick.json");
  const result = fixtureJson<WhatIfResponse>("whatif_dball_quick.json");

  it("shows the recorded delta digit-for-digit", () => {
    const html = renderWhatIfPanel(result, rally8.rounds.length);
    expect(html).toContain("+0.010044004511253979");
    expect(raw).toContain("0.010044004511253979");
  });

  it("shows before/after probabilities digit-for-digit", () => {
    const html = renderWhatIfPanel(result, rally8.rounds.length);
    for (const p of [...result.probs_before, ...result.probs_after]) {
      expect(html).toContain(`data-prob="${String(p)}"`);
      expect(raw).toContain(String(p));
    }
    expect(html).toContain(`data-p="0.6323865568042863"`);
    expect(html).toContain(`data-p="0.6424305613155403"`);
    expect(html).toContain("set_location");
    expect(html).toContain("<code>d_ball</code>");
    expect(html).toContain("<code>quick</code>");
  });

  it("renders the identity perturbation with a delta of 0", () => {
    const identity = fixtureJson<WhatIfResponse>("whatif_identity.json");
    expect(identity.delta).toBe(0);
    const html = renderWhatIfPanel(identity, rally8.rounds.length);
    expect(html).toContain("delta-zero");
    expect(html).toContain(`data-delta="0"`);
    expect(html).toContain(">0<");
  });

  it("requires one bar per round on both tracks", () => {
    expect(() => renderWhatIfPanel(result, rally8.rounds.length + 1)).toThrow(RangeError);
    expect(() => renderWhatIfPanel(result, 0)).toThrow(RangeError);
  });
});

describe("what-if history", () => {
  it("lists entries with their deltas", () => {
    const html = renderWhatIfHistory([
      { field: "set_location", value: "quick", p_before: 0.5, p_after: 0.6, delta: 0.1 },
      { field: "pass_to", value: 7, p_before: 0.6, p_after: 0.6, delta: 0 },
    ]);
    expect(html).toContain(`data-count="2"`);
    expect(html).toContain("set_location=quick");
    expect(html).toContain("pass_to=7");
    expect(html).toContain("delta-positive");
    expect(html).toContain("delta-zero");
  });

  it("renders an empty list for no history", () => {
    expect(renderWhatIfHistory([])).toBe(`<ol id="whatif-history" data-count="0"></ol>`);
  });
});

describe("lint rendering", () => {
  it("shows the recorded warning byte-for-byte with its code", () => {
    const raw = fixtureText("lint_pass_mismatch.json");
    const lint = fixtureJson<LintResponse>("lint_pass_mismatch.json");
    const html = renderLintPanel(lint);
    const message = lint.diagnostics[0]?.message ?? "";
    expect(message).toBe("pass to zone 12 rates as in_system, not out_of_system");
    expect(html).toContain(message);
    expect(raw).toContain(message);
    expect(html).toContain(`data-code="W_PASS_RATING_MISMATCH"`);
    expect(html).toContain("diag-warning");
    expect(html).toContain(`data-errors="0"`);
  });

  it("counts errors from the recorded alternation failure", () => {
    const lint = fixtureJson<LintResponse>("lint_alternation_error.json");
    const html = renderLintPanel(lint);
    expect(html).toContain(`data-errors="1"`);
    expect(html).toContain("diag-error");
    expect(html).toContain("round 2 repeats team A");
    expect(html).toContain("1 error(s), 0 warning(s)");
  });

  it("renders a clean state for zero diagnostics", () => {
    const html = renderLintPanel(fixtureJson<LintResponse>("lint_clean.json"));
    expect(html).toContain("lint-clean");
    expect(html).toContain("no findings");
  });

  it("locates diagnostics by rally and round", () => {
    const lint = fixtureJson<LintResponse>("lint_pass_mismatch.json");
    const item = renderDiagnosticItem(lint.diagnostics[0]!);
    expect(item).toContain("(rally 1, round 1)");
  });
});

describe("field markers", () => {
  it("renders nothing for an empty list", () => {
    expect(renderFieldMarker([])).toBe("");
  });

  it("carries codes and messages, with error severity dominating", () => {
    const warning = fixtureJson<LintResponse>("lint_pass_mismatch.json").diagnostics[0]!;
    const error = fixtureJson<LintResponse>("lint_alternation_error.json").diagnostics[0]!;
    expect(renderFieldMarker([warning])).toContain("marker-warning");
    const both = renderFieldMarker([warning, error]);
    expect(both).toContain("marker-error");
    expect(both).toContain("W_PASS_RATING_MISMATCH E_TEAM_ALTERNATION");
  });
});

describe("rally editor", () => {
  it("renders one fieldset per round with the document values", () => {
    const draft = createDraft(golden, 8);
    const html = renderRallyEditor(draft, markersByField([]));
    expect(html).toContain(`data-rally="8"`);
    expect(html).toContain(`data-dirty="false"`);
    expect(html.match(/<fieldset class="round"/g)).toHaveLength(rally8.rounds.length);
    const first = rally8.rounds[0]!;
    expect(html).toContain(`<fieldset class="round" data-round="${String(first.round_no)}">`);
    expect(html).toContain(`value="${String(first.target)}"`);
    expect(html).toContain(
      `<option value="${first.set_location}" selected>${first.set_location}</option>`,
    );
  });

  it("marks edited drafts dirty and shows local errors inline", () => {
    let draft = createDraft(golden, 8);
    draft = applyEdit(draft, 1, "pass_to", "99");
    const html = renderRallyEditor(draft, markersByField([]));
    expect(html).toContain(`data-dirty="true"`);
    expect(html).toContain("field-error");
    expect(html).toContain("pass_to must be a zone number 1..26");
  });

  it("attaches lint markers to the mapped field of the right round", () => {
    const lint = fixtureJson<LintResponse>("lint_pass_mismatch.json");
    const draft = createDraft(golden, 1);
    const html = renderRallyEditor(draft, markersByField(lint.diagnostics));
    const row = html
      .split(`data-key="1.pass_to"`)[1]
      ?.split("</div>")
      .slice(0, 2)
      .join("</div>");
    expect(row).toBeDefined();
    expect(row).toContain("marker-warning");
    expect(row).toContain(`data-codes="W_PASS_RATING_MISMATCH"`);
    const otherRow = html.split(`data-key="1.hit_type"`)[1]?.split("</div>")[0];
    expect(otherRow).not.toContain("marker-");
  });

  it("disables submission via the submit button flag", () => {
    expect(renderSubmitButton(false)).toContain(" disabled");
    expect(renderSubmitButton(true)).not.toContain(" disabled");
  });
});

describe("zone picker", () => {
  const html = renderZonePicker(13);

  it("renders all 26 zones as buttons", () => {
    for (let z = 1; z <= 26; z += 1) {
      expect(html).toContain(`data-zone="${String(z)}"`);
    }
    expect(html.match(/class="zone[ "]/g)).toHaveLength(26);
  });

  it("styles out-of-bounds, service, and in-system zones distinctly", () => {
    expect(html).toMatch(/class="zone zone-oob zone-front"[^>]*data-zone="16"/);
    expect(html).toMatch(/class="zone zone-oob zone-service"[^>]*data-zone="19"/);
    expect(html).toMatch(/class="zone zone-front zone-insystem"[^>]*data-zone="12"/);
    expect(html).toMatch(/class="zone"[^>]*data-zone="3"/);
  });

  it("highlights the selected zone", () => {
    expect(html).toMatch(/zone-selected[^>]*data-zone="13"/);
    expect(renderZonePicker(null)).not.toContain("zone-selected");
  });

  it("keeps the corners beside the service row empty", () => {
    expect(html.match(/<td class="zone-gap"><\/td>/g)).toHaveLength(2);
  });

  it("labels the net edge", () => {
    expect(html).toContain("<caption>net</caption>");
  });
});

describe("banners", () => {
  it("renders the recorded health payload", () => {
    const health = fixtureJson<HealthResponse>("health.json");
    const html = renderHealthBanner(health);
    expect(html).toContain("banner-ok");
    expect(html).toContain(`data-layout-hash="081f5065c1f4daed"`);
    expect(html).toContain("model loaded");
    expect(html).toContain("1 corpus match(es)");
  });

  it("renders an unreachable-service banner when health is null", () => {
    const html = renderHealthBanner(null, "connect ECONNREFUSED");
    expect(html).toContain("banner-down");
    expect(html).toContain("service unreachable: connect ECONNREFUSED");
    expect(html).toContain(`role="alert"`);
  });

  it("renders recorded error envelopes with their code", () => {
    const envelope = fixtureJson<ErrorEnvelope>("whatif_error_enum.json");
    const html = renderApiError(envelope.code, envelope.message, envelope.line);
    expect(html).toContain(`data-code="E_ENUM_VALUE"`);
    expect(html).toContain("E_ENUM_VALUE: set_location=&#39;banana&#39;");
  });
});
