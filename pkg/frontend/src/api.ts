/**
 * Thin typed client for the vren HTTP service.
 *
 * Every method issues one request and returns the decoded JSON body.  Error
 * responses carry a `{code, message, line}` envelope, surfaced as ApiError;
 * network-level failures (service down, DNS, abort) become
 * ServiceUnreachableError so the shell can show a banner instead of a stack
 * trace.
 *
 * The fetch implementation is injectable so tests can replay recorded
 * responses without a live server or a DOM.
 */

import type {
  ErrorEnvelope,
  HealthResponse,
  LintResponse,
  MatchDoc,
  ParseResponse,
  PredictResponse,
  WhatIfRequest,
  WhatIfResponse,
} from "./types.js";

export type FetchLike = (
  url: string,
  init?: {
    method?: string;
    headers?: Record<string, string>;
    body?: string;
    signal?: AbortSignal;
  },
) => Promise<{ status: number; text(): Promise<string> }>;

export class ApiError extends Error {
  readonly code: string;
  readonly line: number | null;
  readonly status: number;

  constructor(status: number, envelope: ErrorEnvelope) {
    super(envelope.message);
    this.name = "ApiError";
    this.code = envelope.code;
    this.line = envelope.line;
    this.status = status;
  }
}

export class ServiceUnreachableError extends Error {
  constructor(cause: unknown) {
    super(`service unreachable: ${cause instanceof Error ? cause.message : String(cause)}`);
    this.name = "ServiceUnreachableError";
  }
}

export function isAbort(err: unknown): boolean {
  return err instanceof Error && err.name === "AbortError";
}

export class VrenClient {
  readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;
  private readonly inflight = new Map<string, AbortController>();

  constructor(baseUrl: string, fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    const impl = fetchImpl ?? (globalThis.fetch as unknown as FetchLike | undefined);
    if (!impl) {
      throw new Error("no fetch implementation available; pass one explicitly");
    }
    this.fetchImpl = impl;
  }

  /**
   * Abort the previous request issued under `panel` and return a signal for
   * the next one, so each panel renders only its latest response.
   */
  latestSignal(panel: string): AbortSignal {
    this.inflight.get(panel)?.abort();
    const controller = new AbortController();
    this.inflight.set(panel, controller);
    return controller.signal;
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    signal?: AbortSignal,
  ): Promise<T> {
    let response: { status: number; text(): Promise<string> };
    try {
      response = await this.fetchImpl(this.baseUrl + path, {
        method,
        headers: body === undefined ? undefined : { "Content-Type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
        signal,
      });
    } catch (err) {
      if (isAbort(err)) throw err;
      throw new ServiceUnreachableError(err);
    }
    const raw = await response.text();
    let decoded: unknown;
    try {
      decoded = JSON.parse(raw);
    } catch {
      throw new ServiceUnreachableError(`non-JSON response (status ${response.status})`);
    }
    if (response.status >= 400) {
      throw new ApiError(response.status, decoded as ErrorEnvelope);
    }
    return decoded as T;
  }

  health(signal?: AbortSignal): Promise<HealthResponse> {
    return this.request("GET", "/health", undefined, signal);
  }

  parse(text: string, signal?: AbortSignal): Promise<ParseResponse> {
    return this.request("POST", "/parse", { text }, signal);
  }

  lint(match: MatchDoc, signal?: AbortSignal): Promise<LintResponse> {
    return this.request("POST", "/lint", { match }, signal);
  }

  format(match: MatchDoc, signal?: AbortSignal): Promise<string> {
    return this.request<{ text: string }>("POST", "/format", { match }, signal).then(
      (r) => r.text,
    );
  }

  predictRally(
    match: MatchDoc,
    rallyNo?: number,
    signal?: AbortSignal,
  ): Promise<PredictResponse> {
    const payload: { match: MatchDoc; rally_no?: number } = { match };
    if (rallyNo !== undefined) payload.rally_no = rallyNo;
    return this.request("POST", "/predict/rally", payload, signal);
  }

  whatIf(req: WhatIfRequest, signal?: AbortSignal): Promise<WhatIfResponse> {
    return this.request("POST", "/whatif", req, signal);
  }
}
