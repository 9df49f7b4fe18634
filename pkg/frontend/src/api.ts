// Typed client for the drafting service. The workbench never computes
// verdicts locally; /api/validate is the single source of truth.

export interface DecodingControls {
  strategy: "greedy" | "beam" | "sample";
  k: number;
  p: number;
  temperature: number;
  beam_width: number;
  max_tokens: number;
  seed: number;
}

export interface Span {
  start: number;
  end: number;
  tag: string;
  pattern: string;
}

export interface Verdict {
  strict_ok: boolean;
  relaxed_ok: boolean;
  first_occurrence_order: string[];
  missing: string[];
}

export interface GenerateResponse {
  text: string;
  token_count: number;
  finish_reason: string;
  verdict: Verdict;
  spans: Span[];
  disclaimer: string;
}

export interface ContinueResponse {
  continuation: string;
  token_count: number;
  finish_reason: string;
  verdict: Verdict;
  spans: Span[];
  disclaimer: string;
}

export interface ValidateResponse {
  verdict: Verdict;
  spans: Span[];
  annotated: string;
}

export interface InfoResponse {
  backend: string;
  vocab_size: number;
  model_hash: string;
  default_config: DecodingControls;
  lexicon_stats: Record<string, number>;
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function post<T>(base: string, path: string, body: unknown): Promise<T> {
  const res = await fetch(base + path, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  });
  const payload = await res.json();
  if (!res.ok) {
    throw new ApiError(res.status, payload.error ?? "error", payload.message ?? "");
  }
  return payload as T;
}

export class DraftingApi {
  constructor(private readonly base: string = "") {}

  generate(prompt: string, controls: Partial<DecodingControls>, sessionId: string) {
    return post<GenerateResponse>(this.base, "/api/generate", {
      prompt,
      session_id: sessionId,
      ...controls,
    });
  }

  continueDraft(
    draftSoFar: string,
    continueTokens: number,
    controls: Partial<DecodingControls>,
    sessionId: string,
  ) {
    return post<ContinueResponse>(this.base, "/api/continue", {
      draft_so_far: draftSoFar,
      continue_tokens: continueTokens,
      session_id: sessionId,
      ...controls,
    });
  }

  validate(text: string) {
    return post<ValidateResponse>(this.base, "/api/validate", { text });
  }

  async info(): Promise<InfoResponse> {
    const res = await fetch(this.base + "/api/info");
    if (!res.ok) throw new ApiError(res.status, "error", "info unavailable");
    return (await res.json()) as InfoResponse;
  }
}
