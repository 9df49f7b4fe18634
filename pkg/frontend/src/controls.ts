// Decoding-control validation mirroring the server-side ranges.

import type { DecodingControls } from "./api.js";

export const SUGGEST_MIN = 1;
export const SUGGEST_MAX = 100; // server cap for /api/continue
export const MAX_TOKENS_CAP = 500;

export function validateControls(controls: DecodingControls): string[] {
  const errors: string[] = [];
  if (!["greedy", "beam", "sample"].includes(controls.strategy)) {
    errors.push("strategy must be greedy, beam or sample");
  }
  if (!Number.isInteger(controls.k) || controls.k < 0) {
    errors.push("k must be an integer >= 0 (0 disables top-k)");
  }
  if (!(controls.p > 0 && controls.p <= 1)) {
    errors.push("p must be in (0, 1] (1 disables top-p)");
  }
  if (!(controls.temperature > 0)) {
    errors.push("temperature must be positive");
  }
  if (!Number.isInteger(controls.beam_width) || controls.beam_width < 1) {
    errors.push("beam width must be an integer >= 1");
  }
  if (
    !Number.isInteger(controls.max_tokens) ||
    controls.max_tokens < 1 ||
    controls.max_tokens > MAX_TOKENS_CAP
  ) {
    errors.push(`max tokens must be in 1..${MAX_TOKENS_CAP}`);
  }
  if (!Number.isInteger(controls.seed)) {
    errors.push("seed must be an integer");
  }
  return errors;
}

export function clampSuggestLength(value: number): number {
  if (!Number.isFinite(value)) return 30;
  return Math.min(SUGGEST_MAX, Math.max(SUGGEST_MIN, Math.round(value)));
}

/** Read controls out of the form inputs by element id. */
export function controlsFromInputs(get: (id: string) => string): DecodingControls {
  return {
    strategy: get("strategy") as DecodingControls["strategy"],
    k: Number.parseInt(get("k"), 10),
    p: Number.parseFloat(get("p")),
    temperature: Number.parseFloat(get("temperature")),
    beam_width: Number.parseInt(get("beam-width"), 10),
    max_tokens: Number.parseInt(get("max-tokens"), 10),
    seed: Number.parseInt(get("seed"), 10),
  };
}
