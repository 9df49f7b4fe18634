// Workbench state transitions, kept pure so the accept/reject/stale rules
// are unit-testable without a DOM.

import type { DecodingControls, Span, Verdict } from "./api.js";

export interface WorkbenchState {
  draft: string;
  pending: string | null; // suffix candidate awaiting accept/reject
  controls: DecodingControls;
  suggestLength: number;
  verdict: Verdict | null;
  spans: Span[];
  verdictFor: string | null; // the exact text the verdict was computed for
  sessionId: string;
  seq: number; // last issued request number
  inFlight: number | null; // request number currently awaited
}

export const DEFAULT_CONTROLS: DecodingControls = {
  strategy: "sample",
  k: 8,
  p: 0.9,
  temperature: 1.0,
  beam_width: 1,
  max_tokens: 500,
  seed: 0,
};

export function initialState(sessionId: string): WorkbenchState {
  return {
    draft: "",
    pending: null,
    controls: { ...DEFAULT_CONTROLS },
    suggestLength: 30,
    verdict: null,
    spans: [],
    verdictFor: null,
    sessionId,
    seq: 0,
    inFlight: null,
  };
}

/** Issue a new request number; any response carrying an older one is stale. */
export function beginRequest(state: WorkbenchState): [WorkbenchState, number] {
  const seq = state.seq + 1;
  return [{ ...state, seq, inFlight: seq }, seq];
}

export function requestFailed(state: WorkbenchState, seq: number): WorkbenchState {
  if (state.inFlight !== seq) return state;
  return { ...state, inFlight: null };
}

/** Store an arrived suggestion unless a newer request superseded it. */
export function suggestionArrived(
  state: WorkbenchState,
  seq: number,
  suggestion: string,
): WorkbenchState {
  if (seq !== state.seq) return state; // stale response: discard
  return { ...state, pending: suggestion, inFlight: null };
}

/** Append the pending suggestion (possibly user-edited) atomically. */
export function acceptSuggestion(
  state: WorkbenchState,
  edited?: string,
): WorkbenchState {
  if (state.pending === null) return state;
  const suffix = edited ?? state.pending;
  return { ...state, draft: state.draft + suffix, pending: null };
}

export function rejectSuggestion(state: WorkbenchState): WorkbenchState {
  return { ...state, pending: null };
}

/** Manual edits invalidate the pending suffix (it no longer extends draft). */
export function editDraft(state: WorkbenchState, draft: string): WorkbenchState {
  if (draft === state.draft) return state;
  return { ...state, draft, pending: null };
}

export function validationArrived(
  state: WorkbenchState,
  seq: number,
  verdict: Verdict,
  spans: Span[],
  forText: string,
): WorkbenchState {
  if (seq !== state.seq) return state;
  return { ...state, verdict, spans, verdictFor: forText, inFlight: null };
}

/** The verdict badge is only authoritative for the text it was computed on. */
export function verdictIsCurrent(state: WorkbenchState): boolean {
  return state.verdict !== null && state.verdictFor === state.draft;
}

export function busy(state: WorkbenchState): boolean {
  return state.inFlight !== null;
}
