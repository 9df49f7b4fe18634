// DOM wiring for the drafting workbench.

import { DraftingApi } from "./api.js";
import {
  clampSuggestLength,
  controlsFromInputs,
  validateControls,
} from "./controls.js";
import { renderHighlights, TAG_COLORS, TAG_LABELS } from "./highlight.js";
import {
  acceptSuggestion,
  beginRequest,
  busy,
  editDraft,
  initialState,
  rejectSuggestion,
  requestFailed,
  suggestionArrived,
  validationArrived,
  verdictIsCurrent,
  WorkbenchState,
} from "./state.js";

const api = new DraftingApi();
let state: WorkbenchState = initialState(crypto.randomUUID());

const $ = (id: string) => document.getElementById(id)!;
const draftEl = () => $("draft") as HTMLTextAreaElement;
const suggestionEl = () => $("suggestion") as HTMLTextAreaElement;

function setStatus(message: string, isError = false): void {
  const status = $("status");
  status.textContent = message;
  status.className = isError ? "status error" : "status";
}

function readControls() {
  const controls = controlsFromInputs(
    (id) => ($(id) as HTMLInputElement | HTMLSelectElement).value,
  );
  const errors = validateControls(controls);
  if (errors.length) {
    setStatus(errors.join("; "), true);
    return null;
  }
  state.controls = controls;
  return controls;
}

function render(): void {
  const hasPending = state.pending !== null;
  $("suggestion-box").classList.toggle("hidden", !hasPending);
  if (hasPending) {
    suggestionEl().value = state.pending!;
  }
  ($("suggest") as HTMLButtonElement).disabled = busy(state) || !state.draft;
  ($("full-draft") as HTMLButtonElement).disabled = busy(state) || !state.draft;
  ($("validate") as HTMLButtonElement).disabled = busy(state) || !state.draft;
  ($("accept") as HTMLButtonElement).disabled = !hasPending;
  ($("reject") as HTMLButtonElement).disabled = !hasPending;

  const badge = $("verdict-badge");
  if (!state.verdict) {
    badge.textContent = "not validated";
    badge.className = "badge neutral";
  } else {
    const stale = verdictIsCurrent(state) ? "" : " (stale)";
    if (state.verdict.strict_ok) {
      badge.textContent = "strict ok" + stale;
      badge.className = "badge strict";
    } else if (state.verdict.relaxed_ok) {
      badge.textContent = "relaxed ok" + stale;
      badge.className = "badge relaxed";
    } else {
      badge.textContent = `missing: ${state.verdict.missing.join(", ")}` + stale;
      badge.className = "badge fail";
    }
  }

  const view = $("highlight-view");
  view.replaceChildren();
  if (state.verdictFor !== null) {
    view.appendChild(renderHighlights(state.verdictFor, state.spans));
  }
}

async function validateNow(): Promise<void> {
  const text = state.draft;
  if (!text) return;
  const [next, seq] = beginRequest(state);
  state = next;
  render();
  try {
    const res = await api.validate(text);
    state = validationArrived(state, seq, res.verdict, res.spans, text);
    setStatus("validated");
  } catch (err) {
    state = requestFailed(state, seq);
    setStatus(String(err), true);
  }
  render();
}

async function suggest(): Promise<void> {
  const controls = readControls();
  if (!controls || busy(state)) return;
  const length = clampSuggestLength(
    Number.parseInt(($("suggest-length") as HTMLInputElement).value, 10),
  );
  const [next, seq] = beginRequest(state);
  state = next;
  render();
  setStatus("requesting continuation…");
  try {
    const res = await api.continueDraft(state.draft, length, controls, state.sessionId);
    state = suggestionArrived(state, seq, res.continuation);
    setStatus(`suggestion ready (${res.token_count} chars). ${res.disclaimer}`);
  } catch (err) {
    state = requestFailed(state, seq);
    setStatus(String(err), true);
  }
  render();
}

async function fullDraft(): Promise<void> {
  const controls = readControls();
  if (!controls || busy(state)) return;
  const [next, seq] = beginRequest(state);
  state = next;
  render();
  setStatus("generating full draft…");
  try {
    const res = await api.generate(state.draft, controls, state.sessionId);
    state = suggestionArrived(state, seq, res.text);
    setStatus(
      `draft ready (${res.token_count} chars, ${res.finish_reason}). ${res.disclaimer}`,
    );
  } catch (err) {
    state = requestFailed(state, seq);
    setStatus(String(err), true);
  }
  render();
}

function wire(): void {
  const legend = $("legend");
  for (const [tag, color] of Object.entries(TAG_COLORS)) {
    const item = document.createElement("span");
    item.className = "legend-item";
    const swatch = document.createElement("span");
    swatch.className = "swatch";
    swatch.style.backgroundColor = color;
    item.appendChild(swatch);
    item.appendChild(document.createTextNode(`${tag} ${TAG_LABELS[tag]}`));
    legend.appendChild(item);
  }

  draftEl().addEventListener("input", () => {
    state = editDraft(state, draftEl().value);
    render();
  });
  $("suggest").addEventListener("click", () => void suggest());
  $("full-draft").addEventListener("click", () => void fullDraft());
  $("validate").addEventListener("click", () => void validateNow());
  $("accept").addEventListener("click", () => {
    state = acceptSuggestion(state, suggestionEl().value);
    draftEl().value = state.draft;
    render();
    void validateNow();
  });
  $("reject").addEventListener("click", () => {
    state = rejectSuggestion(state);
    render();
  });
  $("suggest-length").addEventListener("input", () => {
    $("suggest-length-value").textContent = ($("suggest-length") as HTMLInputElement).value;
  });

  api
    .info()
    .then((info) => {
      $("backend-info").textContent =
        `${info.backend} · |V|=${info.vocab_size} · model ${info.model_hash.slice(0, 12)}`;
    })
    .catch(() => {
      $("backend-info").textContent = "service unavailable";
    });

  render();
}

document.addEventListener("DOMContentLoaded", wire);
