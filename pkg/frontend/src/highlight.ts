// Fixed colors for the six constituent elements and span-to-segment layout.

import type { Span } from "./api.js";

export const TAG_COLORS: Record<string, string> = {
  LEO_SOC: "#4e79a7", // subject of crime
  LEO_SLE: "#f28e2b", // subjective element
  LEO_ACT: "#59a14f", // act
  LEO_VIC: "#e15759", // victim / object
  LEO_CAU: "#b07aa1", // causation
  LEO_ROH: "#9c755f", // result of hazard
};

export const TAG_LABELS: Record<string, string> = {
  LEO_SOC: "subject",
  LEO_SLE: "intent",
  LEO_ACT: "act",
  LEO_VIC: "victim",
  LEO_CAU: "causation",
  LEO_ROH: "result",
};

export interface Segment {
  text: string;
  tag: string | null;
}

/** Split text into plain and tagged segments; concatenation is lossless. */
export function segmentText(text: string, spans: Span[]): Segment[] {
  const ordered = [...spans].sort((a, b) => a.start - b.start);
  const segments: Segment[] = [];
  let cursor = 0;
  for (const span of ordered) {
    if (span.start < cursor || span.end > text.length) {
      continue; // defensive: ignore malformed spans
    }
    if (span.start > cursor) {
      segments.push({ text: text.slice(cursor, span.start), tag: null });
    }
    segments.push({ text: text.slice(span.start, span.end), tag: span.tag });
    cursor = span.end;
  }
  if (cursor < text.length) {
    segments.push({ text: text.slice(cursor), tag: null });
  }
  return segments;
}

export function renderHighlights(text: string, spans: Span[]): DocumentFragment {
  const fragment = document.createDocumentFragment();
  for (const segment of segmentText(text, spans)) {
    if (segment.tag === null) {
      fragment.appendChild(document.createTextNode(segment.text));
    } else {
      const mark = document.createElement("mark");
      mark.textContent = segment.text;
      mark.style.backgroundColor = TAG_COLORS[segment.tag] ?? "#cccccc";
      mark.className = "element-span";
      mark.title = `${segment.tag} (${TAG_LABELS[segment.tag] ?? "?"})`;
      fragment.appendChild(mark);
    }
  }
  return fragment;
}
