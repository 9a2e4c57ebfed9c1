/** Turn 1-based end-inclusive source ranges into text segments for marking. */

import type { HighlightRange } from "./types.js";

export interface Segment {
  text: string;
  marked: boolean;
}

interface Span {
  start: number;
  end: number; // exclusive offset
}

/** Byte offsets of each line start, lines numbered from 1. */
function lineStarts(text: string): number[] {
  const starts = [0];
  for (let i = 0; i < text.length; i++) {
    if (text[i] === "\n") starts.push(i + 1);
  }
  return starts;
}

function toSpan(range: HighlightRange, starts: number[], length: number): Span | null {
  if (range.startLine < 1 || range.startLine > starts.length) return null;
  if (range.endLine < range.startLine || range.endLine > starts.length) return null;
  const start = starts[range.startLine - 1] + (range.startCol - 1);
  const end = starts[range.endLine - 1] + range.endCol; // inclusive col -> exclusive offset
  const clampedStart = Math.max(0, Math.min(start, length));
  const clampedEnd = Math.max(clampedStart, Math.min(end, length));
  if (clampedStart === clampedEnd) return null;
  return { start: clampedStart, end: clampedEnd };
}

function mergeSpans(spans: Span[]): Span[] {
  const sorted = [...spans].sort((a, b) => a.start - b.start || a.end - b.end);
  const merged: Span[] = [];
  for (const span of sorted) {
    const last = merged[merged.length - 1];
    if (last !== undefined && span.start <= last.end) {
      last.end = Math.max(last.end, span.end);
    } else {
      merged.push({ ...span });
    }
  }
  return merged;
}

/**
 * Split `text` into alternating plain and marked segments covering the whole
 * string. Ranges outside the text are clamped; overlaps are merged.
 */
export function segmentText(
  text: string,
  ranges: HighlightRange[],
): Segment[] {
  const starts = lineStarts(text);
  const spans = mergeSpans(
    ranges
      .map((r) => toSpan(r, starts, text.length))
      .filter((s): s is Span => s !== null),
  );
  const segments: Segment[] = [];
  let cursor = 0;
  for (const span of spans) {
    if (span.start > cursor) {
      segments.push({ text: text.slice(cursor, span.start), marked: false });
    }
    segments.push({ text: text.slice(span.start, span.end), marked: true });
    cursor = span.end;
  }
  if (cursor < text.length) {
    segments.push({ text: text.slice(cursor), marked: false });
  }
  return segments;
}
