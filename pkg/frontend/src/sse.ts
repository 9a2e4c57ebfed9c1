/** Server-sent-events parsing and a reconnecting feed reader over fetch. */

import type { FetchLike } from "./api.js";

/**
 * Incremental SSE frame parser. Feed it transport chunks; it returns the
 * `data` payloads of any events completed by the chunk. Comment lines
 * (keepalives) are dropped; multi-line data fields are joined per the spec.
 */
export class SSEParser {
  private buffer = "";

  push(chunk: string): string[] {
    this.buffer += chunk.replace(/\r\n/g, "\n").replace(/\r/g, "\n");
    const events: string[] = [];
    for (;;) {
      const split = this.buffer.indexOf("\n\n");
      if (split < 0) break;
      const frame = this.buffer.slice(0, split);
      this.buffer = this.buffer.slice(split + 2);
      const data = frame
        .split("\n")
        .filter((line) => line.startsWith("data:"))
        .map((line) => line.slice(line.startsWith("data: ") ? 6 : 5))
        .join("\n");
      if (data !== "") events.push(data);
    }
    return events;
  }
}

export interface FeedHandlers {
  onData(payload: string): void;
  /** Called with false when the stream drops, true once it is back up. */
  onStateChange(up: boolean): void;
}

export interface FeedOptions {
  fetchImpl?: FetchLike;
  retryMs?: number;
}

/**
 * Open the feed and keep it open: on any transport error or end-of-stream,
 * report the outage and retry until the returned stop function is called.
 */
export function openFeed(
  url: string,
  handlers: FeedHandlers,
  options: FeedOptions = {},
): () => void {
  const fetchImpl: FetchLike =
    options.fetchImpl ?? ((input, init) => fetch(input, init));
  const retryMs = options.retryMs ?? 1000;
  const controller = new AbortController();
  let stopped = false;
  let up = false;

  const setUp = (value: boolean) => {
    if (up !== value && !stopped) {
      up = value;
      handlers.onStateChange(value);
    }
  };

  const sleep = (ms: number) =>
    new Promise<void>((resolve) => setTimeout(resolve, ms));

  (async () => {
    while (!stopped) {
      try {
        const resp = await fetchImpl(url, {
          signal: controller.signal,
          headers: { Accept: "text/event-stream" },
        });
        if (!resp.ok || resp.body === null) {
          throw new Error(`feed answered status ${resp.status}`);
        }
        const parser = new SSEParser();
        const reader = resp.body.getReader();
        const decoder = new TextDecoder();
        for (;;) {
          const { done, value } = await reader.read();
          if (done) break;
          const payloads = parser.push(decoder.decode(value, { stream: true }));
          if (payloads.length > 0) setUp(true);
          for (const payload of payloads) {
            if (!stopped) handlers.onData(payload);
          }
        }
      } catch {
        // fall through to the retry path below
      }
      if (stopped) break;
      setUp(false);
      await sleep(retryMs);
    }
  })();

  return () => {
    stopped = true;
    controller.abort();
  };
}
