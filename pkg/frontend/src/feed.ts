/** Gap-free event feed with reconnect-and-resume by last seq.
 *
 * The feed only ever appends the next sequence number: duplicates are
 * dropped, and an out-of-order jump is never ingested directly; it is
 * healed by paging the missed range from the request/response endpoint,
 * so consumers always observe a contiguous seq sequence, across any
 * number of reconnects.
 */

import type { GuidanceApi } from "./api.js";
import type { WireEvent } from "./types.js";

export class EventFeed {
  readonly events: WireEvent[] = [];
  private listeners: ((event: WireEvent) => void)[] = [];

  get lastSeq(): number {
    return this.events.length === 0
      ? 0
      : this.events[this.events.length - 1].seq;
  }

  onEvent(listener: (event: WireEvent) => void): void {
    this.listeners.push(listener);
  }

  /** Ingest one event; returns what the feed decided to do with it. */
  ingest(event: WireEvent): "appended" | "duplicate" | "gap" {
    if (event.seq <= this.lastSeq) {
      return "duplicate";
    }
    if (event.seq !== this.lastSeq + 1) {
      return "gap";
    }
    this.events.push(event);
    for (const listener of this.listeners) {
      listener(event);
    }
    return "appended";
  }

  /** Pull seq `lastSeq+1 ..` pages until the server has nothing newer. */
  async backfill(api: GuidanceApi): Promise<void> {
    for (;;) {
      const page = await api.getEvents(this.lastSeq);
      for (const event of page.events) {
        this.ingest(event);
      }
      if (page.events.length === 0 || this.lastSeq >= page.last_seq) {
        return;
      }
    }
  }

  /**
   * Follow the live stream forever, resuming from `lastSeq` after every
   * disconnect; a detected gap falls back to backfill before resuming.
   */
  async run(
    api: GuidanceApi,
    options: { signal?: AbortSignal; retryDelayMs?: number } = {},
  ): Promise<void> {
    const retryDelay = options.retryDelayMs ?? 500;
    while (!options.signal?.aborted) {
      try {
        await api.streamEvents(
          this.lastSeq,
          (event) => {
            if (this.ingest(event) === "gap") {
              void this.backfill(api);
            }
          },
          options.signal,
        );
      } catch {
        if (options.signal?.aborted) {
          return;
        }
      }
      await new Promise((resolve) => setTimeout(resolve, retryDelay));
    }
  }

  /** The feed's seq sequence; contiguous from the first ingested record. */
  seqs(): number[] {
    return this.events.map((event) => event.seq);
  }

  hasGaps(): boolean {
    const seqs = this.seqs();
    return seqs.some((seq, i) => i > 0 && seq !== seqs[i - 1] + 1);
  }
}
