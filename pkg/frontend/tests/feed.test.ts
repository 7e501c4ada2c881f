import { afterEach, describe, expect, it } from "vitest";

import { GuidanceApi } from "../src/api.js";
import { EventFeed } from "../src/feed.js";
import { makeEvents, StubGuidanceServer } from "./helpers/stub_server.js";

let server: StubGuidanceServer | null = null;

afterEach(async () => {
  await server?.stop();
  server = null;
});

describe("EventFeed.ingest", () => {
  it("appends only the next sequence number", () => {
    const feed = new EventFeed();
    const [e1, e2, e3] = makeEvents(3);
    expect(feed.ingest(e1)).toBe("appended");
    expect(feed.ingest(e1)).toBe("duplicate");
    expect(feed.ingest(e3)).toBe("gap");
    expect(feed.ingest(e2)).toBe("appended");
    expect(feed.ingest(e3)).toBe("appended");
    expect(feed.seqs()).toEqual([1, 2, 3]);
    expect(feed.hasGaps()).toBe(false);
  });

  it("notifies listeners once per appended event", () => {
    const feed = new EventFeed();
    const seen: number[] = [];
    feed.onEvent((e) => seen.push(e.seq));
    for (const event of makeEvents(4)) {
      feed.ingest(event);
      feed.ingest(event); // duplicates must not re-notify
    }
    expect(seen).toEqual([1, 2, 3, 4]);
  });
});

describe("EventFeed over the wire", () => {
  it("backfills the full history through paging", async () => {
    server = new StubGuidanceServer({ events: makeEvents(25) });
    const base = await server.start();
    const feed = new EventFeed();
    await feed.backfill(new GuidanceApi(base));
    expect(feed.seqs()).toEqual(
      Array.from({ length: 25 }, (_, i) => i + 1),
    );
  });

  it("stays gap-free across forced stream reconnects", async () => {
    server = new StubGuidanceServer({
      events: makeEvents(20),
      dropStreamAfter: 4, // server cuts every stream after 4 frames
    });
    const base = await server.start();
    const api = new GuidanceApi(base);
    const feed = new EventFeed();

    const controller = new AbortController();
    const running = feed.run(api, {
      signal: controller.signal,
      retryDelayMs: 10,
    });
    const deadline = Date.now() + 10_000;
    while (feed.lastSeq < 20 && Date.now() < deadline) {
      await new Promise((resolve) => setTimeout(resolve, 20));
    }
    controller.abort();
    await running;

    expect(feed.lastSeq).toBe(20);
    expect(feed.hasGaps()).toBe(false);
    expect(server.streamConnections).toBeGreaterThan(1); // it really reconnected
  });

  it("resumes from lastSeq rather than refetching everything", async () => {
    server = new StubGuidanceServer({ events: makeEvents(10) });
    const base = await server.start();
    const api = new GuidanceApi(base);

    const feed = new EventFeed();
    for (const event of makeEvents(6)) {
      feed.ingest(event);
    }
    const received: number[] = [];
    await api.streamEvents(feed.lastSeq, (e) => {
      received.push(e.seq);
      feed.ingest(e);
    });
    expect(received).toEqual([7, 8, 9, 10]);
    expect(feed.seqs()).toEqual([1, 2, 3, 4, 5, 6, 7, 8, 9, 10]);
  });
});
