/** Typed client for the guidance service; the dashboard's only way in. */

import type {
  CommandAck,
  EventsPage,
  OddDocument,
  StateSnapshot,
  WireEvent,
} from "./types.js";

export class ApiValidationError extends Error {
  constructor(
    message: string,
    public readonly fields: [string, string][],
  ) {
    super(message);
  }
}

async function asJson<T>(response: Response): Promise<T> {
  if (response.status === 422) {
    const body = (await response.json()) as {
      detail?: { error?: string; fields?: [string, string][] };
    };
    throw new ApiValidationError(
      body.detail?.error ?? "validation failed",
      body.detail?.fields ?? [],
    );
  }
  if (!response.ok) {
    throw new Error(`${response.url}: HTTP ${response.status}`);
  }
  return (await response.json()) as T;
}

export class GuidanceApi {
  constructor(private readonly baseUrl: string = "") {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  getState(): Promise<StateSnapshot> {
    return fetch(this.url("/state")).then((r) => asJson<StateSnapshot>(r));
  }

  getOdd(): Promise<OddDocument> {
    return fetch(this.url("/odd")).then((r) => asJson<OddDocument>(r));
  }

  getEvents(since: number, limit = 1000): Promise<EventsPage> {
    return fetch(this.url(`/events?since=${since}&limit=${limit}`)).then((r) =>
      asJson<EventsPage>(r),
    );
  }

  submitEvolutionTarget(
    utility: [number, number],
    context: [number, number],
  ): Promise<CommandAck> {
    return this.post("/commands/evolution-target", { utility, context });
  }

  approve(): Promise<CommandAck> {
    return this.post("/commands/approve", {});
  }

  feedback(verdict: "accept" | "reject", subjectSeq?: number): Promise<CommandAck> {
    return this.post("/commands/feedback", {
      verdict,
      subject_seq: subjectSeq ?? null,
    });
  }

  setLossGoal(lossThreshold: number): Promise<CommandAck> {
    return this.post("/commands/goal", { loss_threshold: lossThreshold });
  }

  pause(): Promise<{ paused: boolean }> {
    return this.post("/commands/pause", {});
  }

  resume(): Promise<{ paused: boolean }> {
    return this.post("/commands/resume", {});
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return fetch(this.url(path), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    }).then((r) => asJson<T>(r));
  }

  /**
   * Follow the server-sent event stream from `since`, invoking `onEvent`
   * per record. Resolves when the server closes the connection; rejects
   * on transport errors. Callers own reconnection (see EventFeed).
   */
  async streamEvents(
    since: number,
    onEvent: (event: WireEvent) => void,
    signal?: AbortSignal,
  ): Promise<void> {
    const response = await fetch(this.url(`/events/stream?since=${since}`), {
      signal,
      headers: { accept: "text/event-stream" },
    });
    if (!response.ok || !response.body) {
      throw new Error(`event stream: HTTP ${response.status}`);
    }
    const reader = response.body.getReader();
    const decoder = new TextDecoder();
    let buffer = "";
    for (;;) {
      const { done, value } = await reader.read();
      if (done) {
        return;
      }
      buffer += decoder.decode(value, { stream: true });
      let boundary;
      while ((boundary = buffer.indexOf("\n\n")) >= 0) {
        const frame = buffer.slice(0, boundary);
        buffer = buffer.slice(boundary + 2);
        const data = frame
          .split("\n")
          .filter((line) => line.startsWith("data: "))
          .map((line) => line.slice("data: ".length))
          .join("\n");
        if (data) {
          onEvent(JSON.parse(data) as WireEvent);
        }
      }
    }
  }
}
