/** Event-sourced view model: the one state object the page renders from.
 *
 * Events from the feed update the live trajectory, configuration, and
 * pipeline status; the ODD document is fetched separately and treated
 * as a snapshot. Rendered output always corresponds to one
 * (odd_version, seq) pair, and the model flags itself stale whenever an
 * event references a newer ODD version than the loaded document.
 */

import type {
  OddConfiguration,
  OddDocument,
  PendingApproval,
  StateSnapshot,
  WireEvent,
} from "./types.js";

export interface TrajectoryPoint {
  tick: number;
  utility: number;
  context: number;
  inOdd: boolean;
}

export interface FeedLine {
  seq: number;
  tick: number;
  kind: string;
  summary: string;
}

const TRAJECTORY_CAPACITY = 300;
const FEED_CAPACITY = 500;

export function boxContains(box: number[], utility: number, context: number): boolean {
  const [cLo, cHi, uLo, uHi] = box;
  return cLo <= context && context <= cHi && uLo <= utility && utility <= uHi;
}

export function anyConfigContains(
  configurations: OddConfiguration[],
  utility: number,
  context: number,
): boolean {
  return configurations.some((config) =>
    config.boxes.some((box) => boxContains(box, utility, context)),
  );
}

function summarize(event: WireEvent): string {
  const p = event.payload as Record<string, any>;
  switch (event.kind) {
    case "telemetry":
      return `demand ${p.demand} @ ${p.interference} dB, loss ${(p.loss as number).toFixed(3)}`;
    case "decision":
      return p.reason === "out_of_odd"
        ? "out of ODD: holding safe configuration"
        : `${p.reason}: ${p.chosen}`;
    case "trigger":
      return `${p.kind} trigger`;
    case "evolution":
      return p.phase === "outcome"
        ? `outcome: ${p.status}`
        : `${p.phase}${p.element_id ? ` ${p.element_id}` : ""}`;
    case "enactment":
      return `enacted ${p.element_id} -> ODD v${p.odd_version}`;
    case "command":
      return `${p.kind} acknowledged`;
    case "warning":
      return String(p.message ?? "warning");
    default:
      return event.kind;
  }
}

export class DashboardModel {
  odd: OddDocument = { version: 0, configurations: [] };
  trajectory: TrajectoryPoint[] = [];
  feed: FeedLine[] = [];
  currentConfig: string | null = null;
  safeState = false;
  paused = false;
  tick = 0;
  lossThreshold: number | null = null;
  pendingApproval: PendingApproval | null = null;
  /** Highest ODD version any event has referenced. */
  observedOddVersion = 0;
  /** seq of the newest applied event. */
  feedSeq = 0;

  applyEvent(event: WireEvent): void {
    this.feedSeq = event.seq;
    this.tick = Math.max(this.tick, event.tick);
    this.observedOddVersion = Math.max(this.observedOddVersion, event.odd_version);

    const p = event.payload as Record<string, any>;
    if (event.kind === "telemetry") {
      this.trajectory.push({
        tick: event.tick,
        utility: p.demand as number,
        context: p.interference as number,
        inOdd: anyConfigContains(
          this.odd.configurations,
          p.demand as number,
          p.interference as number,
        ),
      });
      if (this.trajectory.length > TRAJECTORY_CAPACITY) {
        this.trajectory.shift();
      }
      this.currentConfig = p.config as string;
    } else if (event.kind === "decision") {
      this.safeState = p.reason === "out_of_odd";
      if (p.chosen) {
        this.currentConfig = p.chosen as string;
      }
    } else if (event.kind === "evolution" && p.phase === "outcome") {
      if (p.status !== "awaiting_approval") {
        this.pendingApproval = null;
      }
    } else if (event.kind === "enactment") {
      this.pendingApproval = null;
    }

    this.feed.push({
      seq: event.seq,
      tick: event.tick,
      kind: event.kind,
      summary: summarize(event),
    });
    if (this.feed.length > FEED_CAPACITY) {
      this.feed.shift();
    }
  }

  applyState(state: StateSnapshot): void {
    this.paused = state.paused;
    this.pendingApproval = state.pending_approval;
    this.lossThreshold = state.loss_threshold;
    this.safeState = state.safe_state;
    this.observedOddVersion = Math.max(this.observedOddVersion, state.odd_version);
  }

  applyOdd(doc: OddDocument): void {
    this.odd = doc;
    this.observedOddVersion = Math.max(this.observedOddVersion, doc.version);
    // containment verdicts may change under the new document
    for (const point of this.trajectory) {
      point.inOdd = anyConfigContains(doc.configurations, point.utility, point.context);
    }
  }

  /** True when events reference a newer ODD than the rendered document. */
  oddStale(): boolean {
    return this.observedOddVersion > this.odd.version;
  }

  /** The (odd_version, seq) pair the current render corresponds to. */
  snapshotPair(): [number, number] {
    return [this.odd.version, this.feedSeq];
  }

  layers(): OddConfiguration[] {
    return this.odd.configurations;
  }
}
