/** Wire types mirroring the guidance service's documented JSON bodies. */

export type EventKind =
  | "telemetry"
  | "decision"
  | "trigger"
  | "evolution"
  | "enactment"
  | "command"
  | "warning";

export interface WireEvent {
  v: number;
  seq: number;
  tick: number;
  kind: EventKind;
  odd_version: number;
  payload: Record<string, unknown>;
}

export interface EventsPage {
  since: number;
  last_seq: number;
  events: WireEvent[];
}

export interface WorkingPoint {
  utility: number;
  context: number;
}

export interface PendingApproval {
  element_id: string;
  version: string;
  target_regions: number[][];
  pass_fraction: number;
}

export interface StateSnapshot {
  scenario: string;
  tick: number;
  working_point: WorkingPoint | null;
  config: string;
  safe_state: boolean;
  odd_version: number;
  loss_threshold: number;
  paused: boolean;
  finished: boolean;
  last_seq: number;
  pending_approval: PendingApproval | null;
}

/** One configuration's boxes: [c_lo, c_hi, u_lo, u_hi] per box. */
export interface OddConfiguration {
  id: string;
  boxes: number[][];
  knowledge: string[];
  lifetime_years: [number, number];
}

export interface OddDocument {
  version: number;
  configurations: OddConfiguration[];
}

export interface CommandAck {
  command_id: number;
  kind: string;
  issued_at: number;
  status: string;
}
