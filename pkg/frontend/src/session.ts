/** Session controller: owns one service session per tab, steps it,
 * surfaces pending decisions, and polls while a run is suspended.
 *
 * The timer is injectable so tests can drive polling synchronously. */

import { ApiClient, ConflictError } from "./api";
import type {
  MapDocumentJson,
  PendingDecisionJson,
  SessionStateJson,
} from "./types";

export type TimerFn = (cb: () => void, ms: number) => unknown;

export interface SessionEvents {
  onState?: (state: SessionStateJson) => void;
  onPending?: (pending: PendingDecisionJson | null) => void;
  onError?: (err: unknown) => void;
}

export const POLL_INTERVAL_MS = 1000;

const TERMINAL = new Set(["vt_done", "failed"]);

export class SessionController {
  state: SessionStateJson | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly events: SessionEvents = {},
    private readonly timer: TimerFn = (cb, ms) => setTimeout(cb, ms),
  ) {}

  get sessionId(): string {
    if (!this.state) throw new Error("no session open");
    return this.state.id;
  }

  private setState(state: SessionStateJson): void {
    this.state = state;
    this.events.onState?.(state);
    this.events.onPending?.(state.pending);
  }

  async create(document: MapDocumentJson, mapping?: unknown): Promise<SessionStateJson> {
    this.setState(await this.api.createSession(document, mapping));
    return this.state!;
  }

  async open(id: string): Promise<SessionStateJson> {
    this.setState(await this.api.getSession(id));
    return this.state!;
  }

  /** Advance one stage; a conflict means another writer got there first,
   * so refresh instead of failing. */
  async step(): Promise<SessionStateJson> {
    try {
      this.setState(await this.api.advance(this.sessionId));
    } catch (err) {
      if (err instanceof ConflictError) {
        await this.refresh();
      } else {
        this.events.onError?.(err);
        throw err;
      }
    }
    return this.state!;
  }

  /** Step until the run either finishes or suspends on a decision. */
  async run(): Promise<SessionStateJson> {
    while (!TERMINAL.has(this.state!.stage) && !this.state!.pending) {
      await this.step();
    }
    return this.state!;
  }

  /** Answer the pending decision; stale ids refresh the pending view. */
  async answer(requestId: string, answer: string): Promise<void> {
    try {
      await this.api.submitDecision(this.sessionId, requestId, answer);
    } catch (err) {
      if (err instanceof ConflictError) {
        await this.refresh();
        return;
      }
      this.events.onError?.(err);
      throw err;
    }
    await this.refresh();
  }

  async refresh(): Promise<SessionStateJson> {
    this.setState(await this.api.getSession(this.sessionId));
    return this.state!;
  }

  /** Poll pending state while suspended (the service has no push). */
  startPolling(intervalMs: number = POLL_INTERVAL_MS): void {
    const tick = async () => {
      if (!this.state || TERMINAL.has(this.state.stage)) return;
      try {
        await this.refresh();
      } catch (err) {
        this.events.onError?.(err);
      }
      this.timer(tick, intervalMs);
    };
    this.timer(tick, intervalMs);
  }

  /** Stages whose artifacts exist for the current state. */
  availableStages(): string[] {
    const stage = this.state?.stage ?? "ingested";
    const out = ["input"];
    if (stage !== "ingested") out.push("vcm");
    if (["emm_done", "vt_pending_decision", "vt_done"].includes(stage)) out.push("emm");
    if (stage === "vt_done") out.push("tree");
    return out;
  }
}
