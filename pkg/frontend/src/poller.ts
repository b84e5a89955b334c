// Live run follower: polls the record endpoint on a fixed interval,
// appending new rows and advancing the cursor. A network failure pauses
// polling (badge state "paused") and the next tick retries with the
// cursor preserved, so no records are lost or duplicated.

import type { Api, RunRecordRow, RunSolution, RunStatus } from "./api.js";

export const POLL_INTERVAL_MS = 500;

export type BadgeState = RunStatus | "paused";

export interface LiveRunListener {
  onRecords?(rows: RunRecordRow[], all: RunRecordRow[]): void;
  onStatus?(state: BadgeState): void;
  onFinished?(solution: RunSolution | null, status: RunStatus): void;
}

const TERMINAL: ReadonlySet<string> = new Set(["done", "cancelled", "failed"]);

type Scheduler = (callback: () => void, ms: number) => unknown;

export class LiveRun {
  readonly records: RunRecordRow[] = [];
  cursor = 0;
  status: BadgeState = "pending";
  solution: RunSolution | null = null;
  private stopped = false;
  private timer: unknown = null;

  constructor(
    private readonly api: Api,
    readonly runId: string,
    private readonly listener: LiveRunListener = {},
    private readonly schedule: Scheduler = (cb, ms) => setTimeout(cb, ms),
    private readonly cancelScheduled: (handle: unknown) => void = (h) =>
      clearTimeout(h as ReturnType<typeof setTimeout>),
    private readonly intervalMs: number = POLL_INTERVAL_MS,
  ) {}

  start(): void {
    void this.tick();
  }

  stop(): void {
    this.stopped = true;
    if (this.timer !== null) {
      this.cancelScheduled(this.timer);
      this.timer = null;
    }
  }

  async cancel(): Promise<void> {
    await this.api.cancel(this.runId);
  }

  private setStatus(state: BadgeState): void {
    if (state !== this.status) {
      this.status = state;
      this.listener.onStatus?.(state);
    }
  }

  async tick(): Promise<void> {
    if (this.stopped) return;
    try {
      const body = await this.api.poll(this.runId, this.cursor);
      if (body.records.length > 0) {
        this.cursor += body.records.length;
        this.records.push(...body.records);
        this.listener.onRecords?.(body.records, this.records);
      }
      this.setStatus(body.status);
      if (TERMINAL.has(body.status)) {
        this.solution = body.solution;
        this.stopped = true;
        this.listener.onFinished?.(body.solution, body.status);
        return;
      }
    } catch (err) {
      if (err instanceof Error && "status" in err) {
        // a real API answer (e.g. evicted run): give up
        this.setStatus("failed");
        this.stopped = true;
        this.listener.onFinished?.(null, "failed");
        return;
      }
      this.setStatus("paused"); // network loss: retry with cursor intact
    }
    this.timer = this.schedule(() => void this.tick(), this.intervalMs);
  }
}
