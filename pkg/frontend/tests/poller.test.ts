import { describe, expect, it } from "vitest";
import type { PollResponse, RunRecordRow } from "../src/api.js";
import { ApiClient } from "../src/api.js";
import { LiveRun } from "../src/poller.js";

function row(iter: number, best: number): RunRecordRow {
  return { iter, best, iter_best: best, mean: best, candidate: [0] };
}

/** Scripted API: each poll consumes the next canned answer (or throws). */
function scriptedApi(script: Array<PollResponse | Error>): {
  api: ApiClient;
  polls: number[];
} {
  const polls: number[] = [];
  let call = 0;
  const api = {
    poll: async (_id: string, from: number) => {
      polls.push(from);
      const next = script[Math.min(call++, script.length - 1)];
      if (next instanceof Error) throw next;
      const sliced = { ...next, records: next.records.slice(from) };
      return sliced;
    },
    cancel: async () => "cancelled",
  } as unknown as ApiClient;
  return { api, polls };
}

function drainTimers(): { schedule: (cb: () => void, ms: number) => unknown;
                          flush: () => Promise<void>;
                          pending: Array<() => void> } {
  const pending: Array<() => void> = [];
  return {
    pending,
    schedule: (cb) => {
      pending.push(cb);
      return pending.length;
    },
    flush: async () => {
      while (pending.length > 0) {
        const cb = pending.shift()!;
        cb();
        await Promise.resolve();
        await Promise.resolve();
        await Promise.resolve();
      }
    },
  };
}

const FULL: RunRecordRow[] = [row(0, 9), row(1, 5), row(2, 5), row(3, 2)];

function response(status: string, upto: number): PollResponse {
  return {
    run_id: "r-1",
    status: status as PollResponse["status"],
    from: 0,
    total: upto,
    records: FULL.slice(0, upto),
    solution: status === "done"
      ? { value: 2, candidate: [0], first_attained: 3 }
      : null,
    error: null,
  };
}

describe("LiveRun", () => {
  it("accumulates records through the cursor without loss or duplication",
     async () => {
    const { api, polls } = scriptedApi([
      response("running", 1),
      response("running", 3),
      response("done", 4),
    ]);
    const timers = drainTimers();
    const events: number[][] = [];
    const live = new LiveRun(api, "r-1", {
      onRecords: (_rows, all) => events.push(all.map((r) => r.iter)),
    }, timers.schedule, () => {}, 1);
    await live.tick();
    await timers.flush();
    expect(live.records.map((r) => r.iter)).toEqual([0, 1, 2, 3]);
    expect(live.status).toBe("done");
    expect(live.solution?.value).toBe(2);
    expect(polls).toEqual([0, 1, 3]);
    expect(events[events.length - 1]).toEqual([0, 1, 2, 3]);
  });

  it("pauses on network loss and resumes with the cursor preserved",
     async () => {
    const { api, polls } = scriptedApi([
      response("running", 2),
      new TypeError("fetch failed"),
      response("done", 4),
    ]);
    const timers = drainTimers();
    const badges: string[] = [];
    const live = new LiveRun(api, "r-1", {
      onStatus: (s) => badges.push(s),
    }, timers.schedule, () => {}, 1);
    await live.tick();
    await timers.flush();
    expect(badges).toContain("paused");
    expect(live.status).toBe("done");
    expect(live.records.map((r) => r.iter)).toEqual([0, 1, 2, 3]);
    expect(polls).toEqual([0, 2, 2]); // cursor did not move during the outage
  });

  it("stops polling once terminal and reports the final status", async () => {
    const { api, polls } = scriptedApi([response("cancelled", 2)]);
    const timers = drainTimers();
    let finished = "";
    const live = new LiveRun(api, "r-1", {
      onFinished: (_sol, status) => { finished = status; },
    }, timers.schedule, () => {}, 1);
    await live.tick();
    await timers.flush();
    expect(finished).toBe("cancelled");
    expect(polls).toEqual([0]);
    expect(timers.pending.length).toBe(0);
  });

  it("stop() prevents any further polls", async () => {
    const { api, polls } = scriptedApi([response("running", 1)]);
    const timers = drainTimers();
    const live = new LiveRun(api, "r-1", {}, timers.schedule, () => {}, 1);
    await live.tick();
    live.stop();
    await timers.flush();
    expect(polls).toEqual([0]);
  });
});
