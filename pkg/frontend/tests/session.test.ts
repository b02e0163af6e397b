import { describe, expect, it } from "vitest";
import { ApiClient } from "../src/api";
import { POLL_INTERVAL_MS, SessionController } from "../src/session";
import { scriptedFetch } from "./replay";

const BASE = "http://svc";

function state(stage: string, pending: unknown = null): string {
  return JSON.stringify({ id: "s1", stage, pending });
}

describe("SessionController", () => {
  it("recovers from a busy service by refreshing instead of failing", async () => {
    const log: { method: string; url: string }[] = [];
    const api = new ApiClient(
      BASE,
      scriptedFetch(
        [
          { status: 200, response: state("ingested") },
          { status: 409, response: '{"detail":"session is busy"}' },
          { status: 200, response: state("vcm_done") },
        ],
        log,
      ),
    );
    const controller = new SessionController(api);
    await controller.open("s1");
    const after = await controller.step();
    expect(after.stage).toBe("vcm_done");
    expect(log.map((e) => `${e.method} ${e.url.slice(BASE.length)}`)).toEqual([
      "GET /sessions/s1",
      "POST /sessions/s1/advance",
      "GET /sessions/s1",
    ]);
  });

  it("runs until the service suspends on a decision", async () => {
    const pending = { id: "r1", kind: "merge_label", prompt: "?", options: [], context: [] };
    const api = new ApiClient(
      BASE,
      scriptedFetch([
        { status: 200, response: state("ingested") },
        { status: 200, response: state("vcm_done") },
        { status: 200, response: state("emm_done") },
        { status: 200, response: state("vt_pending_decision", pending) },
        { status: 500, response: "should never be reached" },
      ]),
    );
    const controller = new SessionController(api);
    await controller.open("s1");
    const suspended = await controller.run();
    expect(suspended.stage).toBe("vt_pending_decision");
    expect(suspended.pending?.id).toBe("r1");
  });

  it("treats a stale decision id as already handled and refreshes", async () => {
    const log: { method: string; url: string }[] = [];
    const api = new ApiClient(
      BASE,
      scriptedFetch(
        [
          { status: 200, response: state("vt_pending_decision") },
          { status: 409, response: '{"detail":"no matching pending decision"}' },
          { status: 200, response: state("vt_pending_decision") },
        ],
        log,
      ),
    );
    const controller = new SessionController(api);
    await controller.open("s1");
    await controller.answer("stale", "dependent");
    expect(log[1].method).toBe("POST");
    expect(log[2].method).toBe("GET");
  });

  it("polls at one-second intervals until the run finishes", async () => {
    const log: { method: string; url: string }[] = [];
    const api = new ApiClient(
      BASE,
      scriptedFetch(
        [
          { status: 200, response: state("emm_done") },
          { status: 200, response: state("vt_pending_decision") },
          { status: 200, response: state("vt_done") },
        ],
        log,
      ),
    );
    const queue: { cb: () => void; ms: number }[] = [];
    const controller = new SessionController(api, {}, (cb, ms) => queue.push({ cb: cb as () => void, ms }));
    await controller.open("s1");
    controller.startPolling();
    // drain the timer queue by hand; each tick refreshes then re-arms
    for (let i = 0; i < 10 && queue.length > 0; i++) {
      const { cb, ms } = queue.shift()!;
      expect(ms).toBe(POLL_INTERVAL_MS);
      cb();
      await Promise.resolve();
      await new Promise((r) => setImmediate(r));
    }
    // open + two refreshes; the vt_done state stopped the re-arm
    expect(log.filter((e) => e.method === "GET")).toHaveLength(3);
    expect(queue).toHaveLength(0);
  });

  it("exposes only the artifact stages the pipeline has produced", async () => {
    const api = new ApiClient(BASE, scriptedFetch([{ status: 200, response: state("ingested") }]));
    const controller = new SessionController(api);
    await controller.open("s1");
    expect(controller.availableStages()).toEqual(["input"]);
    controller.state = { id: "s1", stage: "vcm_done", pending: null };
    expect(controller.availableStages()).toEqual(["input", "vcm"]);
    controller.state = { id: "s1", stage: "vt_pending_decision", pending: null };
    expect(controller.availableStages()).toEqual(["input", "vcm", "emm"]);
    controller.state = { id: "s1", stage: "vt_done", pending: null };
    expect(controller.availableStages()).toEqual(["input", "vcm", "emm", "tree"]);
  });
});
