import { describe, expect, it } from "vitest";
import { ApiClient, ApiError, ConflictError } from "../src/api";
import { scriptedFetch } from "./replay";
import type { MapDocumentJson } from "../src/types";

const BASE = "http://svc";

const DOC: MapDocumentJson = {
  kind: "value_cognitive_map",
  schema_version: 1,
  nodes: [{ id: "a", label: "a" }],
  arcs: [],
  fundamental: "a",
  metadata: {},
};

describe("ApiClient", () => {
  it("posts documents to /sessions with a JSON content type", async () => {
    const log: { method: string; url: string; body?: string }[] = [];
    const api = new ApiClient(
      BASE,
      scriptedFetch([{ status: 201, response: '{"id":"s1","stage":"ingested","pending":null}' }], log),
    );
    const state = await api.createSession(DOC, { entries: [] });
    expect(state).toEqual({ id: "s1", stage: "ingested", pending: null });
    expect(log).toHaveLength(1);
    expect(log[0].method).toBe("POST");
    expect(log[0].url).toBe(`${BASE}/sessions`);
    expect(JSON.parse(log[0].body!)).toEqual({ document: DOC, mapping: { entries: [] } });
  });

  it("omits the mapping key when none is given", async () => {
    const log: { method: string; url: string; body?: string }[] = [];
    const api = new ApiClient(
      BASE,
      scriptedFetch([{ status: 201, response: '{"id":"s1","stage":"ingested","pending":null}' }], log),
    );
    await api.createSession(DOC);
    expect(JSON.parse(log[0].body!)).toEqual({ document: DOC });
  });

  it("routes the session verbs to the documented paths", async () => {
    const log: { method: string; url: string; body?: string }[] = [];
    const ok = '{"id":"s1","stage":"vcm_done","pending":null}';
    const api = new ApiClient(
      BASE,
      scriptedFetch(
        [
          { status: 200, response: ok },
          { status: 200, response: ok },
          { status: 200, response: '{"pending":null}' },
          { status: 200, response: '{"recorded":"r1"}' },
          { status: 200, response: '{"kind":"value_tree"}' },
          { status: 200, response: "digraph map {}" },
          { status: 200, response: '{"entries":[]}' },
        ],
        log,
      ),
    );
    await api.getSession("s1");
    await api.advance("s1");
    expect(await api.getPending("s1")).toBeNull();
    await api.submitDecision("s1", "r1", "independent");
    await api.getArtifact("s1", "tree");
    await api.getArtifactText("s1", "tree", "dot");
    await api.getTranscript("s1");
    expect(log.map((e) => `${e.method} ${e.url.slice(BASE.length)}`)).toEqual([
      "GET /sessions/s1",
      "POST /sessions/s1/advance",
      "GET /sessions/s1/pending",
      "POST /sessions/s1/decisions",
      "GET /sessions/s1/artifacts/tree",
      "GET /sessions/s1/artifacts/tree?format=dot",
      "GET /sessions/s1/transcript",
    ]);
    expect(JSON.parse(log[3].body!)).toEqual({ request_id: "r1", answer: "independent" });
  });

  it("sends compare requests with both trees and an optional threshold", async () => {
    const log: { method: string; url: string; body?: string }[] = [];
    const api = new ApiClient(BASE, scriptedFetch([{ status: 200, response: '{"pairs":[]}' }], log));
    expect(await api.compare(DOC, DOC, 0.5)).toEqual([]);
    expect(JSON.parse(log[0].body!)).toEqual({ tree_a: DOC, tree_b: DOC, threshold: 0.5 });
  });

  it("raises ConflictError on 409 and ApiError otherwise", async () => {
    const busy = new ApiClient(BASE, scriptedFetch([{ status: 409, response: '{"detail":"busy"}' }]));
    await expect(busy.advance("s1")).rejects.toBeInstanceOf(ConflictError);
    const bad = new ApiClient(BASE, scriptedFetch([{ status: 422, response: '{"detail":"nope"}' }]));
    const err = await bad.advance("s1").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err).not.toBeInstanceOf(ConflictError);
    expect(err.status).toBe(422);
  });
});
