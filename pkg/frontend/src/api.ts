/** Thin typed client for the session service HTTP API.
 *
 * The fetch implementation is injectable so tests can script exchanges;
 * the client itself performs no graph computation of any kind. */

import type {
  ComparePairJson,
  MapDocumentJson,
  PendingDecisionJson,
  SessionStateJson,
  TranscriptJson,
} from "./types";

export interface HttpResponse {
  status: number;
  ok: boolean;
  text(): Promise<string>;
}

export type FetchFn = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<HttpResponse>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: string,
  ) {
    super(`service responded ${status}: ${body}`);
  }
}

/** 409: someone else holds the session, or the decision id went stale. */
export class ConflictError extends ApiError {}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchFn = globalThis.fetch as unknown as FetchFn,
  ) {}

  private async request(method: string, path: string, body?: unknown): Promise<string> {
    const init: Parameters<FetchFn>[1] = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const res = await this.fetchFn(this.baseUrl + path, init);
    const text = await res.text();
    if (!res.ok) {
      if (res.status === 409) throw new ConflictError(res.status, text);
      throw new ApiError(res.status, text);
    }
    return text;
  }

  private async json<T>(method: string, path: string, body?: unknown): Promise<T> {
    return JSON.parse(await this.request(method, path, body)) as T;
  }

  createSession(document: MapDocumentJson, mapping?: unknown): Promise<SessionStateJson> {
    const body: Record<string, unknown> = { document };
    if (mapping !== undefined) body.mapping = mapping;
    return this.json("POST", "/sessions", body);
  }

  getSession(id: string): Promise<SessionStateJson> {
    return this.json("GET", `/sessions/${id}`);
  }

  advance(id: string): Promise<SessionStateJson> {
    return this.json("POST", `/sessions/${id}/advance`);
  }

  async getPending(id: string): Promise<PendingDecisionJson | null> {
    const res = await this.json<{ pending: PendingDecisionJson | null }>(
      "GET",
      `/sessions/${id}/pending`,
    );
    return res.pending;
  }

  submitDecision(id: string, requestId: string, answer: string): Promise<void> {
    return this.request("POST", `/sessions/${id}/decisions`, {
      request_id: requestId,
      answer,
    }).then(() => undefined);
  }

  /** Canonical artifact bytes; `json` parses, `dot` stays text. */
  getArtifactText(id: string, stage: string, format: "json" | "dot" = "json"): Promise<string> {
    const suffix = format === "dot" ? "?format=dot" : "";
    return this.request("GET", `/sessions/${id}/artifacts/${stage}${suffix}`);
  }

  async getArtifact(id: string, stage: string): Promise<MapDocumentJson> {
    return JSON.parse(await this.getArtifactText(id, stage)) as MapDocumentJson;
  }

  async getTranscript(id: string): Promise<TranscriptJson> {
    return JSON.parse(await this.request("GET", `/sessions/${id}/transcript`)) as TranscriptJson;
  }

  async compare(
    treeA: MapDocumentJson,
    treeB: MapDocumentJson,
    threshold?: number,
  ): Promise<ComparePairJson[]> {
    const body: Record<string, unknown> = { tree_a: treeA, tree_b: treeB };
    if (threshold !== undefined) body.threshold = threshold;
    const res = await this.json<{ pairs: ComparePairJson[] }>("POST", "/compare", body);
    return res.pairs;
  }
}
