// Thin typed client for the review service; every state change in the app
// flows through these calls.

import type {
  AnnotationsPayload,
  DecisionRequest,
  DecisionResponse,
  DocumentPayload,
  HistoryPayload,
  OntologyPayload,
  QueueItem,
  RunInfo,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
    this.name = "ApiError";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly token: string | null = null,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private headers(json: boolean): Record<string, string> {
    const headers: Record<string, string> = {};
    if (json) headers["Content-Type"] = "application/json";
    if (this.token) headers["X-Auth-Token"] = this.token;
    return headers;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = (await response.json()) as { detail?: string };
        if (body && typeof body.detail === "string") detail = body.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  getQueue(): Promise<{ items: QueueItem[] }> {
    return this.request("/api/queue", { headers: this.headers(false) });
  }

  postDecision(itemId: string, decision: DecisionRequest): Promise<DecisionResponse> {
    return this.request(`/api/queue/${encodeURIComponent(itemId)}/decision`, {
      method: "POST",
      headers: this.headers(true),
      body: JSON.stringify(decision),
    });
  }

  getOntology(): Promise<OntologyPayload> {
    return this.request("/api/ontology", { headers: this.headers(false) });
  }

  getHistory(): Promise<HistoryPayload> {
    return this.request("/api/ontology/history", { headers: this.headers(false) });
  }

  getDocument(docId: string): Promise<DocumentPayload> {
    return this.request(`/api/documents/${encodeURIComponent(docId)}`, {
      headers: this.headers(false),
    });
  }

  getAnnotations(docId: string): Promise<AnnotationsPayload> {
    return this.request(`/api/documents/${encodeURIComponent(docId)}/annotations`, {
      headers: this.headers(false),
    });
  }

  runPipeline(kind: "enrich" | "extract"): Promise<RunInfo> {
    return this.request(`/api/pipeline/${kind}`, {
      method: "POST",
      headers: this.headers(false),
    });
  }

  getRun(runId: string): Promise<RunInfo> {
    return this.request(`/api/pipeline/runs/${encodeURIComponent(runId)}`, {
      headers: this.headers(false),
    });
  }
}
