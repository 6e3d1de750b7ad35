/**
 * Typed client for the catalogue service HTTP API. Every backend call the
 * UI makes goes through here (previews included: components never query
 * endpoints directly).
 */

import type {
  ApiErrorBody,
  ComponentDoc,
  RenderPayload,
  SiteIndex,
  StoryDoc,
  StoryEnvelope,
  StoryListing,
} from "./types";

export class ApiError extends Error {
  status: number;
  body: ApiErrorBody;

  constructor(status: number, body: ApiErrorBody) {
    super(`${body.error} (HTTP ${status})`);
    this.status = status;
    this.body = body;
  }
}

export class RevisionConflictError extends ApiError {}

export interface ApiOptions {
  base?: string;
  token?: string | null;
  sessionId?: string | null;
}

export class ApiClient {
  base: string;
  token: string | null;
  sessionId: string | null;

  constructor(options: ApiOptions = {}) {
    this.base = (options.base ?? "").replace(/\/$/, "");
    this.token = options.token ?? null;
    this.sessionId = options.sessionId ?? null;
  }

  get isAnonymous(): boolean {
    return this.token === null;
  }

  private headers(json = true): Record<string, string> {
    const headers: Record<string, string> = {};
    if (json) headers["Content-Type"] = "application/json";
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    if (this.sessionId) headers["X-Session-Id"] = this.sessionId;
    return headers;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.base + path, {
      method,
      headers: this.headers(body !== undefined),
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const session = response.headers.get("X-Session-Id");
    if (session) this.sessionId = session;
    if (!response.ok) {
      let errorBody: ApiErrorBody;
      try {
        errorBody = (await response.json()) as ApiErrorBody;
      } catch {
        errorBody = { error: `http_${response.status}` };
      }
      if (response.status === 409 && errorBody.error === "revision_conflict") {
        throw new RevisionConflictError(response.status, errorBody);
      }
      throw new ApiError(response.status, errorBody);
    }
    if (response.status === 204) return undefined as T;
    return (await response.json()) as T;
  }

  listStories(): Promise<{ stories: StoryListing[] }> {
    return this.request("GET", "/api/stories");
  }

  createStory(setup: {
    template?: string;
    title: string;
    endpoint: string;
    section?: string | null;
  }): Promise<StoryEnvelope> {
    return this.request("POST", "/api/stories", { template: "statistics", ...setup });
  }

  getStory(id: string): Promise<StoryEnvelope> {
    return this.request("GET", `/api/stories/${encodeURIComponent(id)}`);
  }

  putStory(story: StoryDoc, revision: number): Promise<{ revision: number }> {
    return this.request("PUT", `/api/stories/${encodeURIComponent(story.id)}`, {
      story,
      revision,
    });
  }

  deleteStory(id: string): Promise<void> {
    return this.request("DELETE", `/api/stories/${encodeURIComponent(id)}`);
  }

  publish(id: string): Promise<{ url: string; target: string }> {
    return this.request("POST", `/api/stories/${encodeURIComponent(id)}/publish`);
  }

  preview(
    endpoint: string,
    component: Partial<ComponentDoc>,
    value?: string,
    valueKind: "auto" | "uri" | "literal" = "auto",
  ): Promise<{ payload: RenderPayload }> {
    return this.request("POST", "/api/preview", {
      endpoint,
      component,
      value,
      value_kind: valueKind,
    });
  }

  sections(): Promise<SiteIndex> {
    return this.request("GET", "/api/sections");
  }

  storyExportUrl(id: string, format: "html" | "pdf" | "json", live = false): string {
    const policy = live ? "&policy=live" : "";
    return `${this.base}/api/stories/${encodeURIComponent(id)}/export?format=${format}${policy}`;
  }

  componentExportUrl(storyId: string, componentId: string, format: "csv" | "svg"): string {
    return (
      `${this.base}/api/stories/${encodeURIComponent(storyId)}` +
      `/components/${encodeURIComponent(componentId)}/export?format=${format}`
    );
  }

  embedSnippet(storyId: string, componentId: string): string {
    const src = `${this.base}/embed/${encodeURIComponent(storyId)}/${encodeURIComponent(componentId)}`;
    return (
      `<iframe src="${src}" sandbox="allow-scripts" loading="lazy" ` +
      `width="100%" height="420" style="border:0" title="story component"></iframe>`
    );
  }

  async fetchComponentExport(
    storyId: string, componentId: string, format: "csv" | "svg",
  ): Promise<Blob> {
    const response = await fetch(this.componentExportUrl(storyId, componentId, format), {
      headers: this.headers(false),
    });
    if (!response.ok) {
      throw new ApiError(response.status, { error: `http_${response.status}` });
    }
    return response.blob();
  }
}
