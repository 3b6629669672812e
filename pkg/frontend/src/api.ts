/** Thin HTTP client for the design service. */

import type { DesignRequest, DesignResponse, ErrorBody } from "./types.js";

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly details: unknown;

  constructor(status: number, code: string, message: string, details: unknown) {
    super(message);
    this.name = "ApiError";
    this.status = status;
    this.code = code;
    this.details = details;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function errorFromResponse(response: Response): Promise<ApiError> {
  let body: ErrorBody | null = null;
  try {
    body = (await response.json()) as ErrorBody;
  } catch {
    body = null;
  }
  if (body && typeof body === "object" && body.error) {
    const { code, message, details } = body.error;
    return new ApiError(response.status, code, message, details);
  }
  return new ApiError(response.status, "http_error", `HTTP ${response.status}`, null);
}

export class DesignClient {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchLike;
  private inflight: AbortController | null = null;

  constructor(baseUrl = "", fetchFn: FetchLike = fetch) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  /**
   * Submit a design request. A new call aborts any request still in
   * flight, so a slow response can never overwrite a newer one.
   */
  async design(request: DesignRequest): Promise<DesignResponse> {
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    try {
      const response = await this.fetchFn(`${this.baseUrl}/api/v1/design`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(request),
        signal: controller.signal,
      });
      if (!response.ok) {
        throw await errorFromResponse(response);
      }
      return (await response.json()) as DesignResponse;
    } finally {
      if (this.inflight === controller) {
        this.inflight = null;
      }
    }
  }

  async health(): Promise<Record<string, unknown>> {
    const response = await this.fetchFn(`${this.baseUrl}/healthz`);
    if (!response.ok) {
      throw await errorFromResponse(response);
    }
    return (await response.json()) as Record<string, unknown>;
  }
}
