import { describe, expect, test } from "vitest";

import { ApiError, DesignClient } from "../src/api.js";
import type { DesignRequest, DesignResponse } from "../src/types.js";
import { loadJson } from "./helpers.js";

const showcase = loadJson<DesignResponse>("./fixtures/showcase_response.json");
const infeasibleBody = loadJson<unknown>("./fixtures/infeasible_response.json");

const REQUEST: DesignRequest = {
  hover_time: 17,
  payload: 0.5,
  thrust_ratio: 0.55,
  rotor_count: 4,
  altitude: 50,
  battery_density: 240,
};

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

interface RecordedCall {
  url: string;
  init?: RequestInit;
}

function recordingFetch(
  calls: RecordedCall[],
  respond: (call: RecordedCall) => Response,
): (url: string, init?: RequestInit) => Promise<Response> {
  return (url, init) => {
    const call: RecordedCall = init === undefined ? { url } : { url, init };
    calls.push(call);
    return Promise.resolve(respond(call));
  };
}

/** A fetch that never settles until its signal aborts it. */
function hangingFetch(): (url: string, init?: RequestInit) => Promise<Response> {
  return (_url, init) =>
    new Promise<Response>((_resolve, reject) => {
      init?.signal?.addEventListener("abort", () => {
        reject(new DOMException("The operation was aborted.", "AbortError"));
      });
    });
}

describe("design client", () => {
  test("posts the request body and parses the response", async () => {
    const calls: RecordedCall[] = [];
    const client = new DesignClient(
      "http://svc",
      recordingFetch(calls, () => jsonResponse(showcase)),
    );
    const response = await client.design(REQUEST);
    expect(response).toEqual(showcase);
    expect(calls).toHaveLength(1);
    expect(calls[0]?.url).toBe("http://svc/api/v1/design");
    expect(calls[0]?.init?.method).toBe("POST");
    expect(JSON.parse(String(calls[0]?.init?.body))).toEqual(REQUEST);
  });

  test("maps service errors onto ApiError", async () => {
    const calls: RecordedCall[] = [];
    const client = new DesignClient(
      "",
      recordingFetch(calls, () => jsonResponse(infeasibleBody, 422)),
    );
    const error = await client.design(REQUEST).catch((e: unknown) => e);
    expect(error).toBeInstanceOf(ApiError);
    const apiError = error as ApiError;
    expect(apiError.status).toBe(422);
    expect(apiError.code).toBe("no_feasible_design");
    expect(apiError.message).toContain("no combination satisfies");
    expect(apiError.details).toHaveProperty("reasons");
  });

  test("non-JSON error bodies still raise a typed error", async () => {
    const calls: RecordedCall[] = [];
    const client = new DesignClient(
      "",
      recordingFetch(
        calls,
        () => new Response("<h1>502</h1>", { status: 502 }),
      ),
    );
    const error = await client.design(REQUEST).catch((e: unknown) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect((error as ApiError).status).toBe(502);
    expect((error as ApiError).code).toBe("http_error");
  });

  test("a newer submission aborts the one in flight", async () => {
    let callCount = 0;
    const hang = hangingFetch();
    const fetchFn = (url: string, init?: RequestInit): Promise<Response> => {
      callCount += 1;
      if (callCount === 1) {
        return hang(url, init);
      }
      return Promise.resolve(jsonResponse(showcase));
    };
    const client = new DesignClient("", fetchFn);

    const stale = client.design(REQUEST);
    const staleOutcome = stale.then(
      () => "resolved",
      (err: unknown) => (err as { name?: string }).name,
    );
    const fresh = await client.design({ ...REQUEST, payload: 0.8 });
    expect(fresh).toEqual(showcase);
    expect(await staleOutcome).toBe("AbortError");
  });

  test("a settled request is not aborted by the next one", async () => {
    const signals: (AbortSignal | null)[] = [];
    const client = new DesignClient("", (url, init) => {
      signals.push(init?.signal ?? null);
      return Promise.resolve(jsonResponse(showcase));
    });
    await client.design(REQUEST);
    await client.design(REQUEST);
    expect(signals).toHaveLength(2);
    expect(signals[0]?.aborted).toBe(false);
    expect(signals[1]?.aborted).toBe(false);
  });

  test("trailing slash in the base URL is tolerated", async () => {
    const calls: RecordedCall[] = [];
    const client = new DesignClient(
      "http://svc/",
      recordingFetch(calls, () => jsonResponse(showcase)),
    );
    await client.design(REQUEST);
    expect(calls[0]?.url).toBe("http://svc/api/v1/design");
  });
});
