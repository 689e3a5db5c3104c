import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { Rescorer } from "../src/rescore.js";
import { neshanSample } from "../src/sample.js";
import { initialState, Store } from "../src/store.js";
import type { ScoreRequest } from "../src/types.js";

function jsonResponse(payload: unknown, status = 200): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

const emptyScore = { engine_version: "e", preset_version: "p", reports: [] };

describe("debounced rescoring", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("collapses a burst of edits into one request", async () => {
    const calls: ScoreRequest[] = [];
    const api = new ApiClient("", async (_url, init) => {
      calls.push(JSON.parse(init!.body as string));
      return jsonResponse(emptyScore);
    });
    const store = new Store(initialState(neshanSample(), 0.008656));
    const rescorer = new Rescorer(store, api, 250);

    rescorer.trigger();
    rescorer.trigger();
    rescorer.trigger();
    expect(calls).toHaveLength(0);
    await vi.advanceTimersByTimeAsync(249);
    expect(calls).toHaveLength(0);
    await vi.advanceTimersByTimeAsync(1);
    expect(calls).toHaveLength(1);
  });

  it("a later edit restarts the quiet period", async () => {
    const calls: ScoreRequest[] = [];
    const api = new ApiClient("", async (_url, init) => {
      calls.push(JSON.parse(init!.body as string));
      return jsonResponse(emptyScore);
    });
    const store = new Store(initialState(neshanSample(), 0.008656));
    const rescorer = new Rescorer(store, api, 250);

    rescorer.trigger();
    await vi.advanceTimersByTimeAsync(200);
    rescorer.trigger();
    await vi.advanceTimersByTimeAsync(200);
    expect(calls).toHaveLength(0);
    await vi.advanceTimersByTimeAsync(50);
    expect(calls).toHaveLength(1);
  });

  it("sends the current state, not the state at trigger time", async () => {
    const calls: ScoreRequest[] = [];
    const api = new ApiClient("", async (_url, init) => {
      calls.push(JSON.parse(init!.body as string));
      return jsonResponse(emptyScore);
    });
    const store = new Store(initialState(neshanSample(), 0.008656));
    const rescorer = new Rescorer(store, api, 250);

    rescorer.trigger();
    store.setPrevalence(0);
    await vi.advanceTimersByTimeAsync(250);
    expect(calls[0]!.prevalence).toBe(0);
  });

  it("skips the request entirely while drafts are invalid", async () => {
    let calls = 0;
    const api = new ApiClient("", async () => {
      calls += 1;
      return jsonResponse(emptyScore);
    });
    const store = new Store(initialState([], 0.008656));
    const rescorer = new Rescorer(store, api, 250);
    rescorer.trigger();
    await vi.advanceTimersByTimeAsync(250);
    expect(calls).toBe(0);
  });
});

describe("failure handling", () => {
  it("network failure marks the store offline but keeps drafts editable", async () => {
    const api = new ApiClient("", async () => {
      throw new TypeError("fetch failed");
    });
    const store = new Store(initialState(neshanSample(), 0.008656));
    const rescorer = new Rescorer(store, api, 0);
    await rescorer.scoreNow();
    expect(store.state.status).toBe("offline");
    store.updateSegment(0, 0, { value: 50 });
    expect(store.state.drafts[0]!.segments[0]!.value).toBe(50);
  });

  it("service-side rejection surfaces as an error with the field message", async () => {
    const api = new ApiClient("", async () =>
      jsonResponse({ errors: [{ field: "routes", message: "no routes" }] }, 400),
    );
    const store = new Store(initialState(neshanSample(), 0.008656));
    const rescorer = new Rescorer(store, api, 0);
    await rescorer.scoreNow();
    expect(store.state.status).toBe("error");
    expect(store.state.errorMessage).toMatch(/routes/);
  });
});
