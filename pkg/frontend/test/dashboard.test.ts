import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { loadDashboard } from "../src/dashboard.js";
import { stubFetch } from "./helpers.js";

afterEach(() => {
  vi.unstubAllGlobals();
});

const SCORE = {
  item_id: "i1",
  composite: 0.61,
  weightset_id: "abc123",
  dimensions: {
    clarity: { value: 0.7, components: {}, flags: [] },
    tone: { value: 0.5, components: {}, flags: [] },
  },
};

const AGGREGATE = {
  item_id: "i1",
  mean: { clarity: 4 },
  median: { clarity: 4 },
  count: { clarity: 2 },
  normalized_mean: { clarity: 0.75 },
  tag_histogram: { too_technical: 1 },
};

describe("loadDashboard", () => {
  it("arranges service numbers verbatim into rows", async () => {
    stubFetch({
      "GET /health": () => ({
        status: 200,
        body: { v: 1, status: "ok", items: 1, weightset_id: "abc123" },
      }),
      "GET /items": () => ({ status: 200, body: { v: 1, ids: ["i1"] } }),
      "GET /items/i1/score": () => ({ status: 200, body: SCORE }),
      "GET /items/i1/aggregate": () => ({ status: 200, body: AGGREGATE }),
      "GET /agreement/clarity": () => ({
        status: 200,
        body: { v: 1, dimension: "clarity", alpha: 1.0, raters: 2, items: 1 },
      }),
      "GET /agreement/tone": () => ({
        status: 400,
        body: { v: 1, error: "insufficient_overlap" },
      }),
    });
    const data = await loadDashboard(new ApiClient("http://service.test"));
    expect(data.weightsetId).toBe("abc123");
    expect(data.rows).toHaveLength(1);
    const row = data.rows[0]!;
    expect(row.composite).toBe(0.61);
    expect(row.dimensionScores).toEqual({ clarity: 0.7, tone: 0.5 });
    expect(row.humanMean).toEqual({ clarity: 0.75 });
    expect(row.tagHistogram).toEqual({ too_technical: 1 });
    expect(data.agreement.clarity?.alpha).toBe(1.0);
    expect(data.agreement.tone).toBeNull();
  });

  it("handles unrated items (404 aggregate)", async () => {
    stubFetch({
      "GET /health": () => ({
        status: 200,
        body: { v: 1, status: "ok", items: 1, weightset_id: "abc123" },
      }),
      "GET /items": () => ({ status: 200, body: { v: 1, ids: ["i1"] } }),
      "GET /items/i1/score": () => ({ status: 200, body: SCORE }),
      "GET /items/i1/aggregate": () => ({
        status: 404,
        body: { v: 1, error: "no_feedback" },
      }),
      "GET /agreement/clarity": () => ({
        status: 400,
        body: { v: 1, error: "insufficient_overlap" },
      }),
      "GET /agreement/tone": () => ({
        status: 400,
        body: { v: 1, error: "insufficient_overlap" },
      }),
    });
    const data = await loadDashboard(new ApiClient("http://service.test"));
    expect(data.rows[0]!.humanMean).toBeNull();
    expect(data.rows[0]!.tagHistogram).toEqual({});
  });
});
