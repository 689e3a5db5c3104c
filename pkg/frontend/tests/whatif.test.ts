// What-if edits checked against captured service responses: swapping a
// city-bus leg for BRT lowers the total, and reordering legs does not
// change it (beyond float round-off), exactly as the service reports.

import { describe, expect, it } from "vitest";

import variants from "../fixtures/route2_variants.json";
import type { ScoreResponse } from "../src/types.js";

const byId = Object.fromEntries(
  (variants as ScoreResponse).reports.map((r) => [r.route_id, r.total]),
);

describe("what-if edits on the walk + city-bus route", () => {
  it("swapping the bus leg for BRT lowers the total", () => {
    expect(byId["neshan-2-brt"]!).toBeLessThan(byId["neshan-2"]!);
  });

  it("the service ranks the BRT variant above the bus original", () => {
    const ids = (variants as ScoreResponse).reports.map((r) => r.route_id);
    expect(ids.indexOf("neshan-2-brt")).toBeLessThan(ids.indexOf("neshan-2"));
  });

  it("reversing the legs leaves the total unchanged", () => {
    expect(byId["neshan-2-reversed"]!).toBeCloseTo(byId["neshan-2"]!, 12);
  });
});
