// Dial rendering details: fixed flat colours, needle placement per segment,
// hidden needle in the Undefined state.

import { describe, expect, it } from "vitest";

import { needleAngle, renderGauge } from "../src/gauge.js";
import type { GaugePayload } from "../src/types.js";

function gauge(segment: string, value = 0.1, upper = 0.28): GaugePayload {
  return { segment, value, upper_bound: upper };
}

describe("renderGauge", () => {
  it("draws six flat segments: red, four cyan, red", () => {
    const svg = renderGauge(gauge("High", 0.22));
    const fills = [...svg.matchAll(/fill="(#[0-9a-f]{6})"/g)].map((m) => m[1]).slice(0, 6);
    expect(fills).toEqual(["#d64545", "#35b6c9", "#35b6c9", "#35b6c9", "#35b6c9", "#d64545"]);
    expect(svg).not.toContain("gradient");
  });

  it("negative sensitivity points into the left red segment", () => {
    const angle = needleAngle(gauge("Negative", -0.05))!;
    expect(angle).toBeGreaterThanOrEqual(0);
    expect(angle).toBeLessThan(30);
  });

  it("very high sensitivity points into the right red segment", () => {
    const angle = needleAngle(gauge("Very high", 0.9))!;
    expect(angle).toBeGreaterThan(150);
    expect(angle).toBeLessThanOrEqual(180);
  });

  it("the typical range spreads across the four cyan segments", () => {
    const low = needleAngle(gauge("Very low", 0.01))!;
    const high = needleAngle(gauge("High", 0.27))!;
    expect(low).toBeGreaterThanOrEqual(30);
    expect(high).toBeLessThanOrEqual(150);
    expect(low).toBeLessThan(high);
  });

  it("hides the needle and label when undefined", () => {
    const svg = renderGauge(gauge("Undefined", 0.1, -0.2));
    expect(needleAngle(gauge("Undefined", 0.1, -0.2))).toBeNull();
    expect(svg).not.toContain("needle");
    expect(svg).toContain('aria-label="price sensitivity: Undefined"');
  });
});
