// UI/engine agreement: everything the console displays for a model state
// must equal the API payload for it -- no client-side recomputation. The
// fixtures were captured from the real backend (tools/make_fixtures.py).

import { describe, expect, it } from "vitest";

import { inputsChart, modelChart, predictionsChart, scheduleChart } from "../src/charts.js";
import {
  canStepBack,
  canStepForward,
  frameReadout,
  initOverlay,
  renderCharts,
  stepDay,
  stepFrame,
  withDaySeries,
} from "../src/frames.js";
import { needleAngle, renderGauge, segmentIndex } from "../src/gauge.js";
import type { FramesPayload, ProfilePayload, SeriesPayload } from "../src/types.js";

import framesFixture from "./fixtures/frames.json";
import profilesFixture from "./fixtures/profiles.json";
import seriesFixture from "./fixtures/series.json";

const profiles = profilesFixture as unknown as ProfilePayload[];
const frames = framesFixture as unknown as FramesPayload;
const series = seriesFixture as unknown as { day1: SeriesPayload; day2: SeriesPayload };

describe("gauge agreement for 20 random model states", () => {
  it("renders exactly the segment the API reported", () => {
    expect(profiles.length).toBe(20);
    for (const profile of profiles) {
      const svg = renderGauge(profile.gauge);
      expect(svg).toContain(`aria-label="price sensitivity: ${profile.gauge.segment}"`);
      if (profile.gauge.segment === "Undefined") {
        expect(svg).not.toContain("needle");
        expect(segmentIndex(profile.gauge.segment)).toBe(-1);
      } else {
        const index = segmentIndex(profile.gauge.segment);
        expect(index).toBeGreaterThanOrEqual(0);
        // The needle points inside the reported segment's 30-degree arc.
        const angle = needleAngle(profile.gauge)!;
        expect(angle).toBeGreaterThanOrEqual(index * 30);
        expect(angle).toBeLessThanOrEqual((index + 1) * 30);
        // The active segment is the one the API named, verbatim.
        const active = svg.match(/<path[^>]*class="active"/g) ?? [];
        expect(active.length).toBe(1);
      }
    }
  });

  it("plots band charts purely from payload numbers", () => {
    for (const profile of profiles) {
      const once = predictionsChart(profile.band.prices, profile.band);
      const again = predictionsChart(
        structuredClone(profile.band.prices),
        structuredClone(profile.band)
      );
      expect(once).toBe(again); // pure function of the payload
    }
  });
});

describe("frame stepping", () => {
  it("displays the model the API reports for frame k", () => {
    let state = initOverlay(frames, ["2023-01-17", "2023-01-18"], "2023-01-17");
    // walk fully back, then forward through every frame
    while (canStepBack(state)) state = stepFrame(state, -1);
    expect(state.frameIndex).toBe(0);
    for (let k = 0; k < frames.frames.length; k += 1) {
      const readout = frameReadout(state);
      const payload = frames.frames[k];
      expect(readout.index).toBe(payload.index);
      expect(readout.bias).toBe(payload.model.mean[0]);
      expect(readout.slope).toBe(payload.model.mean[1]);
      expect(readout.inputCount).toBe(payload.model.input_count);
      expect(readout.gaugeSegment).toBe(payload.gauge.segment);
      expect(readout.inputs).toEqual(payload.inputs);
      if (canStepForward(state)) state = stepFrame(state, 1);
    }
    expect(canStepForward(state)).toBe(false);
  });

  it("disables backward stepping at frame 0", () => {
    let state = initOverlay(frames, ["2023-01-17"], "2023-01-17");
    while (canStepBack(state)) state = stepFrame(state, -1);
    expect(canStepBack(state)).toBe(false);
    expect(stepFrame(state, -1)).toBe(state); // no-op, not an error
  });

  it("navigating fully back shows the starting model of the replay", () => {
    let state = initOverlay(frames, ["2023-01-17"], "2023-01-17");
    while (canStepBack(state)) state = stepFrame(state, -1);
    expect(frameReadout(state).index).toBe(0);
    expect(frameReadout(state).inputs).toEqual([]);
  });
});

describe("day stepping", () => {
  it("refreshes only chart 4", () => {
    let state = initOverlay(frames, ["2023-01-17", "2023-01-18"], "2023-01-17");
    state = withDaySeries(state, series.day1);
    const before = renderCharts(state);

    state = stepDay(state, 1);
    state = withDaySeries(state, series.day2);
    const after = renderCharts(state);

    expect(after.chart1).toBe(before.chart1);
    expect(after.chart2).toBe(before.chart2);
    expect(after.chart3).toBe(before.chart3);
    expect(after.chart4).not.toBe(before.chart4);
  });

  it("frame stepping leaves chart 4 untouched", () => {
    let state = initOverlay(frames, ["2023-01-17"], "2023-01-17");
    state = withDaySeries(state, series.day1);
    const before = renderCharts(state).chart4;
    state = stepFrame(state, -1);
    expect(renderCharts(state).chart4).toBe(before);
  });
});

describe("chart renderers are deterministic payload functions", () => {
  it("same payload, same svg", () => {
    const frame = frames.frames[frames.frames.length - 1];
    expect(inputsChart(frame.inputs)).toBe(inputsChart(structuredClone(frame.inputs)));
    expect(modelChart(frame.ellipse)).toBe(modelChart(structuredClone(frame.ellipse)));
    expect(scheduleChart(series.day1.points)).toBe(scheduleChart(structuredClone(series.day1.points)));
  });
});
