// View-model for the four-chart replay overlay. Frame stepping moves charts
// 1-3 (and the gauge) in lockstep; day stepping only swaps the data under
// chart 4. Everything displayed is copied out of API payloads.

import { inputsChart, modelChart, predictionsChart, scheduleChart } from "./charts.js";
import type { FramePayload, FramesPayload, SeriesPayload } from "./types.js";

export interface OverlayState {
  profile: string;
  bandPrices: number[];
  frames: FramePayload[];
  frameIndex: number;
  days: string[];
  dayIndex: number;
  daySeries: SeriesPayload | null;
}

export function initOverlay(frames: FramesPayload, days: string[], today: string): OverlayState {
  const dayIndex = Math.max(days.indexOf(today), 0);
  return {
    profile: frames.profile,
    bandPrices: frames.band_prices,
    frames: frames.frames,
    frameIndex: Math.max(frames.frames.length - 1, 0),
    days,
    dayIndex,
    daySeries: null,
  };
}

export function currentFrame(state: OverlayState): FramePayload {
  return state.frames[state.frameIndex];
}

export function canStepBack(state: OverlayState): boolean {
  return state.frameIndex > 0;
}

export function canStepForward(state: OverlayState): boolean {
  return state.frameIndex < state.frames.length - 1;
}

export function stepFrame(state: OverlayState, direction: -1 | 1): OverlayState {
  const next = state.frameIndex + direction;
  if (next < 0 || next >= state.frames.length) return state;
  return { ...state, frameIndex: next };
}

export function canStepDay(state: OverlayState, direction: -1 | 1): boolean {
  const next = state.dayIndex + direction;
  return next >= 0 && next < state.days.length;
}

export function stepDay(state: OverlayState, direction: -1 | 1): OverlayState {
  if (!canStepDay(state, direction)) return state;
  return { ...state, dayIndex: state.dayIndex + direction, daySeries: null };
}

export function withDaySeries(state: OverlayState, series: SeriesPayload): OverlayState {
  return { ...state, daySeries: series };
}

// The displayed numbers for the current frame, verbatim from the payload.
export interface FrameReadout {
  index: number;
  inputCount: number;
  bias: number;
  slope: number;
  gaugeSegment: string;
  inputs: [number, number][];
}

export function frameReadout(state: OverlayState): FrameReadout {
  const frame = currentFrame(state);
  return {
    index: frame.index,
    inputCount: frame.model.input_count,
    bias: frame.model.mean[0],
    slope: frame.model.mean[1],
    gaugeSegment: frame.gauge.segment,
    inputs: frame.inputs,
  };
}

export interface OverlayCharts {
  chart1: string;
  chart2: string;
  chart3: string;
  chart4: string;
}

export function renderCharts(state: OverlayState): OverlayCharts {
  const frame = currentFrame(state);
  return {
    chart1: inputsChart(frame.inputs),
    chart2: modelChart(frame.ellipse),
    chart3: predictionsChart(state.bandPrices, frame.band),
    chart4: state.daySeries
      ? scheduleChart(state.daySeries.points)
      : `<svg viewBox="0 0 340 220"><text class="placeholder" x="170" y="110" text-anchor="middle">loading…</text></svg>`,
  };
}
