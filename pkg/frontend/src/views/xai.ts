// The replay overlay: four charts that step through the profile's input
// history in lockstep, plus day stepping that only refreshes chart 4.

import type { ApiClient } from "../client.js";
import {
  OverlayState,
  canStepBack,
  canStepDay,
  canStepForward,
  frameReadout,
  initOverlay,
  renderCharts,
  stepDay,
  stepFrame,
  withDaySeries,
} from "../frames.js";
import { renderGauge } from "../gauge.js";
import { currentFrame } from "../frames.js";

export class XaiOverlay {
  private state: OverlayState | null = null;
  private tooltips: string[] = [];

  constructor(private root: HTMLElement, private api: ApiClient) {
    this.root.addEventListener("click", (event) => this.onClick(event));
  }

  async open(profile: string): Promise<void> {
    const [frames, days, tooltips] = await Promise.all([
      this.api.getFrames(profile),
      this.api.getPriceDays(),
      this.api.getTooltips(),
    ]);
    this.tooltips = tooltips.tooltips;
    const today = new Date().toISOString().slice(0, 10);
    this.state = initOverlay(frames, days.days, today);
    this.render();
    await this.loadDay();
  }

  close(): void {
    this.state = null;
    this.render();
  }

  private async loadDay(): Promise<void> {
    if (!this.state) return;
    const day = this.state.days[this.state.dayIndex];
    if (!day) return;
    const series = await this.api.getScheduleSeries(this.state.profile, day);
    if (this.state) {
      this.state = withDaySeries(this.state, series);
      this.render();
    }
  }

  private onClick(event: Event): void {
    const target = event.target as HTMLElement;
    const action = target.dataset.action;
    if (!action || !this.state) return;
    if (action === "close") {
      this.close();
      return;
    }
    if (action === "frame-back") this.state = stepFrame(this.state, -1);
    if (action === "frame-forward") this.state = stepFrame(this.state, 1);
    if (action === "day-back" || action === "day-forward") {
      this.state = stepDay(this.state, action === "day-back" ? -1 : 1);
      this.render();
      void this.loadDay();
      return;
    }
    this.render();
  }

  private render(): void {
    if (!this.state) {
      this.root.innerHTML = "";
      this.root.classList.add("hidden");
      return;
    }
    this.root.classList.remove("hidden");
    const charts = renderCharts(this.state);
    const readout = frameReadout(this.state);
    const day = this.state.days[this.state.dayIndex] ?? "–";
    const tooltip = (i: number) =>
      this.tooltips[i] ? `<span class="tooltip" title="${escapeAttr(this.tooltips[i])}">ⓘ</span>` : "";
    this.root.innerHTML = `<div class="overlay"><div class="overlay-card wide xai">
      <div class="page-heading">
        <h3>${this.state.profile} — after ${readout.inputCount} input(s)</h3>
        <span class="spacer"></span>
        <button data-action="close">Close</button>
      </div>
      <div class="xai-grid">
        <figure><figcaption>1 · your inputs ${tooltip(0)}</figcaption>${charts.chart1}</figure>
        <figure><figcaption>2 · the AI model ${tooltip(1)}</figcaption>
          ${charts.chart2}
          <div class="mini-gauge">${renderGauge(currentFrame(this.state).gauge)}</div>
        </figure>
        <figure><figcaption>3 · its predictions ${tooltip(2)}</figcaption>${charts.chart3}</figure>
        <figure><figcaption>4 · setpoint schedule for ${day} ${tooltip(3)}</figcaption>${charts.chart4}</figure>
      </div>
      <div class="overlay-actions spread">
        <span>
          <button data-action="frame-back" ${canStepBack(this.state) ? "" : "disabled"}>◀ input</button>
          <button data-action="frame-forward" ${canStepForward(this.state) ? "" : "disabled"}>input ▶</button>
          <span class="caption">frame ${readout.index} of ${this.state.frames.length - 1}</span>
        </span>
        <span>
          <button data-action="day-back" ${canStepDay(this.state, -1) ? "" : "disabled"}>◀ day</button>
          <button data-action="day-forward" ${canStepDay(this.state, 1) ? "" : "disabled"}>day ▶</button>
        </span>
      </div>
    </div></div>`;
  }
}

function escapeAttr(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/"/g, "&quot;").replace(/</g, "&lt;");
}
