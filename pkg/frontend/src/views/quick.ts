// Quick access panel: heating section (temperature, setpoint slider, valve,
// profile, mode toggle) on top, energy section (price + summary) below.

import type { ApiClient } from "../client.js";
import { ConfirmGate } from "../confirm.js";
import type { StatePayload } from "../types.js";

export class QuickPanel {
  private state: StatePayload | null = null;
  private pendingSlider: number | null = null;
  private summaryWindow = "day";

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
    private gate: ConfirmGate,
    private refresh: () => void
  ) {
    this.root.addEventListener("input", (event) => this.onInput(event));
    this.root.addEventListener("click", (event) => this.onClick(event));
    this.root.addEventListener("change", (event) => this.onChange(event));
  }

  update(state: StatePayload): void {
    this.state = state;
    this.render();
  }

  private onInput(event: Event): void {
    const target = event.target as HTMLInputElement;
    if (target.id === "setpoint-slider") {
      this.pendingSlider = Number(target.value);
      this.render();
    }
  }

  private onChange(event: Event): void {
    const target = event.target as HTMLSelectElement;
    if (target.id === "summary-window") {
      this.summaryWindow = target.value;
      this.refresh();
    }
  }

  private onClick(event: Event): void {
    const target = event.target as HTMLElement;
    const action = target.dataset.action;
    if (!action) return;
    if (action === "slider-save") this.requestSliderSave();
    else if (action === "slider-cancel") this.cancelSlider();
    else if (action === "mode") this.requestMode(target.dataset.mode!);
    else if (action === "cancel-override") this.requestMode("auto");
  }

  // Intent entry points (also driven by the click dispatch above). Every
  // mutation is staged on the confirmation gate, never fired directly.

  moveSlider(value: number): void {
    this.pendingSlider = value;
    this.render();
  }

  requestSliderSave(): void {
    if (this.pendingSlider === null) return;
    const value = this.pendingSlider;
    this.gate.stage({
      kind: "setpoint",
      label: `Set the target temperature to ${value}°C?`,
      execute: async () => {
        await this.api.putSetpoint(value);
        this.pendingSlider = null;
        this.refresh();
      },
    });
  }

  cancelSlider(): void {
    this.pendingSlider = null;
    this.render();
  }

  requestMode(mode: string): void {
    const label =
      mode === "auto" ? "Return the system to auto mode?" : `Switch the system to ${mode} mode?`;
    this.gate.stage({
      kind: "mode",
      label,
      execute: async () => {
        await this.api.putMode(mode);
        this.refresh();
      },
    });
  }

  get summary(): string {
    return this.summaryWindow;
  }

  private render(): void {
    const s = this.state;
    if (!s) {
      this.root.innerHTML = `<p class="placeholder">connecting…</p>`;
      return;
    }
    const override = s.mode === "override";
    const forced = s.mode === "on" || s.mode === "off";
    const sliderValue = this.pendingSlider ?? s.setpoint ?? 19;
    const expires = s.mode_expires_at
      ? `<div class="mode-expiry">until ${s.mode_expires_at.slice(11, 16)}</div>`
      : "";
    const sliderControls =
      this.pendingSlider !== null && this.pendingSlider !== s.setpoint
        ? `<button data-action="slider-save" class="primary">Yes</button>
           <button data-action="slider-cancel">Cancel</button>`
        : "";
    const summary = s.price_summary
      ? `min ${s.price_summary.min.toFixed(1)} · max ${s.price_summary.max.toFixed(1)} · avg ${s.price_summary.mean.toFixed(1)}`
      : "no data";
    this.root.innerHTML = `
      <section class="panel-block">
        <h3>Heating</h3>
        <div class="panel-grid">
          <div>
            <div class="big-number">${s.temperature.toFixed(1)}°C</div>
            <div class="caption">current temperature</div>
            ${override ? `<div class="override-tag">Override active</div>` : ""}
          </div>
          <div>
            <div class="slider-row ${forced ? "disabled" : ""}">
              <input id="setpoint-slider" type="range" min="7" max="30" step="0.5"
                     value="${sliderValue}" ${forced ? "disabled" : ""}
                     class="${override ? "override" : ""}">
              <div class="slider-value">${forced ? "—" : `${sliderValue.toFixed(1)}°C`}</div>
            </div>
            <div class="confirm-row">${sliderControls}</div>
          </div>
          <div>
            <div>valve <strong>${s.valve_open ? "open" : "closed"}</strong></div>
            <div>profile <strong>${s.active_profile}</strong></div>
          </div>
          <div>
            <div class="mode-toggle">
              ${["on", "off", "auto"]
                .map(
                  (mode) =>
                    `<button data-action="mode" data-mode="${mode}"
                       class="${s.mode === mode ? "selected" : ""} ${mode === "auto" && override ? "override" : ""}">${mode}</button>`
                )
                .join("")}
            </div>
            ${override ? `<button data-action="cancel-override" class="cancel-override">Cancel</button>` : ""}
            ${expires}
          </div>
        </div>
      </section>
      <section class="panel-block">
        <h3>Energy</h3>
        <div class="big-number">${s.price === null ? "—" : `${s.price.toFixed(1)}p/kWh`}</div>
        <div class="caption">current price</div>
        <div class="summary-row">
          <select id="summary-window">
            ${["day", "week", "month"]
              .map((w) => `<option value="${w}" ${w === this.summaryWindow ? "selected" : ""}>${w}</option>`)
              .join("")}
          </select>
          <span>${summary}</span>
        </div>
      </section>`;
  }
}
