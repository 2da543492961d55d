// Profiles page: dropdown for the five profiles (pre-selected to the active
// one), the prediction-mean chart, a text summary of the preferred
// temperature, the sensitivity dial, reset buttons, and the link into the
// replay overlay.

import { predictionsChart } from "../charts.js";
import type { ApiClient } from "../client.js";
import { ConfirmGate } from "../confirm.js";
import { renderGauge } from "../gauge.js";
import type { ProfilePayload } from "../types.js";
import { PROFILES } from "../types.js";

export class ProfilesPage {
  private selected: string | null = null;
  private payload: ProfilePayload | null = null;

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
    private gate: ConfirmGate,
    private openOverlay: (profile: string) => void
  ) {
    this.root.addEventListener("click", (event) => this.onClick(event));
    this.root.addEventListener("change", (event) => this.onChange(event));
  }

  async show(activeProfile: string): Promise<void> {
    if (this.selected === null) this.selected = activeProfile;
    await this.reload();
  }

  async reload(): Promise<void> {
    if (!this.selected) return;
    this.payload = await this.api.getProfile(this.selected);
    this.render();
  }

  private onChange(event: Event): void {
    const target = event.target as HTMLSelectElement;
    if (target.id === "profile-select") {
      this.selected = target.value;
      void this.reload();
    }
  }

  private onClick(event: Event): void {
    const target = event.target as HTMLElement;
    const action = target.dataset.action;
    if (!action || !this.selected) return;
    if (action === "reset-one") this.requestReset();
    else if (action === "reset-all") this.requestResetAll();
    else if (action === "open-overlay") this.openOverlay(this.selected);
  }

  // Intent entry points; resets are staged, never fired directly.

  requestReset(): void {
    if (!this.selected) return;
    const profile = this.selected;
    this.gate.stage({
      kind: "reset",
      label: `Reset profile ${profile} to the default model?`,
      execute: async () => {
        await this.api.resetProfile(profile);
        await this.reload();
      },
    });
  }

  requestResetAll(): void {
    this.gate.stage({
      kind: "reset-all",
      label: "Reset all five profiles to the default model?",
      execute: async () => {
        await this.api.resetAll();
        await this.reload();
      },
    });
  }

  private render(): void {
    const p = this.payload;
    if (!p) {
      this.root.innerHTML = `<p class="placeholder">loading profile…</p>`;
      return;
    }
    const meanOnly = { mean: p.band.mean, lower: p.band.mean, upper: p.band.mean };
    this.root.innerHTML = `
      <div class="page-heading">
        <h2>Profiles</h2>
        <select id="profile-select">
          ${PROFILES.map((name) => `<option ${name === this.selected ? "selected" : ""}>${name}</option>`).join("")}
        </select>
        <span class="spacer"></span>
        <button data-action="reset-one">Reset profile</button>
        <button data-action="reset-all">Reset all profiles</button>
      </div>
      <div class="profile-grid">
        <div class="chart">${predictionsChart(p.band.prices, meanOnly)}</div>
        <div class="profile-side">
          <p>The AI believes your preferred temperature (if energy were free) is
             <strong>${p.preferred_temperature.toFixed(1)}°C</strong>
             after <strong>${p.model.input_count}</strong> input(s).</p>
          <div class="gauge">${renderGauge(p.gauge)}</div>
          <p class="caption">price sensitivity</p>
          <a href="#" data-action="open-overlay">Want to know more about this profile?</a>
        </div>
      </div>`;
  }
}
