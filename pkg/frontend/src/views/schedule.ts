// Schedule page: one row per weekday of coloured profile blocks, a kebab
// menu with Edit / Copy / Clear, the edit overlay, and the timeslot overlay
// (prices + setpoints for a clicked timeslot).

import { scheduleChart } from "../charts.js";
import type { ApiClient } from "../client.js";
import { ConfirmGate } from "../confirm.js";
import type { SchedulePayload, ScheduleSlotPayload, SeriesPayload } from "../types.js";
import { PROFILES, WEEKDAYS } from "../types.js";

const PROFILE_COLORS: Record<string, string> = {
  Nights: "#4a5899",
  Mornings: "#d9a036",
  Weekdays: "#4f9d69",
  Evenings: "#b36bb8",
  Weekends: "#c96f4a",
};

const QUARTERS: string[] = [];
for (let m = 0; m <= 24 * 60; m += 15) {
  QUARTERS.push(`${String(Math.floor(m / 60)).padStart(2, "0")}:${String(m % 60).padStart(2, "0")}`);
}

export class SchedulePage {
  private schedule: SchedulePayload | null = null;
  private editing: { day: string; slots: ScheduleSlotPayload[] } | null = null;
  private copySource: string | null = null;
  private timeslot: { day: string; slot: ScheduleSlotPayload; series: SeriesPayload | null } | null = null;
  private today = "";

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
    private gate: ConfirmGate,
    private refresh: () => void
  ) {
    this.root.addEventListener("click", (event) => this.onClick(event));
    this.root.addEventListener("change", (event) => this.onChange(event));
  }

  setToday(day: string): void {
    if (day !== this.today) {
      this.today = day;
      this.render();
    }
  }

  update(schedule: SchedulePayload): void {
    this.schedule = schedule;
    this.render();
  }

  private onClick(event: Event): void {
    const target = event.target as HTMLElement;
    const action = target.dataset.action;
    if (!action) return;
    const day = target.dataset.day ?? "";
    if (action === "edit") {
      this.beginEdit(day);
    } else if (action === "copy") {
      this.copySource = this.copySource === day ? null : day;
    } else if (action === "paste" && this.copySource) {
      this.requestPaste(this.copySource, day);
    } else if (action === "clear") {
      this.requestClear(day);
    } else if (action === "slot") {
      const index = Number(target.dataset.index);
      const slot = this.schedule?.[day]?.[index];
      if (slot) {
        this.timeslot = { day, slot, series: null };
        this.render();
        this.api
          .getTimeslotSeries(day, slot.start)
          .then((series) => {
            if (this.timeslot && this.timeslot.slot === slot) {
              this.timeslot.series = series;
              this.render();
            }
          })
          .catch(() => undefined);
      }
    } else if (action === "close-timeslot") {
      this.timeslot = null;
    } else if (action === "edit-add" && this.editing) {
      const last = this.editing.slots[this.editing.slots.length - 1];
      if (last && last.end !== last.start) {
        const mid = QUARTERS[Math.max(QUARTERS.indexOf(last.start) + 1, 0)];
        this.editing.slots.push({ start: mid, end: last.end, profile: last.profile });
        last.end = mid;
      }
    } else if (action === "edit-remove" && this.editing) {
      const index = Number(target.dataset.index);
      if (this.editing.slots.length > 1) {
        const removed = this.editing.slots.splice(index, 1)[0];
        const neighbour = this.editing.slots[Math.max(index - 1, 0)];
        if (index > 0) neighbour.end = removed.end;
        else this.editing.slots[0].start = removed.start;
      }
    } else if (action === "edit-save" && this.editing) {
      this.requestSaveEdit();
    } else if (action === "edit-cancel") {
      this.editing = null;
    }
    this.render();
  }

  // Intent entry points; mutations always go through the confirmation gate.

  beginEdit(day: string): void {
    this.editing = { day, slots: (this.schedule?.[day] ?? []).map((s) => ({ ...s })) };
    this.copySource = null;
    this.render();
  }

  get editingSlots(): ScheduleSlotPayload[] | null {
    return this.editing?.slots ?? null;
  }

  requestSaveEdit(): void {
    if (!this.editing) return;
    const { day, slots } = this.editing;
    this.gate.stage({
      kind: "schedule",
      label: `Save the new ${day} schedule?`,
      execute: async () => {
        await this.api.putDay(day, slots);
        this.editing = null;
        this.refresh();
      },
    });
  }

  requestPaste(fromDay: string, toDay: string): void {
    this.gate.stage({
      kind: "schedule",
      label: `Copy ${fromDay} onto ${toDay}?`,
      execute: async () => {
        await this.api.copyDay(fromDay, toDay);
        this.copySource = null;
        this.refresh();
      },
    });
  }

  requestClear(day: string): void {
    this.gate.stage({
      kind: "schedule",
      label: `Clear ${day} back to a single all-day Nights timeslot?`,
      execute: async () => {
        await this.api.clearDay(day);
        this.refresh();
      },
    });
  }

  private onChange(event: Event): void {
    const target = event.target as HTMLSelectElement;
    if (!this.editing) return;
    const index = Number(target.dataset.index);
    const field = target.dataset.field;
    const slot = this.editing.slots[index];
    if (!slot || !field) return;
    if (field === "profile") slot.profile = target.value;
    if (field === "start") slot.start = target.value;
    if (field === "end") {
      slot.end = target.value;
      const next = this.editing.slots[index + 1];
      if (next) next.start = target.value;
    }
    this.render();
  }

  private dayRow(day: string): string {
    const slots = this.schedule?.[day] ?? [];
    const blocks = slots
      .map((slot, i) => {
        const startMin = toMinutes(slot.start);
        const endMin = toMinutes(slot.end);
        const left = (startMin / 1440) * 100;
        const width = ((endMin - startMin) / 1440) * 100;
        return `<div class="slot" data-action="slot" data-day="${day}" data-index="${i}"
          title="${slot.start}–${slot.end} ${slot.profile}"
          style="left:${left.toFixed(2)}%;width:${width.toFixed(2)}%;background:${PROFILE_COLORS[slot.profile]}"></div>`;
      })
      .join("");
    const paste =
      this.copySource && this.copySource !== day
        ? `<button data-action="paste" data-day="${day}">Paste</button>`
        : "";
    return `<div class="day-row ${day === this.today ? "today" : ""}">
      <div class="day-name">${day}</div>
      <div class="day-track">${blocks}</div>
      <div class="day-menu">
        <button data-action="edit" data-day="${day}">Edit</button>
        <button data-action="copy" data-day="${day}" class="${this.copySource === day ? "selected" : ""}">Copy</button>
        <button data-action="clear" data-day="${day}">Clear</button>
        ${paste}
      </div>
    </div>`;
  }

  private editOverlay(): string {
    if (!this.editing) return "";
    const rows = this.editing.slots
      .map((slot, i) => {
        const options = (values: string[], selected: string) =>
          values.map((v) => `<option ${v === selected ? "selected" : ""}>${v}</option>`).join("");
        return `<div class="edit-row">
          <select data-field="start" data-index="${i}" ${i === 0 ? "disabled" : ""}>${options(QUARTERS.slice(0, -1), slot.start)}</select>
          <span>–</span>
          <select data-field="end" data-index="${i}" ${i === this.editing!.slots.length - 1 ? "disabled" : ""}>${options(QUARTERS.slice(1), slot.end)}</select>
          <select data-field="profile" data-index="${i}">${options([...PROFILES], slot.profile)}</select>
          <button data-action="edit-remove" data-index="${i}" title="merge into the previous timeslot">✕</button>
        </div>`;
      })
      .join("");
    return `<div class="overlay"><div class="overlay-card">
      <h3>Edit ${this.editing.day}</h3>
      ${rows}
      <div class="overlay-actions">
        <button data-action="edit-add">Add timeslot</button>
        <button data-action="edit-save" class="primary">Save</button>
        <button data-action="edit-cancel">Cancel</button>
      </div>
    </div></div>`;
  }

  private timeslotOverlay(): string {
    if (!this.timeslot) return "";
    const { day, slot, series } = this.timeslot;
    const chart = series
      ? scheduleChart(series.points)
      : `<p class="placeholder">loading…</p>`;
    const heading = series ? `${day} ${slot.start}–${slot.end} · ${slot.profile} · ${series.day}` : `${day} ${slot.start}–${slot.end}`;
    return `<div class="overlay"><div class="overlay-card wide">
      <h3>Timeslot — ${heading}</h3>
      <div class="chart">${chart}</div>
      <p class="caption">Upcoming prices for this timeslot with the setpoints its profile model would publish.</p>
      <div class="overlay-actions"><button data-action="close-timeslot">Close</button></div>
    </div></div>`;
  }

  private render(): void {
    if (!this.schedule) {
      this.root.innerHTML = `<p class="placeholder">loading schedule…</p>`;
      return;
    }
    const legend = Object.entries(PROFILE_COLORS)
      .map(([name, color]) => `<span class="legend-item"><span class="swatch" style="background:${color}"></span>${name}</span>`)
      .join("");
    this.root.innerHTML = `
      <div class="page-heading"><h2>Schedule</h2><span class="caption">today is ${this.today}</span></div>
      <div class="legend-row">${legend}</div>
      ${WEEKDAYS.map((day) => this.dayRow(day)).join("")}
      ${this.editOverlay()}
      ${this.timeslotOverlay()}`;
  }
}

function toMinutes(text: string): number {
  const [h, m] = text.split(":").map(Number);
  return h * 60 + m;
}
