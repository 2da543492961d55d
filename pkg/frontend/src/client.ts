// Thin typed client over the /v1 API. The transport is injectable so tests
// can record every request without any network.

import type {
  FlashPayload,
  FramesPayload,
  NotificationsPayload,
  ProfilePayload,
  SchedulePayload,
  ScheduleSlotPayload,
  SeriesPayload,
  StatePayload,
} from "./types.js";

export interface Transport {
  request(method: string, path: string, body?: unknown): Promise<unknown>;
}

export class HttpTransport implements Transport {
  constructor(private base: string = "") {}

  async request(method: string, path: string, body?: unknown): Promise<unknown> {
    const response = await fetch(this.base + path, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      const detail = await response.json().catch(() => ({ detail: response.statusText }));
      throw new Error(`${response.status}: ${(detail as { detail?: string }).detail ?? "request failed"}`);
    }
    return response.json();
  }
}

export class ApiClient {
  constructor(private transport: Transport) {}

  getState(summary: string = "day"): Promise<StatePayload> {
    return this.transport.request("GET", `/v1/state?summary=${summary}`) as Promise<StatePayload>;
  }

  putSetpoint(value: number): Promise<unknown> {
    return this.transport.request("PUT", "/v1/setpoint", { value });
  }

  putMode(mode: string): Promise<unknown> {
    return this.transport.request("PUT", "/v1/mode", { mode });
  }

  getSchedule(): Promise<SchedulePayload> {
    return this.transport.request("GET", "/v1/schedule") as Promise<SchedulePayload>;
  }

  putDay(day: string, slots: ScheduleSlotPayload[]): Promise<unknown> {
    return this.transport.request("PUT", `/v1/schedule/${day}`, { slots });
  }

  clearDay(day: string): Promise<unknown> {
    return this.transport.request("POST", `/v1/schedule/${day}/clear`);
  }

  copyDay(fromDay: string, toDay: string): Promise<unknown> {
    return this.transport.request("POST", "/v1/schedule/copy", { from_day: fromDay, to_day: toDay });
  }

  getProfile(name: string): Promise<ProfilePayload> {
    return this.transport.request("GET", `/v1/profiles/${name}`) as Promise<ProfilePayload>;
  }

  resetProfile(name: string): Promise<unknown> {
    return this.transport.request("POST", `/v1/profiles/${name}/reset`);
  }

  resetAll(): Promise<unknown> {
    return this.transport.request("POST", "/v1/profiles/reset-all");
  }

  getNotifications(params: {
    categories?: string[];
    from?: string;
    to?: string;
    page?: number;
    pageSize?: number;
  }): Promise<NotificationsPayload> {
    const query = new URLSearchParams();
    for (const category of params.categories ?? []) query.append("category", category);
    if (params.from) query.set("from", params.from);
    if (params.to) query.set("to", params.to);
    query.set("page", String(params.page ?? 1));
    query.set("page_size", String(params.pageSize ?? 10));
    return this.transport.request("GET", `/v1/notifications?${query}`) as Promise<NotificationsPayload>;
  }

  getFrames(profile: string): Promise<FramesPayload> {
    return this.transport.request("GET", `/v1/xai/${profile}/frames`) as Promise<FramesPayload>;
  }

  getScheduleSeries(profile: string, day: string): Promise<SeriesPayload> {
    return this.transport.request("GET", `/v1/xai/${profile}/schedule-series?day=${day}`) as Promise<SeriesPayload>;
  }

  getTimeslotSeries(day: string, start: string): Promise<SeriesPayload> {
    return this.transport.request(
      "GET",
      `/v1/xai/timeslot-series?day=${day}&start=${encodeURIComponent(start)}`
    ) as Promise<SeriesPayload>;
  }

  getTooltips(): Promise<{ tooltips: string[] }> {
    return this.transport.request("GET", "/v1/xai/tooltips") as Promise<{ tooltips: string[] }>;
  }

  getPriceDays(): Promise<{ days: string[] }> {
    return this.transport.request("GET", "/v1/prices/days") as Promise<{ days: string[] }>;
  }

  getFlashes(since: number): Promise<{ flashes: FlashPayload[] }> {
    return this.transport.request("GET", `/v1/flashes?since=${since}`) as Promise<{ flashes: FlashPayload[] }>;
  }
}
