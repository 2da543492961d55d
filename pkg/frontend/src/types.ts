// Payload shapes of the /v1 API. The console renders these values verbatim;
// it never recomputes model math on the client.

export interface GaugePayload {
  value: number;
  segment: string; // "Negative" | "Very low" | ... | "Undefined"
  upper_bound: number;
}

export interface ModelRecord {
  mean: [number, number]; // [bias degC, slope degC per p/kWh]
  covariance: [[number, number], [number, number]];
  input_count: number;
}

export interface BandPayload {
  mean: number[];
  lower: number[];
  upper: number[];
}

export interface ProfilePayload {
  profile: string;
  model: ModelRecord;
  preferred_temperature: number;
  gauge: GaugePayload;
  band: BandPayload & { prices: number[] };
}

export interface EllipsePayload {
  center: [number, number];
  semi_axes: [number, number];
  orientation: number;
}

export interface FramePayload {
  index: number;
  model: ModelRecord;
  gauge: GaugePayload;
  ellipse: EllipsePayload;
  band: BandPayload;
  inputs: [number, number][]; // visible (price, setpoint) pairs
}

export interface FramesPayload {
  profile: string;
  band_prices: number[];
  frames: FramePayload[];
}

export interface SeriesPoint {
  start: string;
  price: number;
  setpoint: number;
}

export interface SeriesPayload {
  day: string;
  points: SeriesPoint[];
}

export interface PriceSummaryPayload {
  window: string;
  min: number;
  max: number;
  mean: number;
}

export interface StatePayload {
  time: string;
  temperature: number;
  valve_open: boolean;
  active_profile: string;
  mode: string; // "auto" | "override" | "on" | "off"
  mode_expires_at: string | null;
  setpoint: number | null; // null while the valve is forced on/off
  price: number | null;
  price_summary: PriceSummaryPayload | null;
}

export interface ScheduleSlotPayload {
  start: string; // "HH:MM"
  end: string;   // "HH:MM", "24:00" at the end of day
  profile: string;
}

export type SchedulePayload = Record<string, ScheduleSlotPayload[]>;

export interface NotificationRecord {
  id: number;
  at: string;
  category: string; // "user" | "system"
  kind: string;
  message: string;
  payload: Record<string, unknown>;
}

export interface NotificationsPayload {
  total: number;
  page: number;
  page_size: number;
  records: NotificationRecord[];
}

export interface FlashPayload {
  id: number;
  at: string;
  kind: string;
  text: string;
}

export const WEEKDAYS = [
  "Monday",
  "Tuesday",
  "Wednesday",
  "Thursday",
  "Friday",
  "Saturday",
  "Sunday",
] as const;

export const PROFILES = ["Nights", "Mornings", "Weekdays", "Evenings", "Weekends"] as const;

export const GAUGE_SEGMENTS = [
  "Negative",
  "Very low",
  "Low",
  "Moderate",
  "High",
  "Very high",
] as const;
