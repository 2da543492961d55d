// Hand-rolled SVG charts. Every number plotted comes straight from an API
// payload; the only arithmetic here is pixel scaling.

import type { BandPayload, EllipsePayload, SeriesPoint } from "./types.js";

export const WIDTH = 340;
export const HEIGHT = 220;
const PAD = { left: 42, right: 14, top: 12, bottom: 30 };

interface Scale {
  (value: number): number;
}

function linearScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  const span = hi - lo || 1;
  return (value: number) => outLo + ((value - lo) / span) * (outHi - outLo);
}

function bounds(values: number[], padFraction = 0.08): [number, number] {
  if (values.length === 0) return [0, 1];
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (lo === hi) {
    lo -= 1;
    hi += 1;
  }
  const pad = (hi - lo) * padFraction;
  return [lo - pad, hi + pad];
}

function axes(xLabel: string, yLabel: string, extra = ""): string {
  return (
    `<line class="axis" x1="${PAD.left}" y1="${HEIGHT - PAD.bottom}" x2="${WIDTH - PAD.right}" y2="${HEIGHT - PAD.bottom}"/>` +
    `<line class="axis" x1="${PAD.left}" y1="${PAD.top}" x2="${PAD.left}" y2="${HEIGHT - PAD.bottom}"/>` +
    `<text class="axis-label" x="${(PAD.left + WIDTH - PAD.right) / 2}" y="${HEIGHT - 6}" text-anchor="middle">${xLabel}</text>` +
    `<text class="axis-label" x="12" y="${(PAD.top + HEIGHT - PAD.bottom) / 2}" text-anchor="middle" transform="rotate(-90 12 ${(PAD.top + HEIGHT - PAD.bottom) / 2})">${yLabel}</text>` +
    extra
  );
}

function svg(body: string): string {
  return `<svg viewBox="0 0 ${WIDTH} ${HEIGHT}" preserveAspectRatio="xMidYMid meet">${body}</svg>`;
}

function polyline(xs: number[], ys: number[], sx: Scale, sy: Scale, cls: string): string {
  const points = xs.map((x, i) => `${sx(x).toFixed(1)},${sy(ys[i]).toFixed(1)}`).join(" ");
  return `<polyline class="${cls}" fill="none" points="${points}"/>`;
}

// Chart 1: the visible inputs as a scatter of (price, setpoint).
export function inputsChart(inputs: [number, number][]): string {
  const prices = inputs.map(([p]) => p);
  const setpoints = inputs.map(([, s]) => s);
  const [xLo, xHi] = bounds(prices.length ? prices : [0, 35]);
  const [yLo, yHi] = bounds(setpoints.length ? setpoints : [7, 30]);
  const sx = linearScale(xLo, xHi, PAD.left, WIDTH - PAD.right);
  const sy = linearScale(yLo, yHi, HEIGHT - PAD.bottom, PAD.top);
  const dots = inputs
    .map(([p, s]) => `<circle class="dot" cx="${sx(p).toFixed(1)}" cy="${sy(s).toFixed(1)}" r="4"/>`)
    .join("");
  const empty = inputs.length
    ? ""
    : `<text class="placeholder" x="${WIDTH / 2}" y="${HEIGHT / 2}" text-anchor="middle">no inputs yet</text>`;
  return svg(axes("energy price (p/kWh)", "target temperature (°C)", dots + empty));
}

// Chart 2: the model itself -- best guess plus confidence ellipse over
// (preferred temperature, price sensitivity).
export function modelChart(ellipse: EllipsePayload): string {
  const [cx, cy] = ellipse.center;
  const [a, b] = ellipse.semi_axes;
  const reach = Math.max(a, b);
  const sx = linearScale(cx - reach * 1.3, cx + reach * 1.3, PAD.left, WIDTH - PAD.right);
  const sy = linearScale(cy - reach * 1.3, cy + reach * 1.3, HEIGHT - PAD.bottom, PAD.top);
  const px = sx(cx);
  const py = sy(cy);
  const rx = Math.abs(sx(cx + a) - px);
  const ry = Math.abs(sy(cy + b) - py);
  const degrees = (-ellipse.orientation * 180) / Math.PI;
  const body =
    `<ellipse class="region" cx="${px.toFixed(1)}" cy="${py.toFixed(1)}" rx="${rx.toFixed(1)}" ry="${ry.toFixed(1)}" ` +
    `transform="rotate(${degrees.toFixed(2)} ${px.toFixed(1)} ${py.toFixed(1)})"/>` +
    `<circle class="dot" cx="${px.toFixed(1)}" cy="${py.toFixed(1)}" r="4"/>`;
  return svg(axes("preferred temperature (°C)", "price sensitivity", body));
}

// Chart 3: predictions over price with the confidence band.
export function predictionsChart(prices: number[], band: BandPayload): string {
  const [xLo, xHi] = bounds(prices, 0);
  const [yLo, yHi] = bounds([...band.lower, ...band.upper]);
  const sx = linearScale(xLo, xHi, PAD.left, WIDTH - PAD.right);
  const sy = linearScale(yLo, yHi, HEIGHT - PAD.bottom, PAD.top);
  const upper = prices.map((p, i) => `${sx(p).toFixed(1)},${sy(band.upper[i]).toFixed(1)}`);
  const lower = prices
    .map((p, i) => `${sx(p).toFixed(1)},${sy(band.lower[i]).toFixed(1)}`)
    .reverse();
  const region = `<polygon class="region" points="${upper.join(" ")} ${lower.join(" ")}"/>`;
  const meanLine = polyline(prices, band.mean, sx, sy, "line-mean");
  return svg(axes("energy price (p/kWh)", "target temperature (°C)", region + meanLine));
}

// Chart 4 / timeslot overlay: the day's prices and the setpoints the model
// would publish, on twin axes over time-of-day.
export function scheduleChart(points: SeriesPoint[]): string {
  const xs = points.map((_, i) => i);
  const prices = points.map((p) => p.price);
  const setpoints = points.map((p) => p.setpoint);
  const sx = linearScale(0, Math.max(xs.length - 1, 1), PAD.left, WIDTH - PAD.right);
  const [pLo, pHi] = bounds(prices);
  const [sLo, sHi] = bounds(setpoints);
  const syPrice = linearScale(pLo, pHi, HEIGHT - PAD.bottom, PAD.top);
  const sySet = linearScale(sLo, sHi, HEIGHT - PAD.bottom, PAD.top);
  const labels = points.length
    ? `<text class="axis-label" x="${PAD.left}" y="${HEIGHT - 18}">${points[0].start.slice(11, 16)}</text>` +
      `<text class="axis-label" x="${WIDTH - PAD.right}" y="${HEIGHT - 18}" text-anchor="end">${points[points.length - 1].start.slice(11, 16)}</text>`
    : "";
  return svg(
    axes(
      "time of day",
      "°C / p·kWh⁻¹",
      polyline(xs, prices, sx, syPrice, "line-price") +
        polyline(xs, setpoints, sx, sySet, "line-setpoint") +
        labels +
        `<g class="legend"><rect x="${WIDTH - 120}" y="${PAD.top}" width="10" height="3" class="line-price-swatch"/>` +
        `<text x="${WIDTH - 105}" y="${PAD.top + 5}" class="axis-label">price</text>` +
        `<rect x="${WIDTH - 120}" y="${PAD.top + 12}" width="10" height="3" class="line-setpoint-swatch"/>` +
        `<text x="${WIDTH - 105}" y="${PAD.top + 17}" class="axis-label">setpoint</text></g>`
    )
  );
}
