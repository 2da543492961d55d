// The price-sensitivity dial: six flat-coloured segments on a semicircle --
// red, four cyan, red, left to right -- and a needle that points into the
// segment the API reported. No gradient; the needle disappears entirely in
// the Undefined state.

import type { GaugePayload } from "./types.js";
import { GAUGE_SEGMENTS } from "./types.js";

const CX = 110;
const CY = 104;
const OUTER = 92;
const INNER = 58;
const SEGMENT_SWEEP = 180 / 6;

const SEGMENT_COLORS = ["#d64545", "#35b6c9", "#35b6c9", "#35b6c9", "#35b6c9", "#d64545"];

function polar(radius: number, degreesFromLeft: number): [number, number] {
  const radians = ((180 - degreesFromLeft) * Math.PI) / 180;
  return [CX + radius * Math.cos(radians), CY - radius * Math.sin(radians)];
}

function arcPath(startDeg: number, endDeg: number): string {
  const [x0, y0] = polar(OUTER, startDeg);
  const [x1, y1] = polar(OUTER, endDeg);
  const [x2, y2] = polar(INNER, endDeg);
  const [x3, y3] = polar(INNER, startDeg);
  return (
    `M ${x0.toFixed(2)} ${y0.toFixed(2)} ` +
    `A ${OUTER} ${OUTER} 0 0 1 ${x1.toFixed(2)} ${y1.toFixed(2)} ` +
    `L ${x2.toFixed(2)} ${y2.toFixed(2)} ` +
    `A ${INNER} ${INNER} 0 0 0 ${x3.toFixed(2)} ${y3.toFixed(2)} Z`
  );
}

export function segmentIndex(segment: string): number {
  return GAUGE_SEGMENTS.indexOf(segment as (typeof GAUGE_SEGMENTS)[number]);
}

// Needle angle in degrees from the left end of the dial. The cyan span maps
// value/upper_bound linearly; the red ends point mid-segment.
export function needleAngle(gauge: GaugePayload): number | null {
  const index = segmentIndex(gauge.segment);
  if (index < 0) return null; // Undefined: dial hidden
  if (index === 0) return SEGMENT_SWEEP / 2;
  if (index === 5) return 5 * SEGMENT_SWEEP + SEGMENT_SWEEP / 2;
  const fraction = Math.min(Math.max(gauge.value / gauge.upper_bound, 0), 1);
  return SEGMENT_SWEEP + fraction * 4 * SEGMENT_SWEEP;
}

export function renderGauge(gauge: GaugePayload): string {
  const segments = SEGMENT_COLORS.map((color, i) => {
    const active = segmentIndex(gauge.segment) === i ? ' class="active"' : "";
    return `<path d="${arcPath(i * SEGMENT_SWEEP, (i + 1) * SEGMENT_SWEEP)}" fill="${color}"${active}/>`;
  }).join("");

  const angle = needleAngle(gauge);
  let needle = "";
  if (angle !== null) {
    const [tx, ty] = polar(INNER - 6, angle);
    needle =
      `<line class="needle" x1="${CX}" y1="${CY}" x2="${tx.toFixed(2)}" y2="${ty.toFixed(2)}" ` +
      `stroke="#222" stroke-width="3"/>` +
      `<circle cx="${CX}" cy="${CY}" r="5" fill="#222"/>`;
  }
  const label = gauge.segment === "Undefined" ? "" : gauge.segment;
  return (
    `<svg viewBox="0 0 220 120" role="img" aria-label="price sensitivity: ${gauge.segment}">` +
    segments +
    needle +
    `<text x="${CX}" y="118" text-anchor="middle" class="gauge-label">${label}</text>` +
    `</svg>`
  );
}
