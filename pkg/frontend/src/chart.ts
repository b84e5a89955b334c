// Convergence chart as an SVG string. Values are plotted exactly as
// polled (no smoothing); the y axis goes logarithmic when every best
// value is positive, matching the CLI plot semantics.

import type { RunRecordRow } from "./api.js";

export const CHART_WIDTH = 640;
export const CHART_HEIGHT = 360;
const MARGIN = { left: 64, right: 16, top: 20, bottom: 36 };

export interface ChartPoint {
  x: number;
  y: number;
}

export interface ChartLayout {
  points: ChartPoint[];
  logScale: boolean;
  yLabel: string;
}

export function chartLayout(records: RunRecordRow[]): ChartLayout {
  const xs = records.map((r) => r.iter);
  const ys = records.map((r) => r.best);
  const logScale = ys.length > 0 && ys.every((y) => y > 0);
  const plotYs = logScale ? ys.map((y) => Math.log10(y)) : ys;

  let xLo = xs.length ? xs[0] : 0;
  let xHi = xs.length ? xs[xs.length - 1] : 1;
  if (xHi === xLo) {
    xLo -= 0.5;
    xHi += 0.5;
  }
  let yLo = Math.min(...plotYs);
  let yHi = Math.max(...plotYs);
  if (!Number.isFinite(yLo)) {
    yLo = 0;
    yHi = 1;
  }
  if (yHi === yLo) {
    const pad = logScale ? 1 : Math.max(1, Math.abs(yHi) * 0.1);
    yLo -= pad;
    yHi += pad;
  }
  const innerW = CHART_WIDTH - MARGIN.left - MARGIN.right;
  const innerH = CHART_HEIGHT - MARGIN.top - MARGIN.bottom;
  const points = records.map((r, i) => ({
    x: MARGIN.left + ((r.iter - xLo) / (xHi - xLo)) * innerW,
    y: MARGIN.top + ((yHi - plotYs[i]) / (yHi - yLo)) * innerH,
  }));
  return {
    points,
    logScale,
    yLabel: logScale ? "best so far (log scale)" : "best so far",
  };
}

export function renderChartSvg(records: RunRecordRow[]): string {
  const layout = chartLayout(records);
  const inner: string[] = [];
  inner.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" ` +
      `width="${CHART_WIDTH - MARGIN.left - MARGIN.right}" ` +
      `height="${CHART_HEIGHT - MARGIN.top - MARGIN.bottom}" ` +
      `fill="none" stroke="#666"/>`,
  );
  if (layout.points.length === 1) {
    const p = layout.points[0];
    inner.push(
      `<circle cx="${p.x.toFixed(2)}" cy="${p.y.toFixed(2)}" r="4" ` +
        `fill="#1f6fb2"/>`,
    );
  } else if (layout.points.length > 1) {
    const coords = layout.points
      .map((p) => `${p.x.toFixed(2)},${p.y.toFixed(2)}`)
      .join(" ");
    inner.push(
      `<polyline points="${coords}" fill="none" stroke="#1f6fb2" ` +
        `stroke-width="1.5"/>`,
    );
  }
  inner.push(
    `<text x="${CHART_WIDTH / 2}" y="${CHART_HEIGHT - 8}" ` +
      `text-anchor="middle" font-size="12">iteration</text>`,
  );
  inner.push(
    `<text x="14" y="${CHART_HEIGHT / 2}" text-anchor="middle" ` +
      `font-size="12" transform="rotate(-90 14 ${CHART_HEIGHT / 2})">` +
      `${layout.yLabel}</text>`,
  );
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${CHART_WIDTH}" ` +
    `height="${CHART_HEIGHT}" viewBox="0 0 ${CHART_WIDTH} ${CHART_HEIGHT}">` +
    inner.join("") +
    `</svg>`
  );
}
