// Tour panel: cities scaled into the viewport and the best-so-far tour as
// a closed polyline. Only meaningful for problems carrying coordinates;
// matrix-only instances fall back to chart-only mode (panel hidden).

export interface ScaledPoint {
  x: number;
  y: number;
}

export function scaleCities(
  cities: [number, number][],
  width: number,
  height: number,
  padding = 16,
): ScaledPoint[] {
  const xs = cities.map((c) => c[0]);
  const ys = cities.map((c) => c[1]);
  let xLo = Math.min(...xs);
  let xHi = Math.max(...xs);
  let yLo = Math.min(...ys);
  let yHi = Math.max(...ys);
  if (xHi === xLo) {
    xLo -= 0.5;
    xHi += 0.5;
  }
  if (yHi === yLo) {
    yLo -= 0.5;
    yHi += 0.5;
  }
  const innerW = width - 2 * padding;
  const innerH = height - 2 * padding;
  const scale = Math.min(innerW / (xHi - xLo), innerH / (yHi - yLo));
  const offsetX = padding + (innerW - scale * (xHi - xLo)) / 2;
  const offsetY = padding + (innerH - scale * (yHi - yLo)) / 2;
  return cities.map(([x, y]) => ({
    x: offsetX + (x - xLo) * scale,
    // screen y grows downward; keep the plane orientation upright
    y: height - (offsetY + (y - yLo) * scale),
  }));
}

export function tourPolyline(
  scaled: ScaledPoint[],
  tour: number[],
): ScaledPoint[] {
  const path = tour.map((i) => scaled[i]);
  if (path.length > 0) path.push(path[0]); // close the loop
  return path;
}

/** Tracks the displayed tour; repaint only on strict improvement. */
export class TourView {
  private bestValue = Infinity;
  tour: number[] | null = null;

  update(best: number, candidate: number[]): boolean {
    if (best < this.bestValue) {
      this.bestValue = best;
      this.tour = candidate.slice();
      return true;
    }
    return false;
  }
}

export function drawTour(
  canvas: HTMLCanvasElement,
  cities: [number, number][],
  tour: number[],
): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const scaled = scaleCities(cities, canvas.width, canvas.height);
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const path = tourPolyline(scaled, tour);
  ctx.strokeStyle = "#1f6fb2";
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  path.forEach((p, i) => {
    if (i === 0) ctx.moveTo(p.x, p.y);
    else ctx.lineTo(p.x, p.y);
  });
  ctx.stroke();
  ctx.fillStyle = "#333";
  for (const p of scaled) {
    ctx.beginPath();
    ctx.arc(p.x, p.y, 3, 0, 2 * Math.PI);
    ctx.fill();
  }
}
