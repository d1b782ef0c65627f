/** Canvas line charts: series, threshold line, band shading, training-period
 * shading, crossing marker, and hover readout. No chart library; the data
 * arrives pre-decimated from the service. */

import { fmt, niceTicks } from "./format.js";
import type { EventDoc } from "./types.js";

export interface Series {
  label: string;
  x: number[]; // years
  y: number[];
  color: string;
  dashed?: boolean;
}

export interface BandSpec {
  x: number[];
  lower: number[];
  upper: number[];
  color: string;
}

export interface ChartSpec {
  title: string;
  unit: string;
  series: Series[];
  band?: BandSpec;
  thresholdY?: { value: number; label: string };
  markerX?: { value: number; label: string } | null;
  trainingSpans?: Array<[number, number]>; // years
  yMin?: number;
}

const MARGIN = { left: 46, right: 10, top: 22, bottom: 22 };

export class LineChart {
  private ctx: CanvasRenderingContext2D;
  private spec: ChartSpec | null = null;
  private hoverX: number | null = null;

  constructor(private canvas: HTMLCanvasElement) {
    const ctx = canvas.getContext("2d");
    if (!ctx) throw new Error("canvas 2d context unavailable");
    this.ctx = ctx;
    canvas.addEventListener("mousemove", (ev) => {
      const rect = canvas.getBoundingClientRect();
      this.hoverX = ((ev.clientX - rect.left) * canvas.width) / rect.width;
      this.draw();
    });
    canvas.addEventListener("mouseleave", () => {
      this.hoverX = null;
      this.draw();
    });
  }

  update(spec: ChartSpec): void {
    this.spec = spec;
    this.draw();
  }

  private extent(): { x0: number; x1: number; y0: number; y1: number } {
    const s = this.spec!;
    let x0 = Infinity, x1 = -Infinity, y0 = Infinity, y1 = -Infinity;
    for (const ser of s.series) {
      for (let i = 0; i < ser.x.length; i++) {
        if (ser.x[i] < x0) x0 = ser.x[i];
        if (ser.x[i] > x1) x1 = ser.x[i];
        if (ser.y[i] < y0) y0 = ser.y[i];
        if (ser.y[i] > y1) y1 = ser.y[i];
      }
    }
    if (s.thresholdY) {
      y0 = Math.min(y0, s.thresholdY.value);
      y1 = Math.max(y1, s.thresholdY.value);
    }
    if (!Number.isFinite(x0)) [x0, x1, y0, y1] = [0, 1, 0, 1];
    if (s.yMin !== undefined) y0 = Math.min(y0, s.yMin);
    const pad = (y1 - y0) * 0.08 || 1;
    return { x0, x1, y0: y0 - pad, y1: y1 + pad };
  }

  private draw(): void {
    const { ctx, canvas } = this;
    const s = this.spec;
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    if (!s) return;
    const W = canvas.width, H = canvas.height;
    const { x0, x1, y0, y1 } = this.extent();
    const px = (x: number) =>
      MARGIN.left + ((x - x0) / (x1 - x0 || 1)) * (W - MARGIN.left - MARGIN.right);
    const py = (y: number) =>
      H - MARGIN.bottom - ((y - y0) / (y1 - y0 || 1)) * (H - MARGIN.top - MARGIN.bottom);

    // training-period shading
    if (s.trainingSpans) {
      ctx.fillStyle = "rgba(120, 160, 255, 0.10)";
      for (const [a, b] of s.trainingSpans) {
        ctx.fillRect(px(a), MARGIN.top, Math.max(1, px(b) - px(a)),
                     H - MARGIN.top - MARGIN.bottom);
      }
    }

    // axes + grid
    ctx.strokeStyle = "#2a2f3a";
    ctx.fillStyle = "#9aa4b2";
    ctx.lineWidth = 1;
    ctx.font = "10px system-ui, sans-serif";
    for (const t of niceTicks(y0, y1, 5)) {
      ctx.beginPath();
      ctx.moveTo(MARGIN.left, py(t));
      ctx.lineTo(W - MARGIN.right, py(t));
      ctx.stroke();
      ctx.fillText(fmt(t, Math.abs(t) >= 100 ? 0 : 1), 4, py(t) + 3);
    }
    for (const t of niceTicks(x0, x1, 6)) {
      ctx.fillText(fmt(t, t >= 10 ? 0 : 1), px(t) - 6, H - 7);
    }

    // improvement band
    if (s.band && s.band.x.length > 1) {
      ctx.beginPath();
      ctx.moveTo(px(s.band.x[0]), py(s.band.lower[0]));
      for (let i = 1; i < s.band.x.length; i++)
        ctx.lineTo(px(s.band.x[i]), py(s.band.lower[i]));
      for (let i = s.band.x.length - 1; i >= 0; i--)
        ctx.lineTo(px(s.band.x[i]), py(s.band.upper[i]));
      ctx.closePath();
      ctx.fillStyle = s.band.color;
      ctx.fill();
    }

    // threshold line
    if (s.thresholdY) {
      ctx.strokeStyle = "#d06060";
      ctx.setLineDash([5, 4]);
      ctx.beginPath();
      ctx.moveTo(MARGIN.left, py(s.thresholdY.value));
      ctx.lineTo(W - MARGIN.right, py(s.thresholdY.value));
      ctx.stroke();
      ctx.setLineDash([]);
      ctx.fillStyle = "#d06060";
      ctx.fillText(s.thresholdY.label, W - MARGIN.right - 84, py(s.thresholdY.value) - 4);
    }

    // series
    for (const ser of s.series) {
      ctx.strokeStyle = ser.color;
      ctx.lineWidth = 1.6;
      if (ser.dashed) ctx.setLineDash([4, 3]);
      ctx.beginPath();
      for (let i = 0; i < ser.x.length; i++) {
        const X = px(ser.x[i]), Y = py(ser.y[i]);
        if (i === 0) ctx.moveTo(X, Y);
        else ctx.lineTo(X, Y);
      }
      ctx.stroke();
      ctx.setLineDash([]);
    }

    // crossing marker
    if (s.markerX && s.markerX.value >= x0 && s.markerX.value <= x1) {
      const X = px(s.markerX.value);
      ctx.strokeStyle = "#e0a030";
      ctx.setLineDash([2, 3]);
      ctx.beginPath();
      ctx.moveTo(X, MARGIN.top);
      ctx.lineTo(X, H - MARGIN.bottom);
      ctx.stroke();
      ctx.setLineDash([]);
      ctx.fillStyle = "#e0a030";
      ctx.fillText(s.markerX.label, Math.min(X + 3, W - 80), MARGIN.top + 10);
    }

    // title
    ctx.fillStyle = "#dde3ea";
    ctx.font = "12px system-ui, sans-serif";
    ctx.fillText(`${s.title} (${s.unit})`, MARGIN.left, 13);

    // hover readout
    if (this.hoverX !== null && s.series.length > 0) {
      const xv = x0 + ((this.hoverX - MARGIN.left) /
        (W - MARGIN.left - MARGIN.right)) * (x1 - x0);
      if (xv >= x0 && xv <= x1) {
        const ser = s.series[0];
        const i = nearestIndex(ser.x, xv);
        const lines = s.series
          .filter((sr) => sr.x.length > 0)
          .map((sr) => `${sr.label}: ${fmt(sr.y[nearestIndex(sr.x, xv)], 2)}`);
        ctx.strokeStyle = "#5a6372";
        ctx.beginPath();
        ctx.moveTo(px(ser.x[i]), MARGIN.top);
        ctx.lineTo(px(ser.x[i]), H - MARGIN.bottom);
        ctx.stroke();
        ctx.fillStyle = "#0e1117";
        const bw = 120, bh = 13 * (lines.length + 1);
        const bx = Math.min(px(ser.x[i]) + 6, W - bw - 4);
        ctx.fillRect(bx, MARGIN.top + 2, bw, bh);
        ctx.fillStyle = "#dde3ea";
        ctx.font = "10px system-ui, sans-serif";
        ctx.fillText(`t = ${fmt(xv, 2)} y`, bx + 5, MARGIN.top + 14);
        lines.forEach((ln, k) =>
          ctx.fillText(ln, bx + 5, MARGIN.top + 27 + 13 * k));
      }
    }
  }
}

export function nearestIndex(xs: number[], v: number): number {
  let lo = 0, hi = xs.length - 1;
  while (hi - lo > 1) {
    const mid = (lo + hi) >> 1;
    if (xs[mid] < v) lo = mid;
    else hi = mid;
  }
  return v - xs[lo] <= xs[hi] - v ? lo : hi;
}

/** Collapse per-session events into contiguous training spans (years). */
export function trainingSpans(events: EventDoc[], gapDays = 21): Array<[number, number]> {
  const starts = events.filter((e) => e.kind === "session_start")
    .map((e) => e.t_days).sort((a, b) => a - b);
  const ends = events.filter((e) => e.kind === "session_end")
    .map((e) => e.t_days).sort((a, b) => a - b);
  if (starts.length === 0) return [];
  const spans: Array<[number, number]> = [];
  let a = starts[0];
  let b = ends[0] ?? starts[0];
  for (let i = 1; i < starts.length; i++) {
    if (starts[i] - b > gapDays) {
      spans.push([a / 365, b / 365]);
      a = starts[i];
    }
    b = Math.max(b, ends[i] ?? starts[i]);
  }
  spans.push([a / 365, b / 365]);
  return spans;
}
