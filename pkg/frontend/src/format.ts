/** Display formatting; units follow the source tables (mg/dl, uU/ml, years). */

export function fmt(v: number | null | undefined, digits = 1): string {
  if (v === null || v === undefined || !Number.isFinite(v)) return "—";
  return v.toFixed(digits);
}

export function fmtYears(days: number | null): string {
  if (days === null) return "never";
  return `${(days / 365).toFixed(2)} y`;
}

export function fmtEscalated(g: number | null, rising: boolean): string {
  if (g === null) return "—";
  if (g >= 150 && rising) return "≫150";
  return fmt(g, 0);
}

export function niceTicks(lo: number, hi: number, n = 5): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step0 = span / Math.max(1, n);
  const mag = Math.pow(10, Math.floor(Math.log10(step0)));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (step0 <= m * mag) {
      step = m * mag;
      break;
    }
  }
  const first = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = first; v <= hi + 1e-9; v += step) ticks.push(Number(v.toFixed(10)));
  return ticks;
}
