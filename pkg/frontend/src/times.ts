import { FormatError } from './errors.js';

/**
 * Segment times as integer ticks of 100 ns.
 *
 * Alignment sources give times as decimal text, and CTM rows carry
 * (start, duration) so the end must be computed. Doing that in binary
 * floating point can push an end like 0.01 + 0.05 a hair past the next
 * segment's 0.06 start, which downstream readers rightly reject as an
 * overlap. Integer ticks make the arithmetic and the comparisons exact.
 */

export const TICKS_PER_SECOND = 1e7;
const MAX_SECONDS = 1e5;

/** Parse decimal seconds to ticks, rounding anything below 100 ns. */
export function parseTicks(text: string, context: string): number {
  const m = /^([+-]?)(\d+)(?:\.(\d*))?$/.exec(text.trim());
  if (!m) {
    throw new FormatError(`${context}: cannot parse time '${text}'`);
  }
  const sign = m[1] === '-' ? -1 : 1;
  const whole = Number(m[2]);
  if (whole > MAX_SECONDS) {
    throw new FormatError(`${context}: time '${text}' exceeds ${MAX_SECONDS} s`);
  }
  // Keep eight fractional digits (10 ns units), then round to the grid.
  const first8 = (m[3] ?? '').slice(0, 8).padEnd(8, '0');
  const frac = Math.round(Number(first8) / 10);
  return sign * (whole * TICKS_PER_SECOND + frac);
}

/** Shortest decimal-seconds form of a tick count (exact, no float steps). */
export function formatTicks(ticks: number): string {
  const sign = ticks < 0 ? '-' : '';
  const abs = Math.abs(ticks);
  const whole = Math.floor(abs / TICKS_PER_SECOND);
  const frac = String(abs % TICKS_PER_SECOND).padStart(7, '0').replace(/0+$/, '');
  return frac === '' ? `${sign}${whole}` : `${sign}${whole}.${frac}`;
}
