import { readFileSync } from 'node:fs';

import { FormatError } from './errors.js';
import { parseTicks } from './times.js';

/** One source interval, still carrying its raw label and location. */
export interface RawSegment {
  readonly utteranceId: string;
  readonly startTicks: number;
  readonly endTicks: number;
  readonly rawLabel: string;
  /** "file:line" of the source row, for error reporting. */
  readonly where: string;
}

/**
 * Parse a CTM file: whitespace-separated rows of
 * `utterance channel start duration label [confidence]`.
 * Lines starting with ';;' and blank lines are ignored.
 */
export function parseCtm(path: string): RawSegment[] {
  const text = readFileSync(path, 'utf8');
  const segments: RawSegment[] = [];
  const lines = text.split('\n');
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (line === '' || line.startsWith(';;')) continue;
    const where = `${path}:${i + 1}`;
    const fields = line.split(/\s+/);
    if (fields.length !== 5 && fields.length !== 6) {
      throw new FormatError(`${where}: expected 5 or 6 fields, got ${fields.length}`);
    }
    const start = parseTicks(fields[2], where);
    const duration = parseTicks(fields[3], where);
    if (duration <= 0) {
      throw new FormatError(`${where}: non-positive duration '${fields[3]}'`);
    }
    segments.push({
      utteranceId: fields[0],
      startTicks: start,
      endTicks: start + duration,
      rawLabel: fields[4],
      where,
    });
  }
  return segments;
}
