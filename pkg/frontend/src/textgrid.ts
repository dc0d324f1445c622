import { readFileSync } from 'node:fs';
import { basename } from 'node:path';

import { FormatError } from './errors.js';
import type { RawSegment } from './ctm.js';
import { parseTicks } from './times.js';

/**
 * Parse a long-format TextGrid and return the intervals of its phone
 * tier. The utterance id is the file's base name without extension.
 *
 * Tier choice: a single IntervalTier is used as-is; with several, the
 * one whose name contains "phone" (case-insensitive) wins, and ambiguity
 * is an error rather than a guess.
 */
export function parseTextGrid(path: string): RawSegment[] {
  const text = readFileSync(path, 'utf8');
  const lines = text.split('\n');
  const utteranceId = basename(path).replace(/\.[^.]+$/, '');

  interface Tier {
    name: string;
    intervals: { xmin?: string; xmax?: string; text?: string; line: number }[];
  }
  const tiers: Tier[] = [];
  let current: Tier | null = null;
  let inIntervalTier = false;

  const unquote = (s: string) => s.replace(/^"|"$/g, '').replace(/""/g, '"');

  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    const classMatch = /^class\s*=\s*"(.+)"$/.exec(line);
    if (classMatch) {
      inIntervalTier = classMatch[1] === 'IntervalTier';
      current = inIntervalTier ? { name: '', intervals: [] } : null;
      if (current) tiers.push(current);
      continue;
    }
    if (!current) continue;

    const nameMatch = /^name\s*=\s*"(.*)"$/.exec(line);
    if (nameMatch && current.name === '') {
      current.name = unquote(`"${nameMatch[1]}"`);
      continue;
    }
    if (/^intervals\s*\[\d+\]:?$/.test(line)) {
      current.intervals.push({ line: i + 1 });
      continue;
    }
    const last = current.intervals[current.intervals.length - 1];
    if (!last) continue;
    const kv = /^(xmin|xmax|text)\s*=\s*(.*)$/.exec(line);
    if (!kv) continue;
    if (kv[1] === 'text') {
      last.text = unquote(kv[2].trim());
    } else if (kv[1] === 'xmin') {
      last.xmin = kv[2].trim();
    } else {
      last.xmax = kv[2].trim();
    }
  }

  if (tiers.length === 0) {
    throw new FormatError(`${path}: no IntervalTier found`);
  }
  let tier: Tier;
  if (tiers.length === 1) {
    tier = tiers[0];
  } else {
    const phoneTiers = tiers.filter((t) => t.name.toLowerCase().includes('phone'));
    if (phoneTiers.length !== 1) {
      const names = tiers.map((t) => `'${t.name}'`).join(', ');
      throw new FormatError(
        `${path}: cannot pick a phone tier among ${tiers.length} interval tiers (${names})`,
      );
    }
    tier = phoneTiers[0];
  }

  const segments: RawSegment[] = [];
  for (const iv of tier.intervals) {
    const where = `${path}:${iv.line}`;
    if (iv.xmin === undefined || iv.xmax === undefined || iv.text === undefined) {
      throw new FormatError(`${where}: interval is missing xmin, xmax, or text`);
    }
    segments.push({
      utteranceId,
      startTicks: parseTicks(iv.xmin, where),
      endTicks: parseTicks(iv.xmax, where),
      rawLabel: iv.text,
      where,
    });
  }
  return segments;
}
