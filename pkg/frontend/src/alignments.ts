import { readdirSync, writeFileSync } from 'node:fs';
import { join } from 'node:path';

import { AlignmentError, DataError } from './errors.js';
import { parseCtm, type RawSegment } from './ctm.js';
import { mapPhoneLabel } from './phones.js';
import { parseTextGrid } from './textgrid.js';
import { formatTicks } from './times.js';

const ALIGNMENT_HEADER = 'utterance_id\tstart_s\tend_s\tphone';

export type AlignmentFormat = 'ctm' | 'textgrid';

export interface ConvertResult {
  readonly files: number;
  readonly utterances: number;
  readonly segments: number;
  readonly silenceSegments: number;
  readonly phones: string[];
}

interface MappedSegment extends RawSegment {
  readonly phone: string;
  readonly silence: boolean;
}

function sourceFiles(inDir: string, format: AlignmentFormat): string[] {
  const suffix = format === 'ctm' ? '.ctm' : '.textgrid';
  const names = readdirSync(inDir)
    .filter((name) => name.toLowerCase().endsWith(suffix))
    .sort();
  if (names.length === 0) {
    throw new DataError(`${inDir}: no ${format} files found`);
  }
  return names.map((name) => join(inDir, name));
}

/**
 * Convert a directory of CTM or TextGrid alignments to the downstream
 * TSV format.
 *
 * Labels are folded onto the 39-phone inventory (stress digits
 * stripped); silence/noise marks are written through for the consumer
 * to exclude. Unknown labels and overlapping intervals abort the whole
 * conversion with every offending source location listed.
 */
export function convertAlignments(
  inDir: string,
  format: AlignmentFormat,
  outPath: string,
): ConvertResult {
  const files = sourceFiles(inDir, format);
  const raw: RawSegment[] = [];
  for (const file of files) {
    raw.push(...(format === 'ctm' ? parseCtm(file) : parseTextGrid(file)));
  }

  const unknown: string[] = [];
  const mapped: MappedSegment[] = [];
  for (const seg of raw) {
    const result = mapPhoneLabel(seg.rawLabel);
    if (result.kind === 'unknown') {
      unknown.push(`${seg.where}: unknown phone label '${result.label}'`);
      continue;
    }
    mapped.push({ ...seg, phone: result.label, silence: result.kind === 'silence' });
  }
  if (unknown.length > 0) {
    throw new AlignmentError(`${unknown.length} label(s) not in the 39-phone inventory`, unknown);
  }

  const byUtterance = new Map<string, MappedSegment[]>();
  for (const seg of mapped) {
    if (seg.endTicks <= seg.startTicks) {
      throw new AlignmentError('interval has end <= start', [seg.where]);
    }
    let group = byUtterance.get(seg.utteranceId);
    if (!group) byUtterance.set(seg.utteranceId, (group = []));
    group.push(seg);
  }

  const overlaps: string[] = [];
  for (const group of byUtterance.values()) {
    group.sort((a, b) => a.startTicks - b.startTicks || a.endTicks - b.endTicks);
    for (let i = 1; i < group.length; i++) {
      if (group[i].startTicks < group[i - 1].endTicks) {
        overlaps.push(`${group[i - 1].where} overlaps ${group[i].where}`);
      }
    }
  }
  if (overlaps.length > 0) {
    throw new AlignmentError('overlapping intervals in source', overlaps);
  }

  const lines = [ALIGNMENT_HEADER];
  const phones = new Set<string>();
  let silenceSegments = 0;
  for (const utt of [...byUtterance.keys()].sort()) {
    for (const seg of byUtterance.get(utt)!) {
      lines.push(`${utt}\t${formatTicks(seg.startTicks)}\t${formatTicks(seg.endTicks)}\t${seg.phone}`);
      if (seg.silence) silenceSegments++;
      else phones.add(seg.phone);
    }
  }
  writeFileSync(outPath, lines.join('\n') + '\n', 'utf8');

  return {
    files: files.length,
    utterances: byUtterance.size,
    segments: mapped.length,
    silenceSegments,
    phones: [...phones].sort(),
  };
}
