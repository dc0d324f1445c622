import { mkdtempSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';

import { encodeWav16kMono } from '../src/wav.js';

export function tempDir(): string {
  return mkdtempSync(join(tmpdir(), 'spkfeat-'));
}

/** Two-partial tone, amplitude well inside PCM16 range. */
export function toneSamples(nSamples: number, hz: number): Float64Array {
  const s = new Float64Array(nSamples);
  for (let i = 0; i < nSamples; i++) {
    const t = i / 16000;
    s[i] = 0.4 * Math.sin(2 * Math.PI * hz * t) + 0.1 * Math.sin(2 * Math.PI * 2.7 * hz * t);
  }
  return s;
}

export function writeToneWav(path: string, nSamples: number, hz: number): void {
  writeFileSync(path, encodeWav16kMono(toneSamples(nSamples, hz)));
}

export function writeAudioList(
  path: string,
  rows: ReadonlyArray<readonly [string, string, string]>,
): void {
  const lines = ['utterance_id\tspeaker_id\taudio_path'];
  for (const [utt, spk, audio] of rows) lines.push(`${utt}\t${spk}\t${audio}`);
  writeFileSync(path, lines.join('\n') + '\n');
}
