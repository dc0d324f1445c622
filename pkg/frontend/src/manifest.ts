import { readFileSync, writeFileSync } from 'node:fs';
import { dirname, isAbsolute, join } from 'node:path';

import { DataError, FormatError } from './errors.js';

const MANIFEST_HEADER = ['utterance_id', 'speaker_id', 'feature_path', 'num_frames'];
const AUDIO_LIST_HEADER = ['utterance_id', 'speaker_id', 'audio_path'];

export interface ManifestEntry {
  readonly utteranceId: string;
  readonly speakerId: string;
  /** Relative to the manifest's own directory unless absolute. */
  readonly featurePath: string;
  readonly numFrames: number;
}

export function writeManifest(path: string, entries: readonly ManifestEntry[]): void {
  const seen = new Set<string>();
  const lines = [MANIFEST_HEADER.join('\t')];
  for (const e of entries) {
    if (seen.has(e.utteranceId)) {
      throw new DataError(`duplicate utterance_id '${e.utteranceId}' in manifest`);
    }
    seen.add(e.utteranceId);
    lines.push(`${e.utteranceId}\t${e.speakerId}\t${e.featurePath}\t${e.numFrames}`);
  }
  writeFileSync(path, lines.join('\n') + '\n', 'utf8');
}

export interface AudioListEntry {
  readonly utteranceId: string;
  readonly speakerId: string;
  /** Resolved against the list file's directory when relative. */
  readonly audioPath: string;
}

/**
 * Parse the extraction work list: a TSV with header
 * `utterance_id  speaker_id  audio_path`.
 */
export function readAudioList(path: string): AudioListEntry[] {
  const text = readFileSync(path, 'utf8');
  const lines = text.split('\n').filter((l) => l.trim() !== '');
  if (lines.length === 0 || lines[0].split('\t').join(' ') !== AUDIO_LIST_HEADER.join(' ')) {
    throw new FormatError(`${path}: expected header ${AUDIO_LIST_HEADER.join(' ')}`);
  }
  const root = dirname(path);
  const seen = new Set<string>();
  const entries: AudioListEntry[] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split('\t');
    if (parts.length !== 3) {
      throw new FormatError(`${path}:${i + 1}: expected 3 tab-separated fields`);
    }
    const [utteranceId, speakerId, rawPath] = parts;
    if (seen.has(utteranceId)) {
      throw new DataError(`${path}:${i + 1}: duplicate utterance_id '${utteranceId}'`);
    }
    seen.add(utteranceId);
    entries.push({
      utteranceId,
      speakerId,
      audioPath: isAbsolute(rawPath) ? rawPath : join(root, rawPath),
    });
  }
  if (entries.length === 0) {
    throw new DataError(`${path}: audio list has no entries`);
  }
  return entries;
}
