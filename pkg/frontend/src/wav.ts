import { readFileSync } from 'node:fs';

import { DataError, FormatError } from './errors.js';
import { SAMPLE_RATE } from './table.js';

/**
 * Read a RIFF/WAVE file and return its samples scaled to [-1, 1).
 *
 * Only the format the extractor is defined over is accepted: 16 kHz,
 * mono, 16-bit integer PCM. Anything else is reported, not resampled;
 * conversion belongs to whatever produced the audio.
 */
export function readWav16kMono(path: string): Float64Array {
  const buf = readFileSync(path);
  if (buf.length < 12 || buf.toString('ascii', 0, 4) !== 'RIFF' || buf.toString('ascii', 8, 12) !== 'WAVE') {
    throw new FormatError(`${path}: not a RIFF/WAVE file`);
  }

  let fmt: { audioFormat: number; channels: number; sampleRate: number; bitsPerSample: number } | null = null;
  let data: Buffer | null = null;

  // Chunks are 2-byte aligned; unknown ones (LIST, fact, ...) are skipped.
  let off = 12;
  while (off + 8 <= buf.length) {
    const id = buf.toString('ascii', off, off + 4);
    const size = buf.readUInt32LE(off + 4);
    const body = off + 8;
    if (body + size > buf.length) {
      throw new FormatError(`${path}: chunk '${id}' overruns the file`);
    }
    if (id === 'fmt ') {
      if (size < 16) throw new FormatError(`${path}: fmt chunk too short (${size} bytes)`);
      fmt = {
        audioFormat: buf.readUInt16LE(body),
        channels: buf.readUInt16LE(body + 2),
        sampleRate: buf.readUInt32LE(body + 4),
        bitsPerSample: buf.readUInt16LE(body + 14),
      };
    } else if (id === 'data') {
      data = buf.subarray(body, body + size);
    }
    off = body + size + (size % 2);
  }

  if (!fmt) throw new FormatError(`${path}: missing fmt chunk`);
  if (!data) throw new FormatError(`${path}: missing data chunk`);
  if (fmt.audioFormat !== 1 || fmt.bitsPerSample !== 16) {
    throw new DataError(
      `${path}: need 16-bit integer PCM, got format ${fmt.audioFormat} at ${fmt.bitsPerSample} bits`,
    );
  }
  if (fmt.channels !== 1) {
    throw new DataError(`${path}: need mono audio, got ${fmt.channels} channels`);
  }
  if (fmt.sampleRate !== SAMPLE_RATE) {
    throw new DataError(`${path}: need ${SAMPLE_RATE} Hz audio, got ${fmt.sampleRate} Hz`);
  }
  if (data.length % 2 !== 0) {
    throw new FormatError(`${path}: PCM16 data chunk has odd byte length ${data.length}`);
  }

  const n = data.length / 2;
  const samples = new Float64Array(n);
  for (let i = 0; i < n; i++) {
    samples[i] = data.readInt16LE(2 * i) / 32768;
  }
  return samples;
}

/** Serialize samples in [-1, 1) as a 16 kHz mono PCM16 WAV buffer. */
export function encodeWav16kMono(samples: ArrayLike<number>): Buffer {
  const n = samples.length;
  const buf = Buffer.alloc(44 + 2 * n);
  buf.write('RIFF', 0, 'ascii');
  buf.writeUInt32LE(36 + 2 * n, 4);
  buf.write('WAVE', 8, 'ascii');
  buf.write('fmt ', 12, 'ascii');
  buf.writeUInt32LE(16, 16);
  buf.writeUInt16LE(1, 20); // integer PCM
  buf.writeUInt16LE(1, 22); // mono
  buf.writeUInt32LE(SAMPLE_RATE, 24);
  buf.writeUInt32LE(SAMPLE_RATE * 2, 28); // byte rate
  buf.writeUInt16LE(2, 32); // block align
  buf.writeUInt16LE(16, 34);
  buf.write('data', 36, 'ascii');
  buf.writeUInt32LE(2 * n, 40);
  for (let i = 0; i < n; i++) {
    const v = Math.max(-1, Math.min(1 - 1 / 32768, samples[i]));
    buf.writeInt16LE(Math.round(v * 32768), 44 + 2 * i);
  }
  return buf;
}
