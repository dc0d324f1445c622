import { readFileSync, writeFileSync } from 'node:fs';

import { DataError, FormatError } from './errors.js';

/**
 * Frame-level feature container consumed downstream: magic "SSFV",
 * u32 version = 1, u32 dim, u32 frame count, then frame-major float32
 * values, all little-endian. Values are quantized to float32 on write.
 */

export const FEATURE_MAGIC = 'SSFV';
export const FEATURE_VERSION = 1;
const HEADER_BYTES = 16;

export function writeFeatureFile(path: string, frames: readonly Float64Array[]): void {
  if (frames.length < 1) {
    throw new DataError(`${path}: a feature file needs at least one frame`);
  }
  const dim = frames[0].length;
  if (dim < 1) throw new DataError(`${path}: frames must have at least one dimension`);

  const buf = Buffer.alloc(HEADER_BYTES + 4 * dim * frames.length);
  buf.write(FEATURE_MAGIC, 0, 'ascii');
  buf.writeUInt32LE(FEATURE_VERSION, 4);
  buf.writeUInt32LE(dim, 8);
  buf.writeUInt32LE(frames.length, 12);
  let off = HEADER_BYTES;
  for (const frame of frames) {
    if (frame.length !== dim) {
      throw new DataError(`${path}: frame width ${frame.length} != ${dim} of first frame`);
    }
    for (let j = 0; j < dim; j++) {
      if (!Number.isFinite(frame[j])) {
        throw new DataError(`${path}: non-finite feature value`);
      }
      off = buf.writeFloatLE(frame[j], off);
    }
  }
  writeFileSync(path, buf);
}

export interface FeatureData {
  readonly dim: number;
  readonly numFrames: number;
  readonly frames: Float64Array[];
}

export function readFeatureFile(path: string): FeatureData {
  const buf = readFileSync(path);
  if (buf.length < HEADER_BYTES || buf.toString('ascii', 0, 4) !== FEATURE_MAGIC) {
    throw new FormatError(`${path}: missing ${FEATURE_MAGIC} magic`);
  }
  const version = buf.readUInt32LE(4);
  if (version !== FEATURE_VERSION) {
    throw new FormatError(`${path}: unsupported version ${version}`);
  }
  const dim = buf.readUInt32LE(8);
  const numFrames = buf.readUInt32LE(12);
  if (dim < 1 || numFrames < 1) {
    throw new FormatError(`${path}: header declares ${numFrames} x ${dim} frames`);
  }
  if (buf.length !== HEADER_BYTES + 4 * dim * numFrames) {
    throw new FormatError(
      `${path}: payload is ${buf.length - HEADER_BYTES} bytes, header implies ${4 * dim * numFrames}`,
    );
  }
  const frames: Float64Array[] = [];
  for (let i = 0; i < numFrames; i++) {
    const row = new Float64Array(dim);
    for (let j = 0; j < dim; j++) {
      row[j] = buf.readFloatLE(HEADER_BYTES + 4 * (i * dim + j));
    }
    frames.push(row);
  }
  return { dim, numFrames, frames };
}
