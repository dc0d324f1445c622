import { readFileSync, writeFileSync } from 'node:fs';

import { FormatError } from './errors.js';
import type { LstmLayer } from './lstm.js';

/**
 * Checkpoint container: magic "SSCK", u32 version = 1, u8 model-id
 * length + ASCII model id, u32 input dim, u32 hidden size, u32 layer
 * count, then per layer the packed float32 LSTM parameters Wx
 * (4H x in), Wh (4H x H), bias (4H). Everything little-endian.
 */

export const CHECKPOINT_MAGIC = 'SSCK';
export const CHECKPOINT_VERSION = 1;

export interface Checkpoint {
  readonly modelId: string;
  readonly inputDim: number;
  readonly hiddenSize: number;
  readonly layers: readonly LstmLayer[];
}

function layerFloats(inputDim: number, hidden: number): number {
  return 4 * hidden * inputDim + 4 * hidden * hidden + 4 * hidden;
}

export function writeCheckpoint(path: string, ckpt: Checkpoint): void {
  const id = Buffer.from(ckpt.modelId, 'ascii');
  if (id.length < 1 || id.length > 255) {
    throw new RangeError(`model id must be 1..255 ASCII bytes, got ${id.length}`);
  }
  let total = 0;
  for (const layer of ckpt.layers) total += layerFloats(layer.inputDim, layer.hidden);

  const buf = Buffer.alloc(4 + 4 + 1 + id.length + 12 + 4 * total);
  let off = buf.write(CHECKPOINT_MAGIC, 0, 'ascii');
  off = buf.writeUInt32LE(CHECKPOINT_VERSION, off);
  off = buf.writeUInt8(id.length, off);
  off += id.copy(buf, off);
  off = buf.writeUInt32LE(ckpt.inputDim, off);
  off = buf.writeUInt32LE(ckpt.hiddenSize, off);
  off = buf.writeUInt32LE(ckpt.layers.length, off);
  for (const layer of ckpt.layers) {
    for (const arr of [layer.wx, layer.wh, layer.bias]) {
      for (let i = 0; i < arr.length; i++) {
        off = buf.writeFloatLE(arr[i], off);
      }
    }
  }
  writeFileSync(path, buf);
}

export function readCheckpoint(path: string): Checkpoint {
  const buf = readFileSync(path);
  if (buf.length < 9 || buf.toString('ascii', 0, 4) !== CHECKPOINT_MAGIC) {
    throw new FormatError(`${path}: missing ${CHECKPOINT_MAGIC} magic`);
  }
  const version = buf.readUInt32LE(4);
  if (version !== CHECKPOINT_VERSION) {
    throw new FormatError(`${path}: unsupported checkpoint version ${version}`);
  }
  const idLen = buf.readUInt8(8);
  let off = 9;
  if (off + idLen + 12 > buf.length) {
    throw new FormatError(`${path}: truncated checkpoint header`);
  }
  const modelId = buf.toString('ascii', off, off + idLen);
  off += idLen;
  const inputDim = buf.readUInt32LE(off);
  const hiddenSize = buf.readUInt32LE(off + 4);
  const nLayers = buf.readUInt32LE(off + 8);
  off += 12;
  if (inputDim < 1 || hiddenSize < 1 || nLayers < 1) {
    throw new FormatError(
      `${path}: header declares input ${inputDim}, hidden ${hiddenSize}, ${nLayers} layers`,
    );
  }

  const layers: LstmLayer[] = [];
  for (let l = 0; l < nLayers; l++) {
    const inDim = l === 0 ? inputDim : hiddenSize;
    const counts = [4 * hiddenSize * inDim, 4 * hiddenSize * hiddenSize, 4 * hiddenSize];
    const parts: Float32Array[] = [];
    for (const count of counts) {
      if (off + 4 * count > buf.length) {
        throw new FormatError(`${path}: truncated at layer ${l + 1} (need ${count} floats)`);
      }
      const arr = new Float32Array(count);
      for (let i = 0; i < count; i++) arr[i] = buf.readFloatLE(off + 4 * i);
      parts.push(arr);
      off += 4 * count;
    }
    layers.push({ wx: parts[0], wh: parts[1], bias: parts[2], inputDim: inDim, hidden: hiddenSize });
  }
  if (off !== buf.length) {
    throw new FormatError(`${path}: ${buf.length - off} trailing bytes after last layer`);
  }
  return { modelId, inputDim, hiddenSize, layers };
}

/** Deterministic PRNG (mulberry32); good enough for synthetic weights. */
function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

/**
 * Synthesize a checkpoint with the given geometry. Weights are uniform
 * in +-1/sqrt(fan-in) as float32; forget-gate biases start at 1 so cell
 * state survives early steps. Same arguments, same bytes.
 */
export function makeCheckpoint(
  modelId: string,
  inputDim: number,
  hiddenSize: number,
  nLayers: number,
  seed: number,
): Checkpoint {
  const rng = mulberry32(seed);
  const uniform = (scale: number) => Math.fround((2 * rng() - 1) * scale);
  const layers: LstmLayer[] = [];
  for (let l = 0; l < nLayers; l++) {
    const inDim = l === 0 ? inputDim : hiddenSize;
    const wx = new Float32Array(4 * hiddenSize * inDim);
    const wh = new Float32Array(4 * hiddenSize * hiddenSize);
    const bias = new Float32Array(4 * hiddenSize);
    const sx = 1 / Math.sqrt(inDim);
    const sh = 1 / Math.sqrt(hiddenSize);
    for (let i = 0; i < wx.length; i++) wx[i] = uniform(sx);
    for (let i = 0; i < wh.length; i++) wh[i] = uniform(sh);
    for (let u = 0; u < hiddenSize; u++) bias[hiddenSize + u] = 1;
    layers.push({ wx, wh, bias, inputDim: inDim, hidden: hiddenSize });
  }
  return { modelId, inputDim, hiddenSize, layers };
}
