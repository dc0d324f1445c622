import { ConfigError } from './errors.js';

/** Audio and framing constants shared by every supported model. */
export const SAMPLE_RATE = 16000;
export const FRAME_PERIOD_S = 0.01;
export const WINDOW_S = 0.025;
export const HOP_SAMPLES = SAMPLE_RATE * FRAME_PERIOD_S; // 160
export const WINDOW_SAMPLES = SAMPLE_RATE * WINDOW_S; // 400

export interface ModelSpec {
  readonly id: string;
  /** Width of the hidden state; also the output feature dimension. */
  readonly hiddenSize: number;
  /** 1-based recurrent layer whose hidden-state sequence is emitted. */
  readonly extractedLayer: number;
  /** Exact stack depth when the architecture pins it; undefined = any depth >= extractedLayer. */
  readonly totalLayers?: number;
  /** How the last partial window is handled, recorded in the extraction report. */
  readonly edgeBehavior: string;
}

const TRUNCATE =
  'trailing samples that do not fill a 25 ms window are dropped; no padding';

/**
 * Geometry of the supported checkpoints. A checkpoint whose declared
 * hidden size (or, where pinned, stack depth) disagrees with its row
 * here is rejected before any audio is read.
 */
export const MODEL_TABLE: Readonly<Record<string, ModelSpec>> = {
  'cpc-big': { id: 'cpc-big', hiddenSize: 512, extractedLayer: 2, edgeBehavior: TRUNCATE },
  'cpc-small': { id: 'cpc-small', hiddenSize: 256, extractedLayer: 2, edgeBehavior: TRUNCATE },
  apc: { id: 'apc', hiddenSize: 512, extractedLayer: 3, totalLayers: 3, edgeBehavior: TRUNCATE },
};

export const MODEL_IDS = Object.keys(MODEL_TABLE);

export function modelSpec(modelId: string): ModelSpec {
  const spec = MODEL_TABLE[modelId];
  if (!spec) {
    throw new ConfigError(
      `unknown model '${modelId}' (supported: ${MODEL_IDS.join(', ')})`,
    );
  }
  return spec;
}
