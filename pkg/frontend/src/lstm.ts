/**
 * Plain LSTM stack used for deterministic feature inference.
 *
 * Gate layout in the packed parameter matrices is [input, forget, cell,
 * output], each block `hidden` rows tall. All arithmetic is float64 and
 * sequential, so a given checkpoint and input always produce the same
 * bits.
 */

export interface LstmLayer {
  /** (4*hidden, inputDim) row-major input weights. */
  readonly wx: Float32Array;
  /** (4*hidden, hidden) row-major recurrent weights. */
  readonly wh: Float32Array;
  /** (4*hidden,) bias. */
  readonly bias: Float32Array;
  readonly inputDim: number;
  readonly hidden: number;
}

function sigmoid(x: number): number {
  return 1 / (1 + Math.exp(-x));
}

/** Hidden-state sequence of one layer over the whole input sequence. */
export function runLayer(layer: LstmLayer, inputs: readonly Float64Array[]): Float64Array[] {
  const { wx, wh, bias, inputDim, hidden } = layer;
  const h = new Float64Array(hidden);
  const c = new Float64Array(hidden);
  const gates = new Float64Array(4 * hidden);
  const out: Float64Array[] = [];

  for (const x of inputs) {
    for (let r = 0; r < 4 * hidden; r++) {
      let acc = bias[r];
      const xOff = r * inputDim;
      for (let j = 0; j < inputDim; j++) acc += wx[xOff + j] * x[j];
      const hOff = r * hidden;
      for (let j = 0; j < hidden; j++) acc += wh[hOff + j] * h[j];
      gates[r] = acc;
    }
    for (let u = 0; u < hidden; u++) {
      const i = sigmoid(gates[u]);
      const f = sigmoid(gates[hidden + u]);
      const g = Math.tanh(gates[2 * hidden + u]);
      const o = sigmoid(gates[3 * hidden + u]);
      c[u] = f * c[u] + i * g;
      h[u] = o * Math.tanh(c[u]);
    }
    out.push(Float64Array.from(h));
  }
  return out;
}

/**
 * Run the stack bottom-up and return the hidden states of layer
 * `extractLayer` (1-based). Layers above it are never evaluated.
 */
export function runStack(
  layers: readonly LstmLayer[],
  inputs: readonly Float64Array[],
  extractLayer: number,
): Float64Array[] {
  if (!Number.isInteger(extractLayer) || extractLayer < 1 || extractLayer > layers.length) {
    throw new RangeError(`extractLayer must be in [1, ${layers.length}], got ${extractLayer}`);
  }
  let seq: readonly Float64Array[] = inputs;
  for (let l = 0; l < extractLayer; l++) {
    seq = runLayer(layers[l], seq);
  }
  return seq as Float64Array[];
}
