#!/usr/bin/env node
// Synthesize a deterministic checkpoint with the geometry of a supported
// model. Real checkpoints come from their upstream releases and are never
// committed to this repository; this script exists so the extractor can
// be exercised without them. Build first: npm run build.
//
// usage: node scripts/make-checkpoint.js --model cpc-small [--input-dim 64]
//        [--layers N] [--seed 1] --out ck.ssck

import { parseArgs } from 'node:util';

import { makeCheckpoint, writeCheckpoint } from '../dist/checkpoint.js';
import { modelSpec } from '../dist/table.js';

const { values } = parseArgs({
  options: {
    model: { type: 'string' },
    'input-dim': { type: 'string', default: '64' },
    layers: { type: 'string' },
    seed: { type: 'string', default: '1' },
    out: { type: 'string' },
  },
});

if (!values.model || !values.out) {
  console.error('error: --model and --out are required');
  process.exit(2);
}

const spec = modelSpec(values.model);
const layers = values.layers
  ? Number(values.layers)
  : spec.totalLayers ?? spec.extractedLayer;
const ckpt = makeCheckpoint(
  spec.id,
  Number(values['input-dim']),
  spec.hiddenSize,
  layers,
  Number(values.seed),
);
writeCheckpoint(values.out, ckpt);
console.log(
  JSON.stringify({
    model: spec.id,
    out: values.out,
    input_dim: ckpt.inputDim,
    hidden_size: ckpt.hiddenSize,
    n_layers: ckpt.layers.length,
    seed: Number(values.seed),
  }),
);
