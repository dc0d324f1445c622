import { mkdirSync, writeFileSync } from 'node:fs';
import { join } from 'node:path';

import { type Checkpoint, readCheckpoint } from './checkpoint.js';
import { ConfigError, DataError } from './errors.js';
import { logBandEnergies } from './frames.js';
import { runStack } from './lstm.js';
import { readAudioList, writeManifest, type ManifestEntry } from './manifest.js';
import { FRAME_PERIOD_S, modelSpec, WINDOW_S, type ModelSpec } from './table.js';
import { readWav16kMono } from './wav.js';
import { writeFeatureFile } from './ssfv.js';

export interface ExtractConfig {
  readonly model: string;
  readonly checkpointPath: string;
  readonly audioListPath: string;
  readonly outDir: string;
}

export interface ExtractReport {
  readonly model: string;
  readonly checkpoint: string;
  readonly hidden_size: number;
  readonly extracted_layer: number;
  readonly n_layers: number;
  readonly input_dim: number;
  readonly frame_period_s: number;
  readonly window_s: number;
  readonly edge_behavior: string;
  readonly n_utterances: number;
  readonly n_frames: number;
  readonly manifest: string;
}

/** Reject checkpoints whose geometry disagrees with the model table. */
export function validateCheckpoint(spec: ModelSpec, ckpt: Checkpoint, path: string): void {
  if (ckpt.modelId !== spec.id) {
    throw new ConfigError(
      `${path}: checkpoint is for model '${ckpt.modelId}', requested '${spec.id}'`,
    );
  }
  if (ckpt.hiddenSize !== spec.hiddenSize) {
    throw new ConfigError(
      `${path}: hidden-size mismatch: ${spec.id} expects ${spec.hiddenSize}, ` +
        `checkpoint declares ${ckpt.hiddenSize}`,
    );
  }
  if (spec.totalLayers !== undefined && ckpt.layers.length !== spec.totalLayers) {
    throw new ConfigError(
      `${path}: ${spec.id} is a ${spec.totalLayers}-layer stack, ` +
        `checkpoint declares ${ckpt.layers.length}`,
    );
  }
  if (ckpt.layers.length < spec.extractedLayer) {
    throw new ConfigError(
      `${path}: ${spec.id} extracts layer ${spec.extractedLayer}, ` +
        `checkpoint has only ${ckpt.layers.length}`,
    );
  }
}

/**
 * Run the checkpoint over every utterance in the audio list and write
 * one feature file per utterance plus a manifest and a JSON report
 * into `outDir`. Inference is sequential and sampling-free, so reruns
 * produce identical bytes.
 */
export function extract(config: ExtractConfig): ExtractReport {
  const spec = modelSpec(config.model);
  const ckpt = readCheckpoint(config.checkpointPath);
  validateCheckpoint(spec, ckpt, config.checkpointPath);
  const entries = readAudioList(config.audioListPath);

  mkdirSync(config.outDir, { recursive: true });
  const manifestEntries: ManifestEntry[] = [];
  let totalFrames = 0;
  for (const entry of entries) {
    const samples = readWav16kMono(entry.audioPath);
    const features = logBandEnergies(samples, ckpt.inputDim);
    if (features.length === 0) {
      throw new DataError(
        `${entry.utteranceId}: audio is shorter than one ${WINDOW_S * 1000} ms window ` +
          `(${samples.length} samples)`,
      );
    }
    const hidden = runStack(ckpt.layers, features, spec.extractedLayer);
    const featurePath = `${entry.utteranceId}.ssfv`;
    writeFeatureFile(join(config.outDir, featurePath), hidden);
    manifestEntries.push({
      utteranceId: entry.utteranceId,
      speakerId: entry.speakerId,
      featurePath,
      numFrames: hidden.length,
    });
    totalFrames += hidden.length;
  }

  const manifestPath = join(config.outDir, 'manifest.tsv');
  writeManifest(manifestPath, manifestEntries);

  const report: ExtractReport = {
    model: spec.id,
    checkpoint: config.checkpointPath,
    hidden_size: spec.hiddenSize,
    extracted_layer: spec.extractedLayer,
    n_layers: ckpt.layers.length,
    input_dim: ckpt.inputDim,
    frame_period_s: FRAME_PERIOD_S,
    window_s: WINDOW_S,
    edge_behavior: spec.edgeBehavior,
    n_utterances: manifestEntries.length,
    n_frames: totalFrames,
    manifest: manifestPath,
  };
  writeFileSync(join(config.outDir, 'extract_report.json'), JSON.stringify(report, null, 2) + '\n');
  return report;
}
