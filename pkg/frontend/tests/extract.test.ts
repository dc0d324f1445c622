import { readFileSync, writeFileSync } from 'node:fs';
import { join } from 'node:path';

import { describe, expect, it } from 'vitest';

import { makeCheckpoint, writeCheckpoint } from '../src/checkpoint.js';
import { ConfigError, DataError } from '../src/errors.js';
import { extract, validateCheckpoint } from '../src/extract.js';
import { readFeatureFile } from '../src/ssfv.js';
import { modelSpec } from '../src/table.js';
import { tempDir, writeAudioList, writeToneWav } from './helpers.js';

/** Checkpoint + audio list in one directory, geometry from the model table. */
function setup(model: string, utts: Array<[string, string, number, number]>, inputDim = 48) {
  const dir = tempDir();
  const spec = modelSpec(model);
  const layers = spec.totalLayers ?? spec.extractedLayer;
  const ckptPath = join(dir, 'ck.ssck');
  writeCheckpoint(ckptPath, makeCheckpoint(model, inputDim, spec.hiddenSize, layers, 11));
  for (const [utt, , nSamples, hz] of utts) {
    writeToneWav(join(dir, `${utt}.wav`), nSamples, hz);
  }
  const listPath = join(dir, 'list.tsv');
  writeAudioList(listPath, utts.map(([utt, spk]) => [utt, spk, `${utt}.wav`]));
  return { dir, ckptPath, listPath };
}

describe('extract', () => {
  it('one second of cpc-big audio gives about 100 frames of width 512', () => {
    const { dir, ckptPath, listPath } = setup('cpc-big', [['u1', 's1', 16000, 240]]);
    const report = extract({
      model: 'cpc-big',
      checkpointPath: ckptPath,
      audioListPath: listPath,
      outDir: join(dir, 'out'),
    });
    expect(report.hidden_size).toBe(512);
    expect(report.extracted_layer).toBe(2);
    expect(report.frame_period_s).toBe(0.01);
    const feats = readFeatureFile(join(dir, 'out', 'u1.ssfv'));
    expect(feats.dim).toBe(512);
    expect(feats.numFrames).toBeGreaterThanOrEqual(95);
    expect(feats.numFrames).toBeLessThanOrEqual(100);
    expect(feats.numFrames).toBe(report.n_frames);
  }, 30000);

  it('apc extracts 512-wide frames from layer 3 of a 3-layer stack', () => {
    const { dir, ckptPath, listPath } = setup('apc', [['u1', 's1', 4000, 300]]);
    const report = extract({
      model: 'apc',
      checkpointPath: ckptPath,
      audioListPath: listPath,
      outDir: join(dir, 'out'),
    });
    expect(report.hidden_size).toBe(512);
    expect(report.extracted_layer).toBe(3);
    expect(report.n_layers).toBe(3);
    expect(readFeatureFile(join(dir, 'out', 'u1.ssfv')).dim).toBe(512);
  }, 30000);

  it('writes a manifest whose frame counts match the files', () => {
    const { dir, ckptPath, listPath } = setup('cpc-small', [
      ['u1', 'spkA', 4800, 220],
      ['u2', 'spkB', 7200, 430],
    ]);
    const outDir = join(dir, 'out');
    extract({ model: 'cpc-small', checkpointPath: ckptPath, audioListPath: listPath, outDir });
    const manifest = readFileSync(join(outDir, 'manifest.tsv'), 'utf8');
    // 4800 samples -> 28 windows, 7200 -> 43, both at 256 dims.
    expect(manifest).toBe(
      'utterance_id\tspeaker_id\tfeature_path\tnum_frames\n' +
        'u1\tspkA\tu1.ssfv\t28\n' +
        'u2\tspkB\tu2.ssfv\t43\n',
    );
    for (const [utt, frames] of [
      ['u1', 28],
      ['u2', 43],
    ] as const) {
      const feats = readFeatureFile(join(outDir, `${utt}.ssfv`));
      expect(feats.numFrames).toBe(frames);
      expect(feats.dim).toBe(256);
    }
  });

  it('reruns produce byte-identical outputs', () => {
    const { dir, ckptPath, listPath } = setup('cpc-small', [['u1', 's1', 3200, 500]]);
    const outA = join(dir, 'outA');
    const outB = join(dir, 'outB');
    const config = { model: 'cpc-small', checkpointPath: ckptPath, audioListPath: listPath };
    extract({ ...config, outDir: outA });
    extract({ ...config, outDir: outB });
    for (const name of ['u1.ssfv', 'manifest.tsv']) {
      expect(readFileSync(join(outA, name)).equals(readFileSync(join(outB, name)))).toBe(true);
    }
  });

  it('rejects audio shorter than one analysis window by utterance id', () => {
    const { dir, ckptPath, listPath } = setup('cpc-small', [['tiny', 's1', 399, 300]]);
    expect(() =>
      extract({
        model: 'cpc-small',
        checkpointPath: ckptPath,
        audioListPath: listPath,
        outDir: join(dir, 'out'),
      }),
    ).toThrow(/tiny: audio is shorter/);
  });
});

describe('validateCheckpoint', () => {
  it('rejects a hidden-size mismatch with both sizes in the message', () => {
    const ckpt = makeCheckpoint('cpc-big', 8, 256, 2, 1);
    expect(() => validateCheckpoint(modelSpec('cpc-big'), ckpt, 'ck')).toThrow(
      /hidden-size mismatch: cpc-big expects 512, checkpoint declares 256/,
    );
  });

  it('rejects a checkpoint for a different model', () => {
    const ckpt = makeCheckpoint('apc', 8, 512, 3, 1);
    expect(() => validateCheckpoint(modelSpec('cpc-big'), ckpt, 'ck')).toThrow(ConfigError);
  });

  it('pins the apc stack to exactly three layers', () => {
    const shallow = makeCheckpoint('apc', 8, 512, 2, 1);
    expect(() => validateCheckpoint(modelSpec('apc'), shallow, 'ck')).toThrow(/3-layer/);
  });

  it('needs at least as many layers as the extraction point', () => {
    const shallow = makeCheckpoint('cpc-big', 8, 512, 1, 1);
    expect(() => validateCheckpoint(modelSpec('cpc-big'), shallow, 'ck')).toThrow(
      /extracts layer 2/,
    );
  });

  it('accepts table-conformant checkpoints', () => {
    const ckpt = makeCheckpoint('cpc-small', 8, 256, 2, 1);
    expect(() => validateCheckpoint(modelSpec('cpc-small'), ckpt, 'ck')).not.toThrow();
  });

  it('rejects unknown model ids up front', () => {
    expect(() => modelSpec('wav2vec')).toThrow(ConfigError);
  });
});

describe('extract input errors', () => {
  it('fails cleanly on a missing audio file', () => {
    const { dir, ckptPath, listPath } = setup('cpc-small', [['u1', 's1', 3200, 500]]);
    const brokenList = join(dir, 'broken.tsv');
    writeAudioList(brokenList, [['ghost', 's1', 'ghost.wav']]);
    expect(() =>
      extract({
        model: 'cpc-small',
        checkpointPath: ckptPath,
        audioListPath: brokenList,
        outDir: join(dir, 'out'),
      }),
    ).toThrow();
  });

  it('propagates audio format problems as data errors', () => {
    const { dir, ckptPath } = setup('cpc-small', [['u1', 's1', 3200, 500]]);
    const badWav = join(dir, 'bad.wav');
    const buf = readFileSync(join(dir, 'u1.wav'));
    buf.writeUInt32LE(44100, 24);
    writeFileSync(badWav, buf);
    const listPath = join(dir, 'bad.tsv');
    writeAudioList(listPath, [['u1', 's1', 'bad.wav']]);
    expect(() =>
      extract({
        model: 'cpc-small',
        checkpointPath: ckptPath,
        audioListPath: listPath,
        outDir: join(dir, 'out'),
      }),
    ).toThrow(DataError);
  });
});
