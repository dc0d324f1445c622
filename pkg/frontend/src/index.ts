export { convertAlignments, type AlignmentFormat, type ConvertResult } from './alignments.js';
export {
  makeCheckpoint,
  readCheckpoint,
  writeCheckpoint,
  type Checkpoint,
} from './checkpoint.js';
export { parseCtm, type RawSegment } from './ctm.js';
export { AlignmentError, ConfigError, DataError, FormatError } from './errors.js';
export { extract, validateCheckpoint, type ExtractConfig, type ExtractReport } from './extract.js';
export { frameCount, logBandEnergies } from './frames.js';
export { runLayer, runStack, type LstmLayer } from './lstm.js';
export {
  readAudioList,
  writeManifest,
  type AudioListEntry,
  type ManifestEntry,
} from './manifest.js';
export { mapPhoneLabel, PHONES_39, type MappedLabel } from './phones.js';
export { readFeatureFile, writeFeatureFile, type FeatureData } from './ssfv.js';
export { MODEL_IDS, MODEL_TABLE, modelSpec, type ModelSpec } from './table.js';
export { parseTextGrid } from './textgrid.js';
export { formatTicks, parseTicks, TICKS_PER_SECOND } from './times.js';
export { encodeWav16kMono, readWav16kMono } from './wav.js';
export { runCli, type CliIo } from './cli.js';
