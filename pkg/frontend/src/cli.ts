import { parseArgs } from 'node:util';

import { convertAlignments, type AlignmentFormat } from './alignments.js';
import { isDomainError, ConfigError } from './errors.js';
import { extract } from './extract.js';
import { MODEL_IDS } from './table.js';

export interface CliIo {
  out(text: string): void;
  err(text: string): void;
}

const USAGE = `usage: spkfeat <command> [options]

commands:
  extract             --model <${MODEL_IDS.join('|')}> --ckpt <path>
                      --audio-list <tsv> --out <dir>
  convert-alignments  --in <dir> --format <ctm|textgrid> --out <tsv>
`;

function runExtract(argv: string[], io: CliIo): number {
  const { values } = parseArgs({
    args: argv,
    options: {
      model: { type: 'string' },
      ckpt: { type: 'string' },
      'audio-list': { type: 'string' },
      out: { type: 'string' },
    },
  });
  for (const flag of ['model', 'ckpt', 'audio-list', 'out'] as const) {
    if (!values[flag]) throw new ConfigError(`extract requires --${flag}`);
  }
  const report = extract({
    model: values.model!,
    checkpointPath: values.ckpt!,
    audioListPath: values['audio-list']!,
    outDir: values.out!,
  });
  io.out(JSON.stringify(report, null, 2) + '\n');
  return 0;
}

function runConvertAlignments(argv: string[], io: CliIo): number {
  const { values } = parseArgs({
    args: argv,
    options: {
      in: { type: 'string' },
      format: { type: 'string' },
      out: { type: 'string' },
    },
  });
  for (const flag of ['in', 'format', 'out'] as const) {
    if (!values[flag]) throw new ConfigError(`convert-alignments requires --${flag}`);
  }
  if (values.format !== 'ctm' && values.format !== 'textgrid') {
    throw new ConfigError(`--format must be ctm or textgrid, got '${values.format}'`);
  }
  const result = convertAlignments(values.in!, values.format as AlignmentFormat, values.out!);
  io.out(JSON.stringify({ ...result, out: values.out }, null, 2) + '\n');
  return 0;
}

export function runCli(argv: string[], io: CliIo): number {
  const [command, ...rest] = argv;
  try {
    switch (command) {
      case 'extract':
        return runExtract(rest, io);
      case 'convert-alignments':
        return runConvertAlignments(rest, io);
      case undefined:
      case '--help':
      case '-h':
        io.out(USAGE);
        return command === undefined ? 2 : 0;
      default:
        io.err(`error: unknown command '${command}'\n${USAGE}`);
        return 2;
    }
  } catch (e) {
    if (isDomainError(e) || e instanceof TypeError) {
      // TypeError is what parseArgs throws for unknown or malformed flags.
      io.err(`error: ${(e as Error).message}\n`);
      return 2;
    }
    throw e;
  }
}
