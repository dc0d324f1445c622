/** Configuration rejected before any work starts (bad model, geometry mismatch). */
export class ConfigError extends Error {
  constructor(message: string) {
    super(message);
    this.name = 'ConfigError';
  }
}

/** A file does not match its declared on-disk format. */
export class FormatError extends Error {
  constructor(message: string) {
    super(message);
    this.name = 'FormatError';
  }
}

/** Input data is well-formed but semantically unusable. */
export class DataError extends Error {
  constructor(message: string) {
    super(message);
    this.name = 'DataError';
  }
}

/**
 * Alignment source material cannot be converted. Carries the offending
 * source locations so callers can report every problem, not just the first.
 */
export class AlignmentError extends Error {
  readonly locations: readonly string[];

  constructor(message: string, locations: readonly string[] = []) {
    super(locations.length ? `${message}\n  ${locations.join('\n  ')}` : message);
    this.name = 'AlignmentError';
    this.locations = locations;
  }
}

export function isDomainError(e: unknown): e is Error {
  return (
    e instanceof ConfigError ||
    e instanceof FormatError ||
    e instanceof DataError ||
    e instanceof AlignmentError
  );
}
