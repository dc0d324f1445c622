/**
 * The 39-category phone inventory that alignment labels are mapped
 * onto. Stress-marked vowel variants (AA0, AA1, AA2) fold into their
 * base symbol; silence and noise marks are kept as their own labels so
 * the consumer can exclude them, never dropped here.
 */
export const PHONES_39: ReadonlySet<string> = new Set([
  'AA', 'AE', 'AH', 'AO', 'AW', 'AY',
  'B', 'CH', 'D', 'DH',
  'EH', 'ER', 'EY',
  'F', 'G', 'HH',
  'IH', 'IY', 'JH', 'K', 'L', 'M', 'N', 'NG',
  'OW', 'OY', 'P', 'R', 'S', 'SH', 'T', 'TH',
  'UH', 'UW', 'V', 'W', 'Y', 'Z', 'ZH',
]);

/** Silence/noise spellings seen in alignment sources, canonicalized. */
const SILENCE_MAP: Readonly<Record<string, string>> = {
  SIL: 'SIL',
  SP: 'SIL',
  SPN: 'SPN',
  NSN: 'SPN',
};

export type MappedLabel =
  | { kind: 'phone'; label: string }
  | { kind: 'silence'; label: string }
  | { kind: 'unknown'; label: string };

export function mapPhoneLabel(raw: string): MappedLabel {
  const trimmed = raw.trim();
  if (trimmed === '') {
    // Empty interval text is how TextGrid tiers mark silence.
    return { kind: 'silence', label: 'SIL' };
  }
  const upper = trimmed.toUpperCase();
  const silence = SILENCE_MAP[upper];
  if (silence) return { kind: 'silence', label: silence };

  const base = /^[A-Z]+[012]$/.test(upper) ? upper.slice(0, -1) : upper;
  if (PHONES_39.has(base)) return { kind: 'phone', label: base };
  return { kind: 'unknown', label: trimmed };
}
