import { HOP_SAMPLES, WINDOW_SAMPLES } from './table.js';

/**
 * Number of complete 25 ms analysis windows at a 10 ms hop.
 *
 * The tail of the signal that does not fill a whole window is dropped
 * (no padding), so one second of audio yields 98 frames, not 100.
 */
export function frameCount(nSamples: number): number {
  if (nSamples < WINDOW_SAMPLES) return 0;
  return Math.floor((nSamples - WINDOW_SAMPLES) / HOP_SAMPLES) + 1;
}

const LOG_FLOOR = 1e-10;

/**
 * Log band-energy features for every analysis window.
 *
 * Each window is Hann-weighted and probed at `nBands` evenly spaced
 * frequencies below Nyquist (Goertzel recurrence, one DFT bin per band);
 * the feature is the log magnitude-squared of each probe. Returns one
 * Float64Array of length `nBands` per frame.
 */
export function logBandEnergies(samples: Float64Array, nBands: number): Float64Array[] {
  if (!Number.isInteger(nBands) || nBands < 1 || nBands > WINDOW_SAMPLES / 2 - 1) {
    throw new RangeError(`nBands must be in [1, ${WINDOW_SAMPLES / 2 - 1}], got ${nBands}`);
  }
  const n = WINDOW_SAMPLES;
  const hann = new Float64Array(n);
  for (let t = 0; t < n; t++) {
    hann[t] = 0.5 - 0.5 * Math.cos((2 * Math.PI * t) / (n - 1));
  }
  // DFT bins for the probes, spread over (0, n/2) exclusive.
  const bins = new Array<number>(nBands);
  for (let b = 0; b < nBands; b++) {
    bins[b] = Math.max(1, Math.round(((b + 1) * (n / 2)) / (nBands + 1)));
  }
  const cosw = bins.map((k) => Math.cos((2 * Math.PI * k) / n));
  const sinw = bins.map((k) => Math.sin((2 * Math.PI * k) / n));

  const nFrames = frameCount(samples.length);
  const out: Float64Array[] = [];
  const windowed = new Float64Array(n);
  for (let f = 0; f < nFrames; f++) {
    const start = f * HOP_SAMPLES;
    for (let t = 0; t < n; t++) {
      windowed[t] = samples[start + t] * hann[t];
    }
    const feats = new Float64Array(nBands);
    for (let b = 0; b < nBands; b++) {
      const c = 2 * cosw[b];
      let s0 = 0;
      let s1 = 0;
      let s2 = 0;
      for (let t = 0; t < n; t++) {
        s0 = windowed[t] + c * s1 - s2;
        s2 = s1;
        s1 = s0;
      }
      const re = s1 * cosw[b] - s2;
      const im = s1 * sinw[b];
      feats[b] = Math.log(re * re + im * im + LOG_FLOOR);
    }
    out.push(feats);
  }
  return out;
}
