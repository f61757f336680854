/** Root markers are pure post-processing of fetched sigma_min samples:
 * interior local minima that dip below a threshold. The server remains the
 * single source of numeric truth. */

export interface RootMarker {
  /** Sample index of the minimum. */
  index: number;
  /** k value at the sample. */
  k: number;
  /** sigma_min value at the sample. */
  sigma: number;
}

/** Interior local minima of sigma below the threshold.
 *
 * A plateau of equal values counts once, at its first index; endpoints are
 * never markers (a root at the window edge shows up once the window moves).
 */
export function extractRootMarkers(
  k: readonly number[],
  sigma: readonly number[],
  threshold: number,
): RootMarker[] {
  if (k.length !== sigma.length) {
    throw new Error(`k and sigma lengths differ: ${k.length} vs ${sigma.length}`);
  }
  const out: RootMarker[] = [];
  for (let i = 1; i < sigma.length - 1; i++) {
    if (sigma[i] > threshold) continue;
    // Walk a plateau to its right edge to compare against the next distinct value.
    let j = i;
    while (j + 1 < sigma.length && sigma[j + 1] === sigma[i]) j++;
    if (j === sigma.length - 1) continue;
    const leftHigher = sigma[i - 1] > sigma[i];
    const rightHigher = sigma[j + 1] > sigma[i];
    if (leftHigher && rightHigher) {
      out.push({ index: i, k: k[i], sigma: sigma[i] });
      i = j; // skip the rest of the plateau
    }
  }
  return out;
}

/** Uniform-grid spacing of the sample window. */
export function sampleSpacing(k: readonly number[]): number {
  if (k.length < 2) return 0;
  return (k[k.length - 1] - k[0]) / (k.length - 1);
}

/** Marker threshold for a window: sigma_min is 1-Lipschitz in k for graphs
 * of total length one, so the sample nearest a root dips below spacing/2;
 * one full spacing gives 2x margin while staying far below the O(0.1)
 * values sigma_min keeps between roots. */
export function defaultThreshold(k: readonly number[]): number {
  return Math.max(1e-6, sampleSpacing(k));
}
