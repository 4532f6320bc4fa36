/**
 * Usage heatmap timeline: one vertical bar per 1-second window, drawn under
 * the player and horizontally aligned with the scrubber.
 *
 * Geometry is a pure function of (scores, width, height) so alignment and
 * bar heights are testable without a canvas.
 */
export interface Bar {
  x: number;
  y: number;
  w: number;
  h: number;
}

/** Map a media time to its horizontal pixel position on a track of `width`. */
export function timeToX(timeS: number, durationS: number, width: number): number {
  if (durationS <= 0) return 0;
  return (timeS / durationS) * width;
}

/**
 * Bars for a normalized score vector.  Window w spans media [w, w+1), so its
 * bar starts at timeToX(w) and is one window wide; height is the score
 * (clamped into [0, 1]) times the full graph height, anchored to the
 * baseline.  Zero scores render at zero height.
 */
export function barGeometry(scores: readonly number[], width: number, height: number): Bar[] {
  const n = scores.length;
  return scores.map((score, i) => {
    const clamped = Math.min(Math.max(score, 0), 1);
    const x = timeToX(i, n, width);
    const w = timeToX(i + 1, n, width) - x;
    const h = clamped * height;
    return { x, y: height - h, w, h };
  });
}

export function renderHeatmap(canvas: HTMLCanvasElement, scores: readonly number[]): void {
  const ctx = canvas.getContext('2d');
  if (!ctx) return;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.fillStyle = '#3b82d0';
  for (const bar of barGeometry(scores, canvas.width, canvas.height)) {
    if (bar.h > 0) ctx.fillRect(bar.x, bar.y, Math.max(bar.w, 1), bar.h);
  }
}
