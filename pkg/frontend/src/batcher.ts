/**
 * Bounded batching queue between the UI handlers and the ingestion endpoint.
 *
 * Flushes on a fixed interval (5 s by default) and on demand (page hide).
 * A failed POST re-queues its events with an attempt count; events are
 * dropped after maxAttempts failures or when the queue outgrows maxQueued,
 * oldest first.  Losing usage signal is acceptable; unbounded memory is not.
 */
import { PlaybackEvent } from './schema';

/** Resolves true when the batch was accepted, false to trigger a retry. */
export type PostEvents = (video: string, events: PlaybackEvent[]) => Promise<boolean>;

export interface BatcherOptions {
  flushIntervalMs?: number;
  maxAttempts?: number;
  maxQueued?: number;
}

interface Queued {
  event: PlaybackEvent;
  attempts: number;
}

const DEFAULTS: Required<BatcherOptions> = {
  flushIntervalMs: 5000,
  maxAttempts: 3,
  maxQueued: 1000,
};

export class EventBatcher {
  private queue: Queued[] = [];
  private timer: ReturnType<typeof setInterval> | undefined;
  private flushing = false;
  private readonly opts: Required<BatcherOptions>;

  constructor(
    private readonly post: PostEvents,
    options: BatcherOptions = {},
  ) {
    this.opts = { ...DEFAULTS, ...options };
  }

  get pending(): number {
    return this.queue.length;
  }

  push(event: PlaybackEvent): void {
    this.queue.push({ event, attempts: 0 });
    if (this.queue.length > this.opts.maxQueued) {
      this.queue.splice(0, this.queue.length - this.opts.maxQueued);
    }
  }

  start(): void {
    if (this.timer !== undefined) return;
    this.timer = setInterval(() => void this.flush(), this.opts.flushIntervalMs);
  }

  stop(): void {
    if (this.timer !== undefined) {
      clearInterval(this.timer);
      this.timer = undefined;
    }
  }

  async flush(): Promise<void> {
    if (this.flushing || this.queue.length === 0) return;
    this.flushing = true;
    const taken = this.queue;
    this.queue = [];
    try {
      // One POST per video; order within a video is preserved.
      const byVideo = new Map<string, Queued[]>();
      for (const item of taken) {
        const bucket = byVideo.get(item.event.video);
        if (bucket) bucket.push(item);
        else byVideo.set(item.event.video, [item]);
      }
      for (const [video, items] of byVideo) {
        let ok = false;
        try {
          ok = await this.post(video, items.map((q) => q.event));
        } catch {
          ok = false;
        }
        if (!ok) {
          for (const q of items) {
            q.attempts += 1;
            if (q.attempts < this.opts.maxAttempts) this.queue.push(q);
          }
        }
      }
    } finally {
      this.flushing = false;
    }
  }
}
