/**
 * Turns player interactions into schema-valid wire events.
 *
 * Pure with respect to the DOM: positions are passed in and the clock is
 * injectable, so a scripted session in a test produces a byte-stable stream.
 */
import { PlaybackEvent, SCHEMA_VERSION } from './schema';

export type Clock = () => Date;
export type EventSink = (event: PlaybackEvent) => void;

export class InteractionTracker {
  constructor(
    private readonly session: string,
    private readonly video: string,
    private readonly sink: EventSink,
    private readonly clock: Clock = () => new Date(),
  ) {}

  play(posS: number): void {
    this.emit({ type: 'play', pos: posS });
  }

  pause(posS: number): void {
    this.emit({ type: 'pause', pos: posS });
  }

  end(posS: number): void {
    this.emit({ type: 'end', pos: posS });
  }

  seek(fromS: number, toS: number): void {
    this.emit({ type: 'seek', pos: fromS, to: toS });
  }

  rate(rate: number): void {
    this.emit({ type: 'rate', rate });
  }

  focus(inFocus: boolean): void {
    this.emit({ type: 'focus', focus: inFocus });
  }

  private emit(payload: Record<string, unknown> & { type: PlaybackEvent['type'] }): void {
    this.sink({
      v: SCHEMA_VERSION,
      session: this.session,
      video: this.video,
      t: this.clock().toISOString(),
      ...payload,
    } as PlaybackEvent);
  }
}
