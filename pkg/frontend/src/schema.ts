/**
 * Playback event wire schema, mirroring what the ingestion endpoint accepts.
 *
 * One JSON object per event; keys: v, session, video, type, t, then the
 * type-specific payload (pos, to, rate, focus).  Optional keys are omitted,
 * never null.
 */
import { z } from 'zod';

export const SCHEMA_VERSION = 1;

/** Rates offered by the speed control. */
export const RATES = [1, 1.25, 1.5, 2] as const;

// RFC 3339 with optional fractional seconds; Date.toISOString() matches.
const TIMESTAMP_RE = /^\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}(\.\d+)?(Z|[+-]\d{2}:\d{2})$/;

const common = {
  v: z.literal(SCHEMA_VERSION),
  session: z.string().min(1),
  video: z.string().min(1),
  t: z.string().regex(TIMESTAMP_RE, 'timestamp must be RFC 3339'),
};

const mediaPos = z.number().min(0).finite();

export const playbackEventSchema = z.discriminatedUnion('type', [
  z.object({ ...common, type: z.literal('play'), pos: mediaPos }).strict(),
  z.object({ ...common, type: z.literal('pause'), pos: mediaPos }).strict(),
  z.object({ ...common, type: z.literal('end'), pos: mediaPos }).strict(),
  z.object({ ...common, type: z.literal('seek'), pos: mediaPos, to: mediaPos }).strict(),
  z.object({ ...common, type: z.literal('rate'), rate: z.number().positive().finite() }).strict(),
  z.object({ ...common, type: z.literal('focus'), focus: z.boolean() }).strict(),
]);

export type PlaybackEvent = z.infer<typeof playbackEventSchema>;
export type EventType = PlaybackEvent['type'];
