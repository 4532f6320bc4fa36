/**
 * Thin client for the three service endpoints.  baseUrl comes from
 * config.json; an empty baseUrl means same-origin (the service can mount
 * this app as static files).
 */
import { PlaybackEvent } from './schema';

export interface VideoMeta {
  video_id: string;
  duration_s: number;
  title: string;
  course_code: string;
  week_label: string;
}

export interface Heatmap {
  video: string;
  duration_s: number;
  as_of: string | null;
  scores: number[];
}

export class ApiClient {
  constructor(private readonly baseUrl: string) {}

  async listVideos(): Promise<VideoMeta[]> {
    const resp = await fetch(`${this.baseUrl}/api/v1/videos`);
    if (!resp.ok) throw new Error(`videos: HTTP ${resp.status}`);
    return resp.json();
  }

  async heatmap(videoId: string): Promise<Heatmap> {
    const resp = await fetch(`${this.baseUrl}/api/v1/videos/${encodeURIComponent(videoId)}/heatmap`);
    if (!resp.ok) throw new Error(`heatmap: HTTP ${resp.status}`);
    return resp.json();
  }

  async postEvents(videoId: string, events: PlaybackEvent[]): Promise<boolean> {
    try {
      const resp = await fetch(
        `${this.baseUrl}/api/v1/videos/${encodeURIComponent(videoId)}/events`,
        {
          method: 'POST',
          headers: { 'Content-Type': 'application/json' },
          body: JSON.stringify(events),
          keepalive: true,
        },
      );
      return resp.status === 202;
    } catch {
      return false;
    }
  }
}

export async function loadConfig(): Promise<{ baseUrl: string }> {
  try {
    const resp = await fetch('config.json');
    if (resp.ok) return await resp.json();
  } catch {
    // fall through to same-origin default
  }
  return { baseUrl: '' };
}
