/**
 * Page bootstrap: load config, pick a video from the catalog, wire the
 * player, tracker, batcher, and heatmap together.
 */
import { ApiClient, loadConfig, VideoMeta } from './api';
import { EventBatcher } from './batcher';
import { renderHeatmap } from './heatmap';
import { attachPlayer, PlayerElements } from './player';
import { newSessionToken } from './session';
import { InteractionTracker } from './tracker';

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

async function showVideo(api: ApiClient, batcher: EventBatcher, meta: VideoMeta): Promise<void> {
  const elements: PlayerElements = {
    video: el<HTMLVideoElement>('player'),
    playButton: el<HTMLButtonElement>('play-button'),
    scrubber: el<HTMLInputElement>('scrubber'),
    rateSelect: el<HTMLSelectElement>('rate-select'),
    remaining: el('remaining'),
  };
  el('video-title').textContent = meta.title || meta.video_id;
  el('video-context').textContent = [meta.course_code, meta.week_label].filter(Boolean).join(' · ');
  elements.scrubber.max = String(meta.duration_s);

  const tracker = new InteractionTracker(newSessionToken(), meta.video_id, (event) =>
    batcher.push(event),
  );
  attachPlayer(elements, tracker);

  const canvas = el<HTMLCanvasElement>('heatmap');
  try {
    const heatmap = await api.heatmap(meta.video_id);
    renderHeatmap(canvas, heatmap.scores);
  } catch {
    renderHeatmap(canvas, new Array(meta.duration_s).fill(0));
  }
}

async function boot(): Promise<void> {
  const config = await loadConfig();
  const api = new ApiClient(config.baseUrl);
  const batcher = new EventBatcher((video, events) => api.postEvents(video, events));
  batcher.start();
  document.addEventListener('visibilitychange', () => {
    if (document.visibilityState === 'hidden') void batcher.flush();
  });

  const videos = await api.listVideos();
  if (videos.length === 0) {
    el('video-title').textContent = 'No videos in the catalog';
    return;
  }
  const picker = el<HTMLSelectElement>('video-picker');
  for (const meta of videos) {
    const opt = document.createElement('option');
    opt.value = meta.video_id;
    opt.textContent = meta.title || meta.video_id;
    picker.appendChild(opt);
  }
  picker.addEventListener('change', () => {
    const meta = videos.find((m) => m.video_id === picker.value);
    if (meta) void showVideo(api, batcher, meta);
  });
  await showVideo(api, batcher, videos[0]);
}

void boot();
