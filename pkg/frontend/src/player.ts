/**
 * Custom player controls wired to the interaction tracker: play/pause,
 * scrubber, speed menu (1x, 1.25x, 1.5x, 2x), remaining-time display.
 *
 * Focus approximation: the page is "in focus" only while it is both visible
 * and the window has focus; either signal dropping emits focus:false.
 */
import { InteractionTracker } from './tracker';
import { RATES } from './schema';

export interface PlayerElements {
  video: HTMLVideoElement;
  playButton: HTMLButtonElement;
  scrubber: HTMLInputElement;
  rateSelect: HTMLSelectElement;
  remaining: HTMLElement;
}

export function formatRemaining(currentS: number, durationS: number): string {
  const left = Math.max(0, Math.round(durationS - currentS));
  const m = Math.floor(left / 60);
  const s = left % 60;
  return `-${m}:${String(s).padStart(2, '0')}`;
}

export function attachPlayer(els: PlayerElements, tracker: InteractionTracker): void {
  const { video, playButton, scrubber, rateSelect, remaining } = els;

  rateSelect.innerHTML = '';
  for (const rate of RATES) {
    const opt = document.createElement('option');
    opt.value = String(rate);
    opt.textContent = `${rate}×`;
    if (rate === 1) opt.selected = true;
    rateSelect.appendChild(opt);
  }

  playButton.addEventListener('click', () => {
    if (video.paused) void video.play();
    else video.pause();
  });

  video.addEventListener('play', () => {
    playButton.textContent = '❚❚';
    tracker.play(video.currentTime);
  });
  video.addEventListener('pause', () => {
    playButton.textContent = '▶';
    // 'pause' also fires at media end; 'ended' is reported separately
    if (!video.ended) tracker.pause(video.currentTime);
  });
  video.addEventListener('ended', () => {
    playButton.textContent = '▶';
    tracker.end(video.duration);
  });

  rateSelect.addEventListener('change', () => {
    const rate = Number(rateSelect.value);
    video.playbackRate = rate;
    tracker.rate(rate);
  });

  // Scrubbing: remember where playback was when the drag started, emit one
  // seek per committed drop rather than one per dragged pixel.
  let scrubFrom: number | null = null;
  scrubber.addEventListener('pointerdown', () => {
    scrubFrom = video.currentTime;
  });
  scrubber.addEventListener('change', () => {
    const from = scrubFrom ?? video.currentTime;
    const to = Number(scrubber.value);
    scrubFrom = null;
    if (to !== from) tracker.seek(from, to);
    video.currentTime = to;
  });

  video.addEventListener('timeupdate', () => {
    if (!Number.isFinite(video.duration)) return;
    scrubber.max = String(video.duration);
    scrubber.value = String(video.currentTime);
    remaining.textContent = formatRemaining(video.currentTime, video.duration);
  });

  let inFocus = true;
  const updateFocus = () => {
    const now = document.visibilityState === 'visible' && document.hasFocus();
    if (now !== inFocus) {
      inFocus = now;
      tracker.focus(now);
    }
  };
  document.addEventListener('visibilitychange', updateFocus);
  window.addEventListener('focus', updateFocus);
  window.addEventListener('blur', updateFocus);
}
