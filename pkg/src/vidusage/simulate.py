"""Seeded synthetic cohorts for desk-scale experiments.

Five stylized behaviors drive the event generator:

  linear      -- plays a stretch start to finish, pauses
  skimmer     -- short bursts separated by forward skips
  reviser     -- watches, seeks backward, re-watches (replay clusters)
  speed       -- same as linear but at 1.5x or 2x
  background  -- plays long stretches with the window out of focus

Determinism: each student gets an independent RNG derived from (seed,
student index), so the same parameters always produce the same logs
regardless of how the work is ordered.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta, timezone

from .model import EventKind, PlaybackEvent, VideoKind, VideoMeta, validate_event
from .store import EventStore

BEHAVIORS = ("linear", "skimmer", "reviser", "speed", "background")

DEFAULT_MIX = {
    "linear": 0.4,
    "skimmer": 0.2,
    "reviser": 0.2,
    "speed": 0.1,
    "background": 0.1,
}


@dataclass
class SimParams:
    students: int
    days: int
    seed: int = 0
    mix: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_MIX))
    start: date = date(2026, 1, 5)
    session_prob: float = 0.5  # chance each session opportunity is taken
    sessions_per_day: int = 1  # session opportunities per student per day
    videos_per_session: tuple[int, int] = (1, 2)

    def __post_init__(self):
        if self.students < 1:
            raise ValueError("students must be >= 1")
        if self.days < 1:
            raise ValueError("days must be >= 1")
        bad = set(self.mix) - set(BEHAVIORS)
        if bad:
            raise ValueError(f"unknown behaviors in mix: {sorted(bad)}")
        if not self.mix or sum(self.mix.values()) <= 0:
            raise ValueError("behavior mix must have positive total weight")


def default_catalog(n_videos: int, seed: int = 0) -> list[VideoMeta]:
    """A deployment-shaped catalog: mostly ~10 min screencasts plus a few
    ~80 min class recordings."""
    rng = random.Random(seed ^ 0x5EED)
    videos = []
    n_long = max(1, round(n_videos * 11 / 64)) if n_videos > 3 else 0
    for i in range(n_videos):
        is_long = i < n_long
        if is_long:
            duration = rng.randint(70 * 60, 90 * 60)
        else:
            duration = rng.randint(6 * 60, 14 * 60)
        videos.append(
            VideoMeta(
                video_id=f"vid{i:03d}",
                duration_s=duration,
                title=f"{'Lecture' if is_long else 'Screencast'} {i}",
                course_code="CA259",
                week_label=f"Week {1 + i * 12 // max(1, n_videos)}",
                kind=VideoKind.SYNCHRONOUS_RECORDING if is_long else VideoKind.ASYNCHRONOUS_SCREENCAST,
                published_at=date(2026, 1, 5),
            )
        )
    return videos


def simulate(store: EventStore, params: SimParams) -> int:
    """Generate a cohort's event logs into the store.  Returns event count."""
    catalog = store.load_catalog()
    if not catalog:
        raise ValueError("catalog is empty; create it before simulating")
    behaviors = sorted(params.mix)
    weights = [params.mix[b] for b in behaviors]
    total = 0
    for student in range(params.students):
        rng = random.Random((params.seed * 1_000_003 + student) & 0xFFFFFFFF)
        batch: list[PlaybackEvent] = []
        for day in range(params.days):
            for _ in range(params.sessions_per_day):
                if rng.random() >= params.session_prob:
                    continue
                session_id = f"{rng.getrandbits(64):016x}"
                t = datetime.combine(
                    params.start + timedelta(days=day),
                    datetime.min.time(),
                    tzinfo=timezone.utc,
                ) + timedelta(seconds=rng.uniform(8 * 3600, 22 * 3600))
                n_videos = rng.randint(*params.videos_per_session)
                for meta in rng.sample(catalog, k=min(n_videos, len(catalog))):
                    behavior = rng.choices(behaviors, weights=weights)[0]
                    events, t = _session_events(rng, session_id, meta, behavior, t)
                    batch.extend(validate_event(ev, meta) for ev in events)
                    t += timedelta(seconds=rng.uniform(10, 120))
        total += store.append_events(batch)
    return total


def _session_events(
    rng: random.Random,
    session_id: str,
    meta: VideoMeta,
    behavior: str,
    t: datetime,
) -> tuple[list[PlaybackEvent], datetime]:
    d = meta.duration_s
    ev: list[PlaybackEvent] = []

    def emit(kind: EventKind, **kw) -> None:
        ev.append(PlaybackEvent(session_id=session_id, video_id=meta.video_id, kind=kind, timestamp=t, **kw))

    def advance(seconds: float) -> None:
        nonlocal t
        t += timedelta(seconds=seconds)

    if behavior == "linear":
        pos = rng.choice([0.0, rng.uniform(0, d * 0.3)])
        watch = rng.uniform(30, min(600, d))
        emit(EventKind.PLAY, pos_s=pos)
        advance(watch)
        emit(EventKind.PAUSE, pos_s=min(d, pos + watch))

    elif behavior == "skimmer":
        pos = rng.uniform(0, d * 0.1)
        emit(EventKind.PLAY, pos_s=pos)
        for _ in range(rng.randint(2, 5)):
            burst = rng.uniform(5, 30)
            advance(burst)
            pos = min(d, pos + burst)
            jump = rng.uniform(30, 240)
            if pos + jump >= d - 1:
                break
            emit(EventKind.SEEK, pos_s=pos, to_s=pos + jump)
            pos += jump
        burst = rng.uniform(5, 20)
        advance(burst)
        emit(EventKind.PAUSE, pos_s=min(d, pos + burst))

    elif behavior == "reviser":
        span = min(d, 120.0)
        start = rng.uniform(0, max(0.0, d - span))
        watch = rng.uniform(20, span)
        emit(EventKind.PLAY, pos_s=start)
        advance(watch)
        here = min(d, start + watch)
        # backward seek into the just-watched stretch, then re-watch part of it
        emit(EventKind.SEEK, pos_s=here, to_s=start)
        rewatch = max(2.0, watch * rng.uniform(0.3, 0.9))
        advance(rewatch)
        emit(EventKind.PAUSE, pos_s=min(d, start + rewatch))

    elif behavior == "speed":
        rate = rng.choice([1.5, 2.0])
        pos = rng.uniform(0, d * 0.2)
        emit(EventKind.RATE, rate=rate)
        emit(EventKind.PLAY, pos_s=pos)
        watch_wall = rng.uniform(30, min(400, d / rate))
        advance(watch_wall)
        emit(EventKind.PAUSE, pos_s=min(d, pos + watch_wall * rate))

    else:  # background
        pos = rng.uniform(0, d * 0.2)
        emit(EventKind.PLAY, pos_s=pos)
        lead = rng.uniform(2, 10)
        advance(lead)
        emit(EventKind.FOCUS, in_focus=False)
        listen = rng.uniform(60, min(900, d))
        advance(listen)
        if rng.random() < 0.5:
            emit(EventKind.FOCUS, in_focus=True)
            advance(rng.uniform(5, 30))
        final = min(d, pos + (t - ev[0].timestamp).total_seconds())
        emit(EventKind.PAUSE, pos_s=final)

    return ev, t
