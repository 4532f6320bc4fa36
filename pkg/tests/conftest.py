"""Shared builders for tests: compact event constructors and random streams."""
from __future__ import annotations

import random
from datetime import datetime, timedelta, timezone

import pytest

from vidusage.model import EventKind, PlaybackEvent, VideoMeta

T0 = datetime(2026, 3, 2, 10, 0, 0, tzinfo=timezone.utc)


def at(seconds: float, base: datetime = T0) -> datetime:
    return base + timedelta(seconds=seconds)


def ev(kind: str, t: datetime, session="s1", video="v1", **kw) -> PlaybackEvent:
    return PlaybackEvent(
        session_id=session, video_id=video, kind=EventKind(kind), timestamp=t, **kw
    )


def play(t, pos, **kw):
    return ev("play", t, pos_s=pos, **kw)


def pause(t, pos, **kw):
    return ev("pause", t, pos_s=pos, **kw)


def seek(t, pos, to, **kw):
    return ev("seek", t, pos_s=pos, to_s=to, **kw)


def rate(t, r, **kw):
    return ev("rate", t, rate=r, **kw)


def focus(t, f, **kw):
    return ev("focus", t, in_focus=f, **kw)


def end(t, pos, **kw):
    return ev("end", t, pos_s=pos, **kw)


@pytest.fixture
def meta100() -> VideoMeta:
    return VideoMeta(video_id="v1", duration_s=100)


@pytest.fixture
def meta1000() -> VideoMeta:
    return VideoMeta(video_id="v1", duration_s=1000)


def random_session_events(
    rng: random.Random,
    meta: VideoMeta,
    session_id: str,
    max_events: int = 40,
    day_span: int = 12,
) -> list[PlaybackEvent]:
    """A plausible-but-messy event stream: valid schema, arbitrary behavior.

    Timestamps are millisecond-aligned so the tick oracle lands exactly on
    event boundaries.
    """
    d = float(meta.duration_s)
    t = T0 + timedelta(days=rng.randrange(day_span), milliseconds=rng.randrange(12 * 3600 * 1000))
    events: list[PlaybackEvent] = []
    n = rng.randint(1, max_events)
    for _ in range(n):
        kind = rng.choice(["play", "play", "pause", "seek", "rate", "focus", "end"])
        pos = round(rng.uniform(0, d), 3)
        if kind == "play":
            events.append(play(t, pos, session=session_id, video=meta.video_id))
        elif kind == "pause":
            events.append(pause(t, pos, session=session_id, video=meta.video_id))
        elif kind == "seek":
            events.append(
                seek(t, pos, round(rng.uniform(0, d), 3), session=session_id, video=meta.video_id)
            )
        elif kind == "rate":
            events.append(
                rate(t, rng.choice([0.75, 1.0, 1.25, 1.5, 2.0]), session=session_id, video=meta.video_id)
            )
        elif kind == "focus":
            events.append(focus(t, rng.random() < 0.5, session=session_id, video=meta.video_id))
        else:
            events.append(end(t, pos, session=session_id, video=meta.video_id))
        t += timedelta(milliseconds=rng.randrange(1, 30_000))
    return events
