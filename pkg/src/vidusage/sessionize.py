"""Reconstruct playback passes and forward skips from one session's events.

The player is modeled as a little state machine: position advances at
(wall-clock delta x current rate) while playing, clamped at the video end.
Every change of rate or focus splits the current pass so each pass carries
exactly one (rate, focus) pair.  Forward seeks emit SkipEvents; backward
seeks do not.

Session start state: paused, rate 1.0, in focus (players send `play` first
and focus events only on change).  A session that never reports a pause/end
is truncated at its last event -- we never extrapolate playback the client
did not report.
"""
from __future__ import annotations

from collections import defaultdict
from enum import Enum

from .model import EventKind, PlaybackEvent, PlaybackPass, SkipEvent, VideoMeta


class Classification(str, Enum):
    FIRST_PLAY = "first_play"
    REPLAY = "replay"


# A pass must cover at least this much of a 1-second window to count for it.
# The tiny slack absorbs binary-representation error in endpoint subtraction
# (e.g. 0.7 - 0.2 < 0.5 in float64).
WINDOW_COVERAGE_MIN = 0.5 - 1e-9


def covered_windows(start_s: float, end_s: float) -> range:
    """Integer windows w with overlap([w, w+1), [start_s, end_s)) >= 0.5.

    The covered set is always a contiguous range: full interior windows plus
    the boundary windows when their partial overlap reaches the threshold.
    """
    if end_s <= start_s:
        return range(0)
    first = int(start_s)
    last = int(end_s) if end_s > int(end_s) else int(end_s) - 1
    lo = first if min(end_s, first + 1) - start_s >= WINDOW_COVERAGE_MIN else first + 1
    hi = last if end_s - max(start_s, last) >= WINDOW_COVERAGE_MIN else last - 1
    return range(lo, hi + 1) if hi >= lo else range(0)


def reconstruct(
    events: list[PlaybackEvent], meta: VideoMeta
) -> tuple[list[PlaybackPass], list[SkipEvent]]:
    """Turn one (session, video) event stream into passes and skips.

    Events must share a session_id/video_id and be sorted by timestamp
    (stable sort; ties keep arrival order).  A `play` while already playing
    resynchronizes the position to the reported one after closing the pass
    covered so far.
    """
    passes: list[PlaybackPass] = []
    skips: list[SkipEvent] = []
    if not events:
        return passes, skips
    session_id = events[0].session_id
    video_id = events[0].video_id
    duration = float(meta.duration_s)

    pos = 0.0
    rate = 1.0
    focus = True
    playing = False
    seg_start = 0.0
    seg_wall = events[0].timestamp
    last_t = events[0].timestamp

    def close_segment():
        if playing and pos > seg_start:
            passes.append(
                PlaybackPass(
                    session_id=session_id,
                    video_id=video_id,
                    media_start_s=seg_start,
                    media_end_s=pos,
                    rate=rate,
                    in_focus=focus,
                    wall_start=seg_wall,
                )
            )

    for ev in events:
        if playing:
            dt = (ev.timestamp - last_t).total_seconds()
            pos = min(duration, pos + dt * rate)
        last_t = ev.timestamp

        if ev.kind is EventKind.PLAY:
            close_segment()
            pos = min(duration, ev.pos_s if ev.pos_s is not None else pos)
            playing = True
            seg_start, seg_wall = pos, ev.timestamp
        elif ev.kind is EventKind.PAUSE:
            close_segment()
            playing = False
            if ev.pos_s is not None:
                pos = min(duration, ev.pos_s)
        elif ev.kind is EventKind.END:
            close_segment()
            playing = False
            pos = min(duration, ev.pos_s) if ev.pos_s is not None else duration
        elif ev.kind is EventKind.SEEK:
            close_segment()
            source = pos
            dest = min(duration, ev.to_s if ev.to_s is not None else pos)
            if dest > source:
                skips.append(
                    SkipEvent(
                        session_id=session_id,
                        video_id=video_id,
                        source_s=source,
                        dest_s=dest,
                        wall_at=ev.timestamp,
                    )
                )
            pos = dest
            seg_start, seg_wall = pos, ev.timestamp
        elif ev.kind is EventKind.RATE:
            close_segment()
            rate = ev.rate if ev.rate is not None else rate
            seg_start, seg_wall = pos, ev.timestamp
        elif ev.kind is EventKind.FOCUS:
            close_segment()
            focus = bool(ev.in_focus)
            seg_start, seg_wall = pos, ev.timestamp

    # A trailing un-terminated play emits nothing past the last event.
    return passes, skips


def mark_replays(passes: list[PlaybackPass]) -> list[dict[int, Classification]]:
    """Classify each pass's covered windows as first_play or replay.

    Per window, the first same-session pass covering it (>= 0.5 s) is the
    first play; every later covering pass is a replay.  Returns one
    window -> classification map per pass, aligned with the input order.
    """
    seen: defaultdict[int, int] = defaultdict(int)
    out: list[dict[int, Classification]] = []
    for p in passes:
        cls: dict[int, Classification] = {}
        for w in covered_windows(p.media_start_s, p.media_end_s):
            cls[w] = Classification.REPLAY if seen[w] else Classification.FIRST_PLAY
            seen[w] += 1
        out.append(cls)
    return out


def group_by_session(events: list[PlaybackEvent]) -> dict[str, list[PlaybackEvent]]:
    """Split a mixed stream into per-session streams, preserving order."""
    by_session: dict[str, list[PlaybackEvent]] = {}
    for ev in events:
        by_session.setdefault(ev.session_id, []).append(ev)
    return by_session
