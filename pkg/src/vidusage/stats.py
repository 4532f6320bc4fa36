"""Usage statistics over the stored logs, plus score export.

Metric definitions:

  distinct_sessions        distinct session ids seen across all video logs
  hours_streamed           total pass media-time / 3600
  mean_videos_per_session  (session, video) pairs with playback / sessions
  mean_seconds_per_session total pass media-time / sessions
  fraction viewed          per (session, video): windows covered >= 0.5 s
                           divided by duration_s; mean and population
                           stddev reported

Aggregation is session-level, so file ordering of events cannot change the
report.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

from .sessionize import covered_windows, group_by_session, reconstruct
from .store import EventStore


@dataclass(frozen=True)
class StatsReport:
    distinct_sessions: int
    hours_streamed: float
    mean_videos_per_session: float
    mean_seconds_per_session: float
    mean_fraction_viewed: float
    stddev_fraction_viewed: float

    def to_wire(self) -> dict:
        return asdict(self)


def compute_stats(store: EventStore) -> StatsReport:
    sessions: set[str] = set()
    pairs_with_playback = 0
    total_media_s = 0.0
    fractions: list[float] = []

    for meta in store.load_catalog():
        events = store.load_events(meta.video_id)
        for session_id, stream in group_by_session(events).items():
            sessions.add(session_id)
            passes, _ = reconstruct(stream, meta)
            if not passes:
                continue
            pairs_with_playback += 1
            total_media_s += sum(p.media_seconds for p in passes)
            windows: set[int] = set()
            for p in passes:
                windows.update(covered_windows(p.media_start_s, min(p.media_end_s, meta.duration_s)))
            fractions.append(len(windows) / meta.duration_s)

    n_sessions = len(sessions)
    if n_sessions == 0:
        return StatsReport(0, 0.0, 0.0, 0.0, 0.0, 0.0)
    mean_frac = sum(fractions) / len(fractions) if fractions else 0.0
    var = sum((f - mean_frac) ** 2 for f in fractions) / len(fractions) if fractions else 0.0
    return StatsReport(
        distinct_sessions=n_sessions,
        hours_streamed=total_media_s / 3600.0,
        mean_videos_per_session=pairs_with_playback / n_sessions,
        mean_seconds_per_session=total_media_s / n_sessions,
        mean_fraction_viewed=mean_frac,
        stddev_fraction_viewed=math.sqrt(var),
    )


def export_scores(
    store: EventStore,
    video_id: str,
    fmt: str,
    which: str,
    out_path: str | Path,
) -> Path:
    """Write the latest snapshot's per-window scores as csv or json rows.

    Raises NoSnapshot when the video has never been recomputed.
    """
    if fmt not in ("csv", "json"):
        raise ValueError(f"format must be csv or json, got {fmt!r}")
    if which not in ("raw", "normalized"):
        raise ValueError(f"which must be raw or normalized, got {which!r}")
    snap = store.load_snapshot(video_id)  # raises NoSnapshot
    values = snap.vector.raw if which == "raw" else snap.vector.normalized
    out_path = Path(out_path)
    if fmt == "csv":
        with open(out_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["window", "score"])
            for i, v in enumerate(values):
                writer.writerow([i, repr(float(v))])
    else:
        rows = [{"window": i, "score": float(v)} for i, v in enumerate(values)]
        out_path.write_text(json.dumps(rows) + "\n", encoding="utf-8")
    return out_path
